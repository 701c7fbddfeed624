// Deterministic line plots as standalone SVG documents.
#pragma once

#include <string>
#include <vector>

namespace diracstep::io {

struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct VerticalRule {
  double x = 0.0;
  std::string label;
};

struct PlotSpec {
  std::string x_column;
  std::vector<std::string> y_columns;
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 400;
  /// Drawn only when inside the x range of the data.
  std::vector<VerticalRule> rules;
};

/// One polyline per y column (non-finite samples are skipped), linear axes
/// with tick labels and a legend. Same input gives byte-identical output.
/// Throws std::invalid_argument on missing columns, no y columns or fewer
/// than two rows.
std::string render_svg(const NumericTable& table, const PlotSpec& spec);

}  // namespace diracstep::io
