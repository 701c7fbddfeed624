#include "diracstep/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace diracstep::io {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#8c564b"};
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 130.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo <= 0.0) {
      const double pad = lo == 0.0 ? 0.5 : 0.1 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
};

/// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double fraction = raw / magnitude;
  const double nice = fraction < 1.5 ? 1.0 : fraction < 3.5 ? 2.0 : fraction < 7.5 ? 5.0 : 10.0;
  return nice * magnitude;
}

std::vector<double> ticks(const Range& r) {
  const double step = nice_step(r.hi - r.lo, 5);
  std::vector<double> out;
  for (double k = std::ceil(r.lo / step - 1e-9); k * step <= r.hi + 1e-9 * step; k += 1.0) {
    out.push_back(k * step);
  }
  return out;
}

std::size_t find_column(const NumericTable& table, const std::string& name) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), name);
  if (it == table.columns.end()) throw std::invalid_argument("plot column '" + name + "' missing");
  return static_cast<std::size_t>(it - table.columns.begin());
}

}  // namespace

std::string render_svg(const NumericTable& table, const PlotSpec& spec) {
  if (spec.y_columns.empty()) throw std::invalid_argument("plot needs at least one y column");
  if (table.rows.size() < 2) throw std::invalid_argument("plot needs at least two rows");
  const std::size_t xi = find_column(table, spec.x_column);
  std::vector<std::size_t> yi;
  for (const auto& name : spec.y_columns) yi.push_back(find_column(table, name));
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("ragged plot table");
  }

  Range xr, yr;
  for (const auto& row : table.rows) {
    xr.include(row[xi]);
    for (auto i : yi) yr.include(row[i]);
  }
  const double data_x_lo = xr.lo;
  const double data_x_hi = xr.hi;
  xr.finish();
  yr.finish();

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << fixed(spec.width / 2.0) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(spec.title) << "</text>\n";

  // Axes frame and ticks.
  svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<rect x=\"" << fixed(kMarginLeft) << "\" y=\"" << fixed(kMarginTop) << "\" width=\""
      << fixed(plot_w) << "\" height=\"" << fixed(plot_h) << "\"/>\n";
  for (double t : ticks(xr)) {
    svg << "<line x1=\"" << fixed(px(t)) << "\" y1=\"" << fixed(kMarginTop + plot_h) << "\" x2=\""
        << fixed(px(t)) << "\" y2=\"" << fixed(kMarginTop + plot_h + 5) << "\"/>\n";
  }
  for (double t : ticks(yr)) {
    svg << "<line x1=\"" << fixed(kMarginLeft - 5) << "\" y1=\"" << fixed(py(t)) << "\" x2=\""
        << fixed(kMarginLeft) << "\" y2=\"" << fixed(py(t)) << "\"/>\n";
  }
  svg << "</g>\n<g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ticks(xr)) {
    svg << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(kMarginTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ticks(yr)) {
    svg << "<text x=\"" << fixed(kMarginLeft - 8) << "\" y=\"" << fixed(py(t) + 4)
        << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  svg << "</g>\n"
      << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"" << fixed(spec.height - 10.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(spec.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << fixed(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << fixed(kMarginTop + plot_h / 2) << ")\">"
      << escape(spec.y_label) << "</text>\n";

  for (const auto& rule : spec.rules) {
    if (!(rule.x >= data_x_lo && rule.x <= data_x_hi)) continue;
    svg << "<line class=\"rule\" x1=\"" << fixed(px(rule.x)) << "\" y1=\"" << fixed(kMarginTop)
        << "\" x2=\"" << fixed(px(rule.x)) << "\" y2=\"" << fixed(kMarginTop + plot_h)
        << "\" stroke=\"gray\" stroke-dasharray=\"6 4\" data-x=\"" << tick_label(rule.x)
        << "\"/>\n"
        << "<text x=\"" << fixed(px(rule.x) + 4) << "\" y=\"" << fixed(kMarginTop + 14)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">" << escape(rule.label)
        << "</text>\n";
  }

  for (std::size_t s = 0; s < yi.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : table.rows) {
      const double x = row[xi];
      const double y = row[yi[s]];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      svg << (first ? "" : " ") << fixed(px(x)) << ',' << fixed(py(y));
      first = false;
    }
    svg << "\"/>\n";
  }

  svg << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t s = 0; s < yi.size(); ++s) {
    const double y = kMarginTop + 10.0 + 18.0 * static_cast<double>(s);
    const double x = kMarginLeft + plot_w + 12.0;
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(x + 20)
        << "\" y2=\"" << fixed(y) << "\" stroke=\"" << kPalette[s % kPalette.size()]
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fixed(x + 26) << "\" y=\"" << fixed(y + 4) << "\">"
        << escape(spec.y_columns[s]) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace diracstep::io
