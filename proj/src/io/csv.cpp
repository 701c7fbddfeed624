#include "diracstep/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace diracstep::io {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_scatter_csv(std::ostream& out, const std::vector<scattering::SweepRow>& rows) {
  out << kScatterHeader << '\n';
  for (const auto& row : rows) {
    const auto& q = row.query;
    out << format_number(q.energy) << ',' << format_number(q.step_height) << ','
        << format_number(q.mass) << ',' << scattering::to_string(q.coupling) << ',';
    if (row.result) {
      const auto& r = *row.result;
      out << format_number(r.incident_factor) << ',' << format_number(r.transmitted_factor.real())
          << ',' << format_number(r.transmitted_factor.imag()) << ','
          << format_number(r.reflection_amplitude.real()) << ','
          << format_number(r.reflection_amplitude.imag()) << ','
          << format_number(r.transmission_amplitude.real()) << ','
          << format_number(r.transmission_amplitude.imag()) << ',' << format_number(r.reflection)
          << ',' << format_number(r.transmission) << ',' << scattering::to_string(r.regime);
    } else {
      for (int i = 0; i < 9; ++i) out << "nan,";
      out << scattering::to_string(row.status);
    }
    out << '\n';
  }
}

void write_observables_csv(std::ostream& out,
                           const std::vector<dynamics::ObservableRecord>& records) {
  out << kObservableHeader << '\n';
  for (const auto& r : records) {
    out << r.step << ',' << format_number(r.time) << ',' << format_number(r.norm) << ','
        << format_number(r.mean_x) << ',' << format_number(r.p_left) << ','
        << format_number(r.p_right) << ',' << format_number(r.current) << '\n';
  }
}

void write_snapshot_csv(std::ostream& out, const dynamics::WavePacketState& state) {
  out << kSnapshotHeader << '\n';
  for (std::size_t j = 0; j < state.grid.points(); ++j) {
    out << format_number(state.grid.x(j)) << ',' << format_number(state.upper[j].real()) << ','
        << format_number(state.upper[j].imag()) << ',' << format_number(state.lower[j].real())
        << ',' << format_number(state.lower[j].imag()) << '\n';
  }
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const std::string& cell = rows.at(row).at(column(name));
  if (cell == "nan") return std::nan("");
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size()) {
    throw std::runtime_error("not a number in column '" + std::string(name) + "': " + cell);
  }
  return value;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw std::runtime_error("row has " + std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace diracstep::io
