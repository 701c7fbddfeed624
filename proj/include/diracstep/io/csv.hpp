// CSV emission for sweep rows, observable records and field snapshots.
// Numbers are printed with 17 significant digits so every double round-trips.
#pragma once

#include "diracstep/dynamics.hpp"
#include "diracstep/scattering.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace diracstep::io {

std::string format_number(double value);

inline constexpr std::string_view kScatterHeader =
    "E,V0,m0,coupling,a,re_b,im_b,re_R,im_R,re_T,im_T,r,t,regime";
inline constexpr std::string_view kObservableHeader = "step,time,norm,mean_x,p_left,p_right,current";
inline constexpr std::string_view kSnapshotHeader = "x,re_psi_up,im_psi_up,re_psi_dn,im_psi_dn";

/// Error rows keep their query columns, print "nan" for every result column
/// and carry the row status ("invalid" / "singular") in the regime column.
void write_scatter_csv(std::ostream& out, const std::vector<scattering::SweepRow>& rows);
void write_observables_csv(std::ostream& out,
                           const std::vector<dynamics::ObservableRecord>& records);
void write_snapshot_csv(std::ostream& out, const dynamics::WavePacketState& state);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

/// Plain comma-separated parser (no quoting; none of our schemas need it).
/// Throws std::runtime_error on ragged rows.
CsvTable parse_csv(std::istream& in);

}  // namespace diracstep::io
