#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sgp::bench {

/// One row of a benchmark report.
struct ReportRow {
  std::string strategy;  ///< sparse_grid, lattice, lhs, dense
  std::uint64_t n = 0;   ///< design size
  int d = 0;
  std::string metric;
  double value = 0.0;
  double seconds = 0.0;  ///< wall clock, 0 unless recorded
  std::uint64_t seed = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// CSV with header `strategy,N,d,metric,value,seconds,seed`; reals at 17
/// significant digits so that reading back gives the same doubles.
void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report(const std::string& path, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report(std::istream& in);
std::vector<ReportRow> read_report(const std::string& path);

}  // namespace sgp::bench
