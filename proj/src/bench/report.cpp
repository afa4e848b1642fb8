#include "sgp/bench/report.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "sgp/errors.hpp"
#include "sgp/io.hpp"

namespace sgp::bench {

namespace {
constexpr const char* kHeader = "strategy,N,d,metric,value,seconds,seed";
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << r.strategy << ',' << r.n << ',' << r.d << ',' << r.metric << ',' << format_double(r.value) << ','
        << format_double(r.seconds) << ',' << r.seed << '\n';
  }
}

void write_report(const std::string& path, const std::vector<ReportRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write report " + path);
  write_report(out, rows);
}

std::vector<ReportRow> read_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ParseError("report: missing header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw ParseError("report: expected 7 fields in `" + line + "`");
    ReportRow r;
    r.strategy = f[0];
    r.n = static_cast<std::uint64_t>(parse_integer(f[1]));
    r.d = static_cast<int>(parse_integer(f[2]));
    r.metric = f[3];
    r.value = parse_double(f[4]);
    r.seconds = parse_double(f[5]);
    r.seed = std::stoull(f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ReportRow> read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open report " + path);
  return read_report(in);
}

}  // namespace sgp::bench
