#include "sgp/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "sgp/errors.hpp"

namespace sgp {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads `id,v1,...,vk` rows after a header and returns them indexed by id.
Eigen::MatrixXd read_id_table(std::istream& in, const std::string& what, Eigen::Index expected_cols) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(what + ": empty file");
  const auto header = split_csv(line);
  if (header.empty() || trim(header[0]) != "id") throw ParseError(what + ": header must start with `id`");
  const auto cols = static_cast<Eigen::Index>(header.size()) - 1;
  if (cols < 1 || (expected_cols > 0 && cols != expected_cols)) throw ParseError(what + ": unexpected columns");

  std::vector<std::pair<long long, std::vector<double>>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (static_cast<Eigen::Index>(fields.size()) != cols + 1) {
      throw ParseError(what + " line " + std::to_string(line_no) + ": wrong number of fields");
    }
    std::vector<double> values;
    for (std::size_t k = 1; k < fields.size(); ++k) values.push_back(parse_double(fields[k]));
    rows.emplace_back(parse_integer(fields[0]), std::move(values));
  }

  const auto n = static_cast<long long>(rows.size());
  Eigen::MatrixXd out(n, cols);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [id, values] : rows) {
    if (id < 0 || id >= n || seen[static_cast<std::size_t>(id)]) {
      throw ParseError(what + ": ids must be 0..N-1, each once (bad id " + std::to_string(id) + ")");
    }
    seen[static_cast<std::size_t>(id)] = true;
    for (Eigen::Index c = 0; c < cols; ++c) out(id, c) = values[static_cast<std::size_t>(c)];
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  const std::string f = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
    throw ParseError("not a number: `" + field + "`");
  }
  return v;
}

long long parse_integer(const std::string& field) {
  const std::string f = trim(field);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
    throw ParseError("not an integer: `" + field + "`");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void write_points_csv(std::ostream& out, const PointMatrix& points) {
  out << "id";
  for (Eigen::Index c = 0; c < points.cols(); ++c) out << ",x" << (c + 1);
  out << '\n';
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    out << r;
    for (Eigen::Index c = 0; c < points.cols(); ++c) out << ',' << format_double(points(r, c));
    out << '\n';
  }
}

void write_points_csv(const std::string& path, const PointMatrix& points) {
  auto out = open_out(path);
  write_points_csv(out, points);
}

PointMatrix read_points_csv(std::istream& in) { return read_id_table(in, "points file", 0); }

PointMatrix read_points_csv(const std::string& path) {
  auto in = open_in(path);
  return read_points_csv(in);
}

void write_observations_csv(std::ostream& out, const Eigen::VectorXd& y) {
  out << "id,y\n";
  for (Eigen::Index r = 0; r < y.size(); ++r) out << r << ',' << format_double(y(r)) << '\n';
}

Eigen::VectorXd read_observations_csv(std::istream& in) { return read_id_table(in, "observation file", 1).col(0); }

Eigen::VectorXd read_observations_csv(const std::string& path) {
  auto in = open_in(path);
  return read_observations_csv(in);
}

void write_predictions_csv(std::ostream& out, const Eigen::VectorXd& mean, const Eigen::VectorXd& variance) {
  if (mean.size() != variance.size()) throw ShapeError("prediction columns differ in length");
  out << "id,mean,variance\n";
  for (Eigen::Index r = 0; r < mean.size(); ++r) {
    out << r << ',' << format_double(mean(r)) << ',' << format_double(variance(r)) << '\n';
  }
}

void write_predictions_csv(const std::string& path, const Eigen::VectorXd& mean, const Eigen::VectorXd& variance) {
  auto out = open_out(path);
  write_predictions_csv(out, mean, variance);
}

}  // namespace sgp
