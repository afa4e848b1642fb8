#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgp/designs.hpp"

namespace sgp {

/// Shortest-safe round-trip text for a double: 17 significant digits.
std::string format_double(double v);

/// Strict parse of a whole field; throws ParseError on trailing junk.
double parse_double(const std::string& field);
long long parse_integer(const std::string& field);

/// Splits one CSV line on commas (no quoting; fields are numbers or names).
std::vector<std::string> split_csv(const std::string& line);

/// `id,x1,...,xd`, ids 0..N-1.
void write_points_csv(std::ostream& out, const PointMatrix& points);
void write_points_csv(const std::string& path, const PointMatrix& points);

/// Reads a points file. Rows may come in any order; the ids must be exactly
/// 0..N-1 and row k of the result is the point with id k.
PointMatrix read_points_csv(std::istream& in);
PointMatrix read_points_csv(const std::string& path);

/// `id,y`, with the same id rules as the points file.
void write_observations_csv(std::ostream& out, const Eigen::VectorXd& y);
Eigen::VectorXd read_observations_csv(std::istream& in);
Eigen::VectorXd read_observations_csv(const std::string& path);

/// `id,mean,variance`.
void write_predictions_csv(std::ostream& out, const Eigen::VectorXd& mean, const Eigen::VectorXd& variance);
void write_predictions_csv(const std::string& path, const Eigen::VectorXd& mean, const Eigen::VectorXd& variance);

}  // namespace sgp
