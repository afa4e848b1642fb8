#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sgp/errors.hpp"
#include "sgp/io.hpp"

using namespace sgp;

TEST(Io, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) EXPECT_EQ(parse_double(format_double(v)), v);
  EXPECT_THROW(parse_double("1.5x"), ParseError);
  EXPECT_THROW(parse_double(""), ParseError);
  EXPECT_EQ(parse_integer("42"), 42);
  EXPECT_THROW(parse_integer("4.2"), ParseError);
}

TEST(Io, SplitCsv) {
  EXPECT_EQ(split_csv("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(split_csv("x"), (std::vector<std::string>{"x"}));
}

TEST(Io, PointsRoundTrip) {
  const PointMatrix p = sgp::testing::random_points(17, 3, 1);
  std::stringstream s;
  write_points_csv(s, p);
  EXPECT_EQ(read_points_csv(s), p);
}

TEST(Io, PointsAnyRowOrder) {
  std::istringstream s("id,x1,x2\n1,0.5,0.25\n0,0.125,1\n");
  const PointMatrix p = read_points_csv(s);
  EXPECT_EQ(p(0, 0), 0.125);
  EXPECT_EQ(p(1, 1), 0.25);
}

TEST(Io, PointsBadIds) {
  std::istringstream gap("id,x1\n0,0.5\n2,0.25\n");
  EXPECT_THROW(read_points_csv(gap), ParseError);
  std::istringstream dup("id,x1\n0,0.5\n0,0.25\n");
  EXPECT_THROW(read_points_csv(dup), ParseError);
  std::istringstream ragged("id,x1,x2\n0,0.5\n");
  EXPECT_THROW(read_points_csv(ragged), ParseError);
}

TEST(Io, ObservationsRoundTrip) {
  const Eigen::VectorXd y = sgp::testing::random_vector(9, 2);
  std::stringstream s;
  write_observations_csv(s, y);
  EXPECT_EQ(read_observations_csv(s), y);
}

TEST(Io, PredictionsFormat) {
  std::ostringstream s;
  write_predictions_csv(s, Eigen::Vector2d(1.5, 2.0), Eigen::Vector2d(0.0, 0.25));
  EXPECT_EQ(s.str(), "id,mean,variance\n0,1.5,0\n1,2,0.25\n");
}
