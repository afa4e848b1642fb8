#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sgp/bench/config.hpp"
#include "sgp/bench/report.hpp"
#include "sgp/bench/studies.hpp"
#include "sgp/bench/test_functions.hpp"
#include "sgp/errors.hpp"
#include "sgp/io.hpp"

using namespace sgp;
using namespace sgp::bench;

namespace {

void check_fixture(const std::string& name, const std::string& file, double tol) {
  std::ifstream in(std::string(SGP_FIXTURE_DIR) + "/" + file);
  ASSERT_TRUE(in) << file;
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    std::vector<double> x;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) x.push_back(parse_double(fields[i]));
    const double want = parse_double(fields.back());
    EXPECT_NEAR(eval_test_function(name, x), want, tol * std::max(1.0, std::abs(want))) << line;
    ++rows;
  }
  EXPECT_GT(rows, 0);
}

}  // namespace

TEST(TestFunctions, FixtureValues) {
  check_fixture("franke", "franke.csv", 1e-13);
  check_fixture("borehole", "borehole.csv", 1e-13);
}

TEST(TestFunctions, ClosedForms) {
  const std::vector<double> q{0.25, 0.25, 0.25};
  EXPECT_DOUBLE_EQ(eval_test_function("product_peak", q), 1.0);
  const std::vector<double> z(4, 0.0);
  EXPECT_DOUBLE_EQ(eval_test_function("corner_peak", z), 1.0);
  const std::vector<double> o(4, 1.0);
  EXPECT_DOUBLE_EQ(eval_test_function("corner_peak", o), std::pow(2.0, -5.0));
  const std::vector<double> r{1.0, 1.0};
  EXPECT_DOUBLE_EQ(eval_test_function("rosenbrock", r), 400.0 * std::pow(0.5 - 0.5, 2));
  const std::vector<double> r1{0.5};
  EXPECT_EQ(eval_test_function("rosenbrock", r1), 0.0);
  EXPECT_EQ(eval_test_function("constant", z), 1.0);
}

TEST(TestFunctions, Errors) {
  const std::vector<double> x{0.1, 0.2, 0.3};
  EXPECT_THROW(eval_test_function("nope", x), UnknownFunctionError);
  EXPECT_THROW(eval_test_function("franke", x), ShapeError);
  EXPECT_THROW(test_function_dim("nope"), UnknownFunctionError);
  EXPECT_EQ(test_function_dim("borehole"), 8);
  EXPECT_EQ(test_function_dim("product_peak"), 0);
}

TEST(Config, ParsesAndRejects) {
  std::istringstream in("# comment\nd = 3\nnu=1.5  # trailing\netas = 3 4, 5\n\nflag = true\n");
  const auto c = Config::parse(in);
  EXPECT_EQ(c.get_int("d", 0), 3);
  EXPECT_EQ(c.get_double("nu", 0.0), 1.5);
  EXPECT_EQ(c.get_int_list("etas"), (std::vector<int>{3, 4, 5}));
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_double("phi", 0.75), 0.75);
  EXPECT_THROW(c.require_known({"d", "nu"}), ConfigError);
  std::istringstream dup("d = 1\nd = 2\n");
  EXPECT_THROW(Config::parse(dup), ConfigError);
  std::istringstream junk("just words\n");
  EXPECT_THROW(Config::parse(junk), ConfigError);
}

TEST(Config, StudyKeysAreChecked) {
  Config c;
  c.set("d", "2");
  c.set("bogus", "1");
  EXPECT_THROW(rmspe_config(c), ConfigError);
  EXPECT_THROW(mape_config(c), ConfigError);
  EXPECT_THROW(timing_config(c), ConfigError);
}

TEST(Report, RoundTrip) {
  std::vector<ReportRow> rows{{"sparse_grid", 41, 2, "RMSPE", 0.1 / 3.0, 0.0, 7},
                              {"lhs", 100, 4, "MAPE_failed", std::nan(""), 1.25, 18446744073709551615ull}};
  std::stringstream s;
  write_report(s, rows);
  const auto back = read_report(s);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], rows[0]);
  EXPECT_TRUE(std::isnan(back[1].value));
  EXPECT_EQ(back[1].seed, rows[1].seed);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "strategy,N,d,metric,value,seconds,seed");
}

TEST(Studies, LatticeAxis) {
  EXPECT_EQ(lattice_axis(1), (std::vector<double>{0.5}));
  EXPECT_EQ(lattice_axis(2), (std::vector<double>{0.25, 0.75}));
  EXPECT_EQ(lattice_axis(3), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Studies, RmspeZeroDrawsGiveNoRows) {
  RmspeConfig c;
  c.d = 2;
  c.arms.etas = {3, 4};
  c.n_mc = 0;
  EXPECT_TRUE(rmspe_study(c).empty());
}

TEST(Studies, RmspeIsDeterministicAndDecreases) {
  RmspeConfig c;
  c.d = 2;
  c.n_mc = 40;
  c.n_probe = 100;
  c.arms.etas = {4, 5, 6};
  c.arms.lattice_levels = {3};
  c.arms.lhs_sizes = {20};
  const auto a = rmspe_study(c);
  const auto b = rmspe_study(c);
  ASSERT_EQ(a.size(), 5u);
  std::ostringstream sa, sb;
  write_report(sa, a);
  write_report(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_GT(a[0].value, a[1].value);
  EXPECT_GT(a[1].value, a[2].value);
  for (const auto& r : a) {
    EXPECT_EQ(r.metric, "RMSPE");
    EXPECT_EQ(r.seconds, 0.0);
  }
}

TEST(Studies, ConstantFunctionIsPredictedExactly) {
  MapeConfig c;
  c.function = "constant";
  c.d = 2;
  c.n_probe = 50;
  c.arms.etas = {4};
  c.arms.lattice_levels = {3};
  const auto rows = mape_study(c);
  int mape_rows = 0;
  for (const auto& r : rows) {
    if (r.metric == "MAPE") {
      EXPECT_LE(r.value, 1e-6) << r.strategy;
      ++mape_rows;
    }
  }
  EXPECT_EQ(mape_rows, 2);
}

TEST(Studies, TimingSmall) {
  TimingConfig c;
  c.d = 3;
  c.eta = 6;
  c.trials = 1;
  const auto rows = timing_study(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].metric, "weight_agreement");
  EXPECT_LE(rows[0].value, 1e-8);
  EXPECT_EQ(rows[1].strategy, "sparse_grid");
  EXPECT_EQ(rows[2].strategy, "dense");
}
