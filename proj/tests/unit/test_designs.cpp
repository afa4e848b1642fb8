#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sgp/designs.hpp"
#include "sgp/errors.hpp"

using namespace sgp;
using sgp::testing::boundary_schedule;

namespace {

using Point = std::vector<double>;

std::set<Point> point_set(const PointMatrix& p) {
  std::set<Point> out;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Point x(static_cast<std::size_t>(p.cols()));
    for (Eigen::Index c = 0; c < p.cols(); ++c) x[static_cast<std::size_t>(c)] = p(r, c);
    out.insert(x);
  }
  return out;
}

// Naive construction: every lattice of every j with |j| <= eta, then dedupe.
std::set<Point> naive_union(const std::vector<ComponentSchedule>& s, int eta) {
  const int d = static_cast<int>(s.size());
  std::set<Point> out;
  std::vector<int> j(static_cast<std::size_t>(d), 1);
  while (true) {
    int sum = 0;
    for (int v : j) sum += v;
    if (sum <= eta) {
      std::vector<std::vector<double>> axes;
      for (int i = 0; i < d; ++i) {
        const auto pts = s[static_cast<std::size_t>(i)].points_at(j[static_cast<std::size_t>(i)]);
        axes.emplace_back(pts.begin(), pts.end());
      }
      for (const auto& p : point_set(build_lattice(axes))) out.insert(p);
    }
    int k = d - 1;
    while (k >= 0 && j[static_cast<std::size_t>(k)] == eta - d + 1) j[static_cast<std::size_t>(k--)] = 1;
    if (k < 0) break;
    ++j[static_cast<std::size_t>(k)];
  }
  return out;
}

// Schedule with the given level sizes, coordinates spread over (0,1).
ComponentSchedule sized_schedule(const std::vector<int>& sizes) {
  std::vector<std::vector<double>> inc;
  int prev = 0;
  int next = 0;
  const int total = sizes.back();
  for (int m : sizes) {
    std::vector<double> level;
    for (int k = prev; k < m; ++k) level.push_back((next++ + 0.5) / total);
    inc.push_back(level);
    prev = m;
  }
  return ComponentSchedule::from_increments(inc);
}

std::uint64_t enumerate_size(const std::vector<int>& h, int d, int eta) {
  std::uint64_t total = 0;
  std::vector<int> j(static_cast<std::size_t>(d), 1);
  while (true) {
    int sum = 0;
    for (int v : j) sum += v;
    if (sum <= eta) {
      std::uint64_t prod = 1;
      for (int v : j) {
        prod *= static_cast<std::uint64_t>(h[static_cast<std::size_t>(v)] - h[static_cast<std::size_t>(v - 1)]);
      }
      total += prod;
    }
    int k = d - 1;
    while (k >= 0 && j[static_cast<std::size_t>(k)] == eta - d + 1) j[static_cast<std::size_t>(k--)] = 1;
    if (k < 0) break;
    ++j[static_cast<std::size_t>(k)];
  }
  return total;
}

}  // namespace

TEST(ComponentSchedule, PrefixSizes) {
  const auto s = boundary_schedule();
  EXPECT_EQ(s.levels(), 5);
  EXPECT_EQ(s.size_at(0), 0u);
  EXPECT_EQ(s.size_at(1), 1u);
  EXPECT_EQ(s.size_at(3), 5u);
  EXPECT_EQ(s.increment_size(2), 2u);
  EXPECT_THROW(s.size_at(6), ScheduleTooShortError);
  EXPECT_EQ(s.level_of_slot(0), 1);
  EXPECT_EQ(s.level_of_slot(4), 3);
}

TEST(ComponentSchedule, RejectsBadIncrements) {
  EXPECT_THROW(ComponentSchedule::from_increments({{}}), InvalidScheduleError);
  EXPECT_THROW(ComponentSchedule::from_increments({{0.5}, {0.25, 0.5}}), InvalidScheduleError);
}

TEST(BuiltinSchedules, ListedIncrements) {
  const auto spread = make_schedule(BuiltinSchedule::spread, 7).increments();
  const std::vector<std::vector<double>> expect{{.5},         {.125, .875},   {.25, .75},    {0, 1},
                                                {.375, .625}, {.1875, .8125}, {.0625, .9375}};
  EXPECT_EQ(spread, expect);
  const auto boundary = make_schedule(BuiltinSchedule::boundary_early, 5);
  EXPECT_EQ(boundary, boundary_schedule());
  const auto hc = make_schedule(BuiltinSchedule::hyperbolic_cross, 3);
  EXPECT_EQ(hc.size_at(3), 7u);
  const auto pts = hc.points_at(3);
  std::set<double> got(pts.begin(), pts.end());
  EXPECT_EQ(got, (std::set<double>{.125, .25, .375, .5, .625, .75, .875}));
}

TEST(BuiltinSchedules, RefinementKeepsSymmetryAndNesting) {
  for (auto kind : {BuiltinSchedule::spread, BuiltinSchedule::boundary_early}) {
    const auto s = make_schedule(kind, 12);
    EXPECT_GE(s.levels(), 12);
    for (int l = 2; l <= 12; ++l) {
      const auto pts = s.points_at(l);
      std::set<double> set(pts.begin(), pts.end());
      EXPECT_EQ(set.size(), pts.size());
      for (double x : pts) EXPECT_TRUE(set.count(1.0 - x)) << x;
    }
  }
}

TEST(SparseGrid, FortyOnePointDesign) {
  const auto g = build_sparse_grid({boundary_schedule(), boundary_schedule()}, 6);
  EXPECT_EQ(g.size(), 41u);
}

TEST(SparseGrid, SinglePointAtEtaEqualsD) {
  const auto g = sgp::testing::grid(BuiltinSchedule::spread, 3, 3);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.points(), PointMatrix::Constant(1, 3, 0.5));
}

TEST(SparseGrid, EqualsNaiveUnion) {
  for (auto kind : {BuiltinSchedule::spread, BuiltinSchedule::boundary_early, BuiltinSchedule::hyperbolic_cross}) {
    for (int d = 1; d <= 3; ++d) {
      for (int eta = d; eta <= d + 4; ++eta) {
        const auto g = sgp::testing::grid(kind, d, eta);
        const auto pts = g.points();
        EXPECT_EQ(point_set(pts).size(), g.size());
        EXPECT_EQ(point_set(pts), naive_union(g.schedules(), eta));
        EXPECT_EQ(g.size(), sample_size(g.schedules(), eta));
      }
    }
  }
  const auto g = build_sparse_grid({boundary_schedule(), boundary_schedule()}, 4);
  EXPECT_EQ(point_set(g.points()), naive_union(g.schedules(), 4));
}

TEST(SparseGrid, LatticeMapsAreTotalAndRowMajor) {
  const auto g = sgp::testing::grid(BuiltinSchedule::spread, 3, 7);
  const auto pts = g.points();
  ASSERT_EQ(g.lattices().size(), 35u);
  for (std::size_t q = 0; q < g.lattices().size(); ++q) {
    const auto& j = g.lattices()[q];
    const auto map = g.lattice_map(q);
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < 3; ++i) {
      const auto a = g.schedules()[static_cast<std::size_t>(i)].points_at(j[static_cast<std::size_t>(i)]);
      axes.emplace_back(a.begin(), a.end());
    }
    const auto lattice = build_lattice(axes);
    ASSERT_EQ(map.size(), static_cast<std::size_t>(lattice.rows()));
    std::set<std::uint32_t> ids(map.begin(), map.end());
    EXPECT_EQ(ids.size(), map.size());
    for (std::size_t r = 0; r < map.size(); ++r) {
      EXPECT_EQ(pts.row(map[r]), lattice.row(static_cast<Eigen::Index>(r)));
    }
  }
}

TEST(SparseGrid, Nested) {
  for (auto kind : {BuiltinSchedule::spread, BuiltinSchedule::hyperbolic_cross}) {
    for (int d = 1; d <= 4; ++d) {
      for (int eta = d; eta < d + 4; ++eta) {
        const auto small = sgp::testing::grid(kind, d, eta).points();
        const auto big = sgp::testing::grid(kind, d, eta + 1).points();
        const auto bs = point_set(big);
        for (const auto& p : point_set(small)) EXPECT_TRUE(bs.count(p));
        EXPECT_EQ(small, big.topRows(small.rows()));
      }
    }
  }
}

TEST(SparseGrid, Errors) {
  EXPECT_THROW(sgp::testing::grid(BuiltinSchedule::spread, 3, 2), InvalidLevelError);
  EXPECT_THROW(build_sparse_grid({boundary_schedule(), boundary_schedule()}, 8), ScheduleTooShortError);
  EXPECT_THROW(build_sparse_grid({}, 2), InvalidDesignError);
}

TEST(SampleSize, RandomSchedulesMatchConstruction) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> inc(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const int eta = d + trial % 4;
    std::vector<ComponentSchedule> s;
    for (int i = 0; i < d; ++i) {
      std::vector<int> sizes;
      int m = 0;
      for (int l = 0; l < eta - d + 1; ++l) sizes.push_back(m += inc(rng));
      s.push_back(sized_schedule(sizes));
    }
    const auto g = build_sparse_grid(s, eta);
    EXPECT_EQ(g.size(), sample_size(s, eta));
    EXPECT_EQ(point_set(g.points()).size(), g.size());
  }
}

TEST(SampleSize, ClosedFormsMatchEnumeration) {
  for (int c = 1; c <= 3; ++c) {
    for (int d = 1; d <= 5; ++d) {
      for (int eta = d; eta <= d + 5; ++eta) {
        const int levels = eta - d + 1;
        std::vector<int> linear{0}, affine{0};
        for (int j = 1; j <= levels; ++j) {
          linear.push_back(c * j);
          affine.push_back(c * (j - 1) + 1);
        }
        const std::vector<ComponentSchedule> s1(static_cast<std::size_t>(d),
                                                sized_schedule({linear.begin() + 1, linear.end()}));
        const std::vector<ComponentSchedule> s2(static_cast<std::size_t>(d),
                                                sized_schedule({affine.begin() + 1, affine.end()}));
        std::uint64_t cd = 1;
        for (int k = 0; k < d; ++k) cd *= static_cast<std::uint64_t>(c);
        EXPECT_EQ(sample_size(s1, eta), cd * binomial(eta, d));
        EXPECT_EQ(enumerate_size(linear, d, eta), cd * binomial(eta, d));
        std::uint64_t row2 = 0;
        std::uint64_t ck = 1;
        for (int k = 0; k <= std::min(d, eta - d); ++k, ck *= static_cast<std::uint64_t>(c)) {
          row2 += ck * binomial(d, k) * binomial(eta - d, k);
        }
        EXPECT_EQ(sample_size(s2, eta), row2);
        EXPECT_EQ(enumerate_size(affine, d, eta), row2);
        if (row2 <= 3000) {
          EXPECT_EQ(build_sparse_grid(s2, eta).size(), row2);
        }
      }
    }
  }
  const std::vector<ComponentSchedule> s(2, sized_schedule({1, 3, 5}));
  EXPECT_EQ(sample_size(s, 4), 13u);
  EXPECT_EQ(sample_size(std::vector<ComponentSchedule>(2, sized_schedule({1, 2})), 3), 3u);
}

TEST(Lattice, Products) {
  EXPECT_EQ(build_lattice({{0, 1}, {0, 1}}), (PointMatrix(4, 2) << 0, 0, 0, 1, 1, 0, 1, 1).finished());
  EXPECT_EQ(build_lattice(std::vector<std::vector<double>>(10, {0.25, 0.75})).rows(), 1024);
  EXPECT_EQ(build_lattice({{1, 2, 3}, {4, 5}, {6}}).rows(), 6);
  EXPECT_THROW(build_lattice({{0.5}, {}}), InvalidDesignError);
  EXPECT_THROW(build_lattice({}), InvalidDesignError);
}

TEST(LatinHypercube, Strata) {
  EXPECT_EQ(build_lhs(1, 3, 5).rows(), 1);
  for (int n : {4, 17}) {
    const auto p = build_lhs(n, 3, 9);
    for (int c = 0; c < 3; ++c) {
      std::set<int> strata;
      for (int r = 0; r < n; ++r) {
        EXPECT_GE(p(r, c), 0.0);
        EXPECT_LT(p(r, c), 1.0);
        strata.insert(static_cast<int>(std::floor(p(r, c) * n)));
      }
      EXPECT_EQ(strata.size(), static_cast<std::size_t>(n));
    }
  }
  EXPECT_EQ(build_lhs(20, 4, 3), build_lhs(20, 4, 3));
  EXPECT_NE(build_lhs(20, 4, 3), build_lhs(20, 4, 4));
}

TEST(ScheduleFile, RoundTripAndBroadcast) {
  std::stringstream ss;
  const std::vector<ComponentSchedule> two{boundary_schedule(), make_schedule(BuiltinSchedule::spread, 4)};
  write_schedule(ss, two);
  EXPECT_EQ(read_schedule(ss, 2), two);

  std::istringstream one("# one dimension only\n1 1 0.5\n1 2 0 1\n");
  const auto s = read_schedule(one, 3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].size_at(2), 3u);

  std::istringstream gap("1 1 0.5\n1 3 0 1\n");
  EXPECT_THROW(read_schedule(gap, 1), ParseError);
  std::istringstream dup("1 1 0.5\n1 2 0.5 1\n");
  EXPECT_THROW(read_schedule(dup, 1), InvalidScheduleError);
}

TEST(SampleSize, SeventyDimensionalExample) {
  const std::vector<ComponentSchedule> s(70, make_schedule(BuiltinSchedule::spread, 4));
  EXPECT_EQ(sample_size(s, 73), 467321u);
}
