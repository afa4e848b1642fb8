#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sgp/errors.hpp"
#include "sgp/kernels.hpp"

using namespace sgp;

namespace {

// Matérn correlation straight from the Bessel-function definition.
double matern_bessel(double nu, double phi, double x, double y) {
  const double h = std::abs(x - y) / phi;
  if (h == 0.0) return 1.0;
  const double t = std::sqrt(2.0 * nu) * h;
  return std::pow(t, nu) * std::cyl_bessel_k(nu, t) / (std::pow(2.0, nu - 1.0) * std::tgamma(nu));
}

}  // namespace

TEST(Matern, ClosedFormsMatchBesselDefinition) {
  for (double nu : {0.5, 1.5, 2.5, 3.5}) {
    for (double phi : {0.1, 0.75, 2.0}) {
      for (double dist : {1e-3, 0.05, 0.3, 1.0, 2.5}) {
        const double ref = matern_bessel(nu, phi, 0.2, 0.2 + dist);
        EXPECT_NEAR(matern_eval(nu, phi, 0.2, 0.2 + dist), ref, 1e-12 * std::max(1.0, ref))
            << "nu=" << nu << " phi=" << phi << " h=" << dist;
      }
    }
  }
}

TEST(Matern, Examples) {
  EXPECT_EQ(matern_eval(2.5, 0.3, 0.4, 0.4), 1.0);
  EXPECT_NEAR(matern_eval(0.5, 1.0, 0.0, 1.0), std::exp(-1.0), 1e-15);
  const double r5 = std::sqrt(5.0);
  EXPECT_NEAR(matern_eval(2.5, 1.0, 0.0, 1.0), (1.0 + r5 + 5.0 / 3.0) * std::exp(-r5), 1e-15);
}

TEST(Matern, Properties) {
  for (double nu : {0.5, 1.5, 2.5, 3.5}) {
    const MaternKernel1D k(nu, 0.6);
    double prev = 1.0;
    for (int s = 0; s <= 200; ++s) {
      const double x = 0.3;
      const double y = 0.3 + s * 0.01;
      const double v = k(x, y);
      EXPECT_LE(v, prev);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
      EXPECT_EQ(v, k(y, x));
      EXPECT_NEAR(v, matern_eval(nu, 1.0, x / 0.6, y / 0.6), 1e-14);
      prev = v;
    }
  }
}

TEST(Matern, Errors) {
  EXPECT_THROW(MaternKernel1D(1.0, 1.0), UnsupportedSmoothnessError);
  EXPECT_THROW(MaternKernel1D(4.5, 1.0), UnsupportedSmoothnessError);
  EXPECT_THROW(matern_eval(0.75, 1.0, 0.0, 0.0), UnsupportedSmoothnessError);
  EXPECT_THROW(MaternKernel1D(2.5, 0.0), std::invalid_argument);
}

TEST(SeparableKernel, ProductOfComponents) {
  const SeparableKernel k({MaternKernel1D(0.5, 0.3), MaternKernel1D(2.5, 1.2), MaternKernel1D(1.5, 0.7)}, 2.5);
  const std::vector<double> a{0.1, 0.2, 0.3};
  const std::vector<double> b{0.5, 0.9, 0.0};
  const double expect = 2.5 * matern_eval(0.5, 0.3, 0.1, 0.5) * matern_eval(2.5, 1.2, 0.2, 0.9) *
                        matern_eval(1.5, 0.7, 0.3, 0.0);
  EXPECT_DOUBLE_EQ(k(a, b), expect);
  EXPECT_EQ(k(a, a), 2.5);
  EXPECT_EQ(k.correlation()(a, a), 1.0);
  const Eigen::RowVectorXd ea = Eigen::Map<const Eigen::RowVectorXd>(a.data(), 3);
  const Eigen::RowVectorXd eb = Eigen::Map<const Eigen::RowVectorXd>(b.data(), 3);
  EXPECT_EQ(k(ea, eb), k(a, b));
}

TEST(KernelMatrix, Basics) {
  const MaternKernel1D k(2.5, 0.5);
  const std::vector<double> one{0.3};
  const auto m1 = kernel_matrix(k, one, 1.7);
  ASSERT_EQ(m1.rows(), 1);
  EXPECT_EQ(m1(0, 0), 1.7);

  const std::vector<double> pts{0.0, 0.2, 0.5, 0.9};
  const auto m = kernel_matrix(k, pts);
  EXPECT_EQ(m, m.transpose());
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(m).info(), Eigen::Success);

  const std::vector<double> twice{0.4, 0.4};
  EXPECT_THROW(kernel_matrix(k, twice), NotPositiveDefiniteError);
}

TEST(MeanBasis, ConstantAndCustom) {
  const auto c = MeanBasis::constant();
  EXPECT_EQ(c.size(), 1);
  const PointMatrix p = sgp::testing::random_points(5, 2, 1);
  EXPECT_EQ(c.matrix(p), Eigen::MatrixXd::Ones(5, 1));
  const MeanBasis lin({[](const Eigen::Ref<const Eigen::RowVectorXd>&) { return 1.0; },
                       [](const Eigen::Ref<const Eigen::RowVectorXd>& x) { return x(0); }});
  const auto f = lin.matrix(p);
  EXPECT_EQ(f.col(1), p.col(0));
}
