#include "sgp/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgp/errors.hpp"

namespace sgp {

namespace {

int half_integer_order(double nu) {
  for (int p = 0; p <= 3; ++p) {
    if (nu == p + 0.5) return p;
  }
  throw UnsupportedSmoothnessError("Matern smoothness must be one of 0.5, 1.5, 2.5, 3.5; got " +
                                   std::to_string(nu));
}

}  // namespace

MaternKernel1D::MaternKernel1D(double nu, double phi) : nu_(nu), phi_(phi), order_(half_integer_order(nu)) {
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw std::invalid_argument("Matern lengthscale must be positive and finite");
  }
}

double MaternKernel1D::operator()(double x, double y) const {
  const double h = std::abs(x - y) / phi_;
  switch (order_) {
    case 0:
      return std::exp(-h);
    case 1: {
      const double r = std::sqrt(3.0) * h;
      return (1.0 + r) * std::exp(-r);
    }
    case 2: {
      const double r = std::sqrt(5.0) * h;
      return (1.0 + r + r * r / 3.0) * std::exp(-r);
    }
    default: {
      const double r = std::sqrt(7.0) * h;
      return (1.0 + r + 0.4 * r * r + r * r * r / 15.0) * std::exp(-r);
    }
  }
}

double matern_eval(double nu, double phi, double x, double y) { return MaternKernel1D(nu, phi)(x, y); }

SeparableKernel::SeparableKernel(std::vector<MaternKernel1D> components, double sigma2)
    : components_(std::move(components)), sigma2_(sigma2) {
  if (components_.empty()) throw std::invalid_argument("separable kernel needs a component");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("process variance must be positive and finite");
  }
}

SeparableKernel SeparableKernel::isotropic(int d, double nu, double phi, double sigma2) {
  return SeparableKernel(std::vector<MaternKernel1D>(static_cast<std::size_t>(d), MaternKernel1D(nu, phi)),
                         sigma2);
}

double SeparableKernel::operator()(std::span<const double> a, std::span<const double> b) const {
  double v = sigma2_;
  for (std::size_t i = 0; i < components_.size(); ++i) v *= components_[i](a[i], b[i]);
  return v;
}

double SeparableKernel::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                                   const Eigen::Ref<const Eigen::RowVectorXd>& b) const {
  double v = sigma2_;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    v *= components_[i](a(k), b(k));
  }
  return v;
}

Eigen::MatrixXd kernel_matrix(const MaternKernel1D& kernel, std::span<const double> pts, double sigma2,
                              double nugget) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    s(a, a) = sigma2 * (1.0 + nugget);
    for (Eigen::Index b = 0; b < a; ++b) {
      const double v = sigma2 * kernel(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]);
      s(a, b) = v;
      s(b, a) = v;
    }
  }
  if (n > 0 && Eigen::LLT<Eigen::MatrixXd>(s).info() != Eigen::Success) {
    throw NotPositiveDefiniteError("component covariance matrix is not positive definite");
  }
  return s;
}

MeanBasis MeanBasis::constant() {
  return MeanBasis({[](const Eigen::Ref<const Eigen::RowVectorXd>&) { return 1.0; }});
}

MeanBasis::MeanBasis(std::vector<Function> functions) : functions_(std::move(functions)) {
  if (functions_.empty()) throw std::invalid_argument("mean basis needs at least one function");
}

Eigen::RowVectorXd MeanBasis::evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  Eigen::RowVectorXd f(size());
  for (int l = 0; l < size(); ++l) f(l) = functions_[static_cast<std::size_t>(l)](x);
  return f;
}

Eigen::MatrixXd MeanBasis::matrix(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd f(points.rows(), size());
  for (Eigen::Index k = 0; k < points.rows(); ++k) f.row(k) = evaluate(points.row(k));
  return f;
}

}  // namespace sgp
