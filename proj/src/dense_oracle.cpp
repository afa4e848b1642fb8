#include "sgp/dense_oracle.hpp"

#include <cmath>
#include <span>
#include <string>

#include "sgp/errors.hpp"
#include "sgp/kron_linalg.hpp"

namespace sgp {

namespace {

using RowMajorPoints = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::span<const double> row_span(const RowMajorPoints& p, Eigen::Index r) {
  return {p.row(r).data(), static_cast<std::size_t>(p.cols())};
}

void guard(std::size_t n, const DenseOptions& options) {
  if (n > options.max_points) {
    throw DenseGuardError("dense solver refuses " + std::to_string(n) + " points (guard is " +
                          std::to_string(options.max_points) + ")");
  }
}

Eigen::LLT<Eigen::MatrixXd> factor(const PointMatrix& points, const SeparableKernel& kernel,
                                   const DenseOptions& options) {
  guard(static_cast<std::size_t>(points.rows()), options);
  Eigen::LLT<Eigen::MatrixXd> llt(dense_covariance(points, kernel));
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("dense covariance is not positive definite");
  if (!(llt.rcond() >= kMinReciprocalCondition)) {
    throw NotPositiveDefiniteError("dense covariance is numerically singular");
  }
  return llt;
}

double llt_logdet(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

Eigen::MatrixXd dense_covariance(const PointMatrix& points, const SeparableKernel& kernel) {
  const Eigen::Index n = points.rows();
  const RowMajorPoints pts = points;
  Eigen::MatrixXd s(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double v = kernel(row_span(pts, a), row_span(pts, b));
      s(a, b) = v;
      s(b, a) = v;
    }
  }
  return s;
}

Eigen::MatrixXd dense_cross_covariance(const PointMatrix& probes, const PointMatrix& points,
                                       const SeparableKernel& kernel) {
  const RowMajorPoints pr = probes;
  const RowMajorPoints pts = points;
  Eigen::MatrixXd k(probes.rows(), points.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < probes.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.rows(); ++c) k(r, c) = kernel(row_span(pr, r), row_span(pts, c));
  }
  return k;
}

DenseGpModel DenseGpModel::fit(PointMatrix points, const SeparableKernel& kernel, Eigen::VectorXd y,
                               Eigen::VectorXd mu, const DenseOptions& options) {
  if (points.cols() != kernel.dim()) throw ShapeError("dense_fit: point dimension differs from kernel");
  if (y.size() != points.rows() || mu.size() != points.rows()) {
    throw ShapeError("dense_fit: observations misaligned with points");
  }
  DenseGpModel m(std::move(points), kernel);
  m.llt_ = factor(m.points_, kernel, options);
  m.y_ = std::move(y);
  m.mu_ = std::move(mu);
  m.w_ = m.llt_.solve(m.y_ - m.mu_);
  return m;
}

double DenseGpModel::log_determinant() const { return llt_logdet(llt_); }

DensePrediction DenseGpModel::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x0, double mean_at_x0) const {
  const Eigen::VectorXd sigma = dense_cross_covariance(x0, points_, kernel_).row(0).transpose();
  const Eigen::VectorXd half = llt_.matrixL().solve(sigma);
  return {mean_at_x0 + sigma.dot(w_), kernel_(x0, x0) - half.squaredNorm()};
}

DenseGpModel dense_fit(const PointMatrix& points, const SeparableKernel& kernel, const Eigen::MatrixXd& f,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& beta, const DenseOptions& options) {
  return DenseGpModel::fit(points, kernel, y, f * beta, options);
}

DensePrediction dense_predict(const DenseGpModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& x0,
                              double mean_at_x0) {
  return model.predict(x0, mean_at_x0);
}

namespace {

Eigen::VectorXd gls(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& f, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd rf = llt.solve(f);
  const Eigen::MatrixXd normal = f.transpose() * rf;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) throw SingularBasisError("dense GLS: singular F^T R^-1 F");
  return lu.solve(rf.transpose() * y);
}

double quad_form(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& r) {
  return llt.matrixL().solve(r).squaredNorm();
}

}  // namespace

Eigen::VectorXd dense_beta_hat(const PointMatrix& points, const SeparableKernel& correlation,
                               const Eigen::MatrixXd& f, const Eigen::VectorXd& y, const DenseOptions& options) {
  return gls(factor(points, correlation, options), f, y);
}

double dense_sigma2_hat(const PointMatrix& points, const SeparableKernel& correlation, const Eigen::MatrixXd& f,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& beta, const DenseOptions& options) {
  const auto llt = factor(points, correlation, options);
  return quad_form(llt, y - f * beta) / static_cast<double>(y.size());
}

double dense_logdet(const PointMatrix& points, const SeparableKernel& kernel, const DenseOptions& options) {
  return llt_logdet(factor(points, kernel, options));
}

double dense_loglik(const PointMatrix& points, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& beta, double sigma2, double nu, double phi, const DenseOptions& options) {
  const auto llt = factor(points, SeparableKernel::isotropic(static_cast<int>(points.cols()), nu, phi), options);
  const auto n = static_cast<double>(y.size());
  return -0.5 * (n * std::log(sigma2) + llt_logdet(llt) + quad_form(llt, y - f * beta) / sigma2);
}

ProfileEvaluation dense_profile_loglik(const PointMatrix& points, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                                       double nu, double phi, const DenseOptions& options) {
  const auto llt = factor(points, SeparableKernel::isotropic(static_cast<int>(points.cols()), nu, phi), options);
  ProfileEvaluation e;
  e.phi = phi;
  e.beta = gls(llt, f, y);
  e.sigma2 = quad_form(llt, y - f * e.beta) / static_cast<double>(y.size());
  e.logdet = llt_logdet(llt);
  const auto n = static_cast<double>(y.size());
  e.loglik = -0.5 * (n * std::log(e.sigma2) + e.logdet + n);
  return e;
}

MleResult dense_mle(const PointMatrix& points, const Eigen::MatrixXd& f, const Eigen::VectorXd& y, double nu,
                    double lo, double hi, const MleOptions& mle_options, const DenseOptions& options) {
  return maximize_profile([&](double phi) { return dense_profile_loglik(points, f, y, nu, phi, options); }, lo, hi,
                          mle_options);
}

}  // namespace sgp
