#include <cmath>
#include <string>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "sgp/dense_oracle.hpp"
#include "sgp/errors.hpp"

namespace sgp {

namespace {

using Quad = boost::multiprecision::float128;
using MatrixQ = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

Quad covariance(const SeparableKernel& kernel, const Eigen::Ref<const Eigen::RowVectorXd>& a,
                const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  Quad v = kernel.sigma2();
  for (int i = 0; i < kernel.dim(); ++i) v *= Quad(kernel.component(i)(a(i), b(i)));
  return v;
}

MatrixQ covariance_matrix(const PointMatrix& points, const SeparableKernel& kernel) {
  const Eigen::Index n = points.rows();
  MatrixQ s(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      s(a, b) = covariance(kernel, points.row(a), points.row(b));
      s(b, a) = s(a, b);
    }
  }
  return s;
}

MatrixQ to_quad(const Eigen::MatrixXd& m) { return m.cast<Quad>(); }

Eigen::MatrixXd to_double(const MatrixQ& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) out(r, c) = static_cast<double>(m(r, c));
  }
  return out;
}

Quad logdet(const Eigen::LLT<MatrixQ>& llt) {
  Quad total = 0;
  for (Eigen::Index i = 0; i < llt.matrixLLT().rows(); ++i) total += log(llt.matrixLLT()(i, i));
  return 2 * total;
}

Eigen::LLT<MatrixQ> factor(const MatrixQ& s) {
  Eigen::LLT<MatrixQ> llt(s);
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("reference covariance is not positive definite");
  return llt;
}

void guard(const PointMatrix& points, const DenseOptions& options) {
  if (static_cast<std::size_t>(points.rows()) > options.max_points) {
    throw DenseGuardError("reference solver refuses " + std::to_string(points.rows()) + " points");
  }
}

}  // namespace

struct ReferenceGpModel::Impl {
  PointMatrix points;
  SeparableKernel kernel;
  MatrixQ sigma;
  Eigen::LLT<MatrixQ> llt;
  VectorQ w;
  Eigen::VectorXd w_double;
};

ReferenceGpModel::ReferenceGpModel(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ReferenceGpModel::ReferenceGpModel(ReferenceGpModel&&) noexcept = default;
ReferenceGpModel& ReferenceGpModel::operator=(ReferenceGpModel&&) noexcept = default;
ReferenceGpModel::~ReferenceGpModel() = default;

ReferenceGpModel ReferenceGpModel::fit(const PointMatrix& points, const SeparableKernel& kernel,
                                       const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                                       const DenseOptions& options) {
  if (points.cols() != kernel.dim()) throw ShapeError("reference fit: point dimension differs from kernel");
  if (y.size() != points.rows() || mu.size() != points.rows()) {
    throw ShapeError("reference fit: observations misaligned with points");
  }
  guard(points, options);
  auto impl = std::make_unique<Impl>(Impl{points, kernel, covariance_matrix(points, kernel), {}, {}, {}});
  impl->llt = factor(impl->sigma);
  impl->w = impl->llt.solve(VectorQ(to_quad(y - mu)));
  impl->w_double = to_double(impl->w);
  return ReferenceGpModel(std::move(impl));
}

const Eigen::VectorXd& ReferenceGpModel::weights() const { return impl_->w_double; }

double ReferenceGpModel::log_determinant() const { return static_cast<double>(logdet(impl_->llt)); }

Eigen::MatrixXd ReferenceGpModel::solve(const Eigen::MatrixXd& b) const {
  return to_double(impl_->llt.solve(to_quad(b)));
}

Eigen::MatrixXd ReferenceGpModel::multiply(const Eigen::MatrixXd& b) const {
  return to_double(impl_->sigma * to_quad(b));
}

DensePrediction ReferenceGpModel::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x0, double mean_at_x0) const {
  const Eigen::Index n = impl_->points.rows();
  VectorQ s(n);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = covariance(impl_->kernel, x0, impl_->points.row(k));
  const VectorQ half = impl_->llt.matrixL().solve(s);
  const Quad mean = Quad(mean_at_x0) + s.dot(impl_->w);
  const Quad variance = covariance(impl_->kernel, x0, x0) - half.squaredNorm();
  return {static_cast<double>(mean), static_cast<double>(variance)};
}

ProfileEvaluation reference_profile_loglik(const PointMatrix& points, const Eigen::MatrixXd& f,
                                           const Eigen::VectorXd& y, double nu, double phi,
                                           const DenseOptions& options) {
  guard(points, options);
  const auto kernel = SeparableKernel::isotropic(static_cast<int>(points.cols()), nu, phi);
  const auto llt = factor(covariance_matrix(points, kernel));
  const MatrixQ fq = to_quad(f);
  const VectorQ yq = to_quad(y);
  const MatrixQ rf = llt.solve(fq);
  const MatrixQ normal = fq.transpose() * rf;
  const Eigen::FullPivLU<MatrixQ> lu(normal);
  if (!lu.isInvertible()) throw SingularBasisError("reference GLS: singular F^T R^-1 F");
  const VectorQ beta = lu.solve(VectorQ(rf.transpose() * yq));
  const VectorQ r = yq - fq * beta;
  const VectorQ rr = llt.solve(r);
  const Quad n = static_cast<double>(y.size());
  const Quad sigma2 = r.dot(rr) / n;
  const Quad ld = logdet(llt);

  ProfileEvaluation e;
  e.phi = phi;
  e.beta = to_double(beta);
  e.sigma2 = static_cast<double>(sigma2);
  e.logdet = static_cast<double>(ld);
  e.loglik = static_cast<double>(-0.5 * (n * log(sigma2) + ld + n));
  return e;
}

}  // namespace sgp
