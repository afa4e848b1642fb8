#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

#include "sgp/designs.hpp"
#include "sgp/kernels.hpp"
#include "sgp/likelihood.hpp"

namespace sgp {

/// Reference Gaussian-process computations on the full N x N covariance.
/// Works for any point set; used as ground truth for the sparse-grid fast
/// path and as the solver for lattice and Latin-hypercube baselines.

struct DenseOptions {
  /// Refuse to factor more than this many points.
  std::size_t max_points = 5000;
};

/// Sigma(k, l) = C(x_k, x_l).
Eigen::MatrixXd dense_covariance(const PointMatrix& points, const SeparableKernel& kernel);

/// K(r, k) = C(probe_r, x_k).
Eigen::MatrixXd dense_cross_covariance(const PointMatrix& probes, const PointMatrix& points,
                                       const SeparableKernel& kernel);

struct DensePrediction {
  double mean;
  double variance;
};

class DenseGpModel {
 public:
  /// Builds and factors Sigma and solves w = Sigma^{-1}(y - mu). Throws
  /// DenseGuardError above options.max_points, NotPositiveDefiniteError if
  /// the factorization fails, ShapeError on misaligned inputs.
  static DenseGpModel fit(PointMatrix points, const SeparableKernel& kernel, Eigen::VectorXd y,
                          Eigen::VectorXd mu, const DenseOptions& options = {});

  const PointMatrix& points() const { return points_; }
  const SeparableKernel& kernel() const { return kernel_; }
  const Eigen::VectorXd& weights() const { return w_; }
  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }
  double log_determinant() const;

  /// Kriging mean mu(x0) + sigma^T w and variance C(x0,x0) - sigma^T Sigma^{-1} sigma.
  DensePrediction predict(const Eigen::Ref<const Eigen::RowVectorXd>& x0, double mean_at_x0) const;

 private:
  DenseGpModel(PointMatrix points, const SeparableKernel& kernel) : points_(std::move(points)), kernel_(kernel) {}

  PointMatrix points_;
  SeparableKernel kernel_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd y_, mu_, w_;
};

/// Known-mean model with mu = F beta.
DenseGpModel dense_fit(const PointMatrix& points, const SeparableKernel& kernel, const Eigen::MatrixXd& f,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& beta, const DenseOptions& options = {});

DensePrediction dense_predict(const DenseGpModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& x0,
                              double mean_at_x0);

/// GLS estimate with a unit-variance kernel.
Eigen::VectorXd dense_beta_hat(const PointMatrix& points, const SeparableKernel& correlation,
                               const Eigen::MatrixXd& f, const Eigen::VectorXd& y, const DenseOptions& options = {});

double dense_sigma2_hat(const PointMatrix& points, const SeparableKernel& correlation, const Eigen::MatrixXd& f,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& beta, const DenseOptions& options = {});

/// log |Sigma| by Cholesky.
double dense_logdet(const PointMatrix& points, const SeparableKernel& kernel, const DenseOptions& options = {});

/// L(beta, sigma2, phi) = -(N log sigma2 + log|R| + r^T R^{-1} r / sigma2) / 2
/// for an isotropic Matérn correlation.
double dense_loglik(const PointMatrix& points, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& beta, double sigma2, double nu, double phi,
                    const DenseOptions& options = {});

ProfileEvaluation dense_profile_loglik(const PointMatrix& points, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                                       double nu, double phi, const DenseOptions& options = {});

MleResult dense_mle(const PointMatrix& points, const Eigen::MatrixXd& f, const Eigen::VectorXd& y, double nu,
                    double lo, double hi, const MleOptions& mle_options = {}, const DenseOptions& options = {});

/// The same dense computations carried out in 113-bit binary128 arithmetic.
/// Covariance entries are products of the double-precision component
/// values, so the reference solves exactly the system the fast path sees;
/// only the rounding of the factorization and solves differs. Results are
/// rounded back to double. Meant for checking the fast path on instances
/// whose condition number defeats a double-precision Cholesky.
class ReferenceGpModel {
 public:
  static ReferenceGpModel fit(const PointMatrix& points, const SeparableKernel& kernel, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& mu, const DenseOptions& options = {});
  ReferenceGpModel(ReferenceGpModel&&) noexcept;
  ReferenceGpModel& operator=(ReferenceGpModel&&) noexcept;
  ~ReferenceGpModel();

  const Eigen::VectorXd& weights() const;
  double log_determinant() const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  /// Sigma b, with the products accumulated in extended precision.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& b) const;
  DensePrediction predict(const Eigen::Ref<const Eigen::RowVectorXd>& x0, double mean_at_x0) const;

 private:
  struct Impl;
  explicit ReferenceGpModel(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// Extended-precision counterpart of dense_profile_loglik.
ProfileEvaluation reference_profile_loglik(const PointMatrix& points, const Eigen::MatrixXd& f,
                                           const Eigen::VectorXd& y, double nu, double phi,
                                           const DenseOptions& options = {});

}  // namespace sgp
