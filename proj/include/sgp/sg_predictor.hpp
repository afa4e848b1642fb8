#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sgp/designs.hpp"
#include "sgp/kernels.hpp"
#include "sgp/kron_linalg.hpp"

namespace sgp {

/// Factorizations of the component matrices S_{i,j} for every dimension i and
/// level 0 <= j <= eta - d + 1 of a sparse grid. The process variance is
/// folded into dimension 1, so the Kronecker product of one factor per
/// dimension is exactly the covariance of the corresponding lattice.
///
/// Built once per (design, kernel) and shared by the weight solve, the
/// generalized solve, the variance and the log-determinant.
class ComponentFactors {
 public:
  /// Throws NotPositiveDefiniteError if any component matrix fails to factor.
  ComponentFactors(const SparseGridDesign& design, const SeparableKernel& kernel, double nugget = 0.0);

  int dim() const { return static_cast<int>(factors_.size()); }
  int max_level() const { return max_level_; }
  const SeparableKernel& kernel() const { return kernel_; }
  double nugget() const { return nugget_; }

  /// Level 0 returns the empty factorization.
  const ComponentFactorization& at(int dim, int level) const {
    return factors_[static_cast<std::size_t>(dim)][static_cast<std::size_t>(level)];
  }
  /// C_i(x, x'), including the variance scale on dimension 1.
  double component_cov(int dim, double x, double y) const {
    return scale(dim) * kernel_.component(dim)(x, y);
  }
  double scale(int dim) const { return dim == 0 ? kernel_.sigma2() : 1.0; }

 private:
  SeparableKernel kernel_;
  double nugget_;
  int max_level_;
  std::vector<std::vector<ComponentFactorization>> factors_;
};

/// One term of the combination: a(j) (⊗_i S_{i,j_i}^{-1}) A_j for the lattice
/// at position `lattice` of design.lattices(). Rows follow the lattice's
/// row-major order.
Eigen::MatrixXd lattice_term(const SparseGridDesign& design, const ComponentFactors& factors,
                             const Eigen::MatrixXd& a, std::size_t lattice);

/// out_j += term, scattering rows through the lattice map.
void scatter_add(const SparseGridDesign& design, std::size_t lattice, const Eigen::MatrixXd& term,
                 Eigen::MatrixXd& out);

/// Sigma^{-1} A for any N x m matrix A, accumulated over the combination
/// lattices. Terms are computed in parallel and added in lattice order, so
/// the result is bit-identical to serial::q_solve.
/// Throws ShapeError when A.rows() != design.size().
Eigen::MatrixXd q_solve(const SparseGridDesign& design, const ComponentFactors& factors,
                        const Eigen::MatrixXd& a);

/// w = Sigma^{-1} (y - mu).
Eigen::VectorXd compute_weights(const SparseGridDesign& design, const ComponentFactors& factors,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

namespace serial {
/// Reference implementations: one lattice at a time, no threading.
Eigen::MatrixXd q_solve(const SparseGridDesign& design, const ComponentFactors& factors,
                        const Eigen::MatrixXd& a);
Eigen::VectorXd compute_weights(const SparseGridDesign& design, const ComponentFactors& factors,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& mu);
}  // namespace serial

/// sigma(x0) = [C(x0, x_1), ..., C(x0, x_N)].
Eigen::VectorXd cross_covariance(const SparseGridDesign& design, const ComponentFactors& factors,
                                 std::span<const double> x0);

/// mu(x0) + sigma(x0)^T w.
double predict_mean(const SparseGridDesign& design, const ComponentFactors& factors,
                    const Eigen::VectorXd& w, double mean_at_x0, std::span<const double> x0);

/// Row-wise predict_mean for a batch of probes (one probe per row).
Eigen::VectorXd predict_mean(const SparseGridDesign& design, const ComponentFactors& factors,
                             const Eigen::VectorXd& w, const Eigen::VectorXd& mean_at_probes,
                             const Eigen::MatrixXd& probes);

/// The same kriging mean written as the combination of lattice predictors,
///   mu(x0) + sum_{j in P(eta)} a(j) (⊗_i S_{i,j_i}^{-1} s_{i,j_i}(x0_i))^T (y - mu)_j,
/// which never forms w. Only one-dimensional systems are solved, so the
/// rounding error scales with the component condition numbers rather than
/// with |w|; use it when Sigma is close to singular. `residual` is y - mu at
/// the design points.
double predict_mean_combination(const SparseGridDesign& design, const ComponentFactors& factors,
                                const Eigen::VectorXd& residual, double mean_at_x0, std::span<const double> x0);

Eigen::VectorXd predict_mean_combination(const SparseGridDesign& design, const ComponentFactors& factors,
                                         const Eigen::VectorXd& residual, const Eigen::VectorXd& mean_at_probes,
                                         const Eigen::MatrixXd& probes);

/// One-dimensional prediction errors eps_{i,j}(x) = C_i(x,x) - s^T S_{i,j}^{-1} s.
class VarianceProfile {
 public:
  explicit VarianceProfile(const ComponentFactors& factors, const SparseGridDesign& design);

  /// eps_{i,0}(x) = C_i(x, x).
  double epsilon(int dim, int level, double x) const;
  double delta(int dim, int level, double x) const {
    return epsilon(dim, level - 1, x) - epsilon(dim, level, x);
  }
  /// delta(dim, j, x) for j = 1..max_level, as one vector (index 0 unused).
  std::vector<double> deltas(int dim, double x) const;
  int max_level() const { return factors_->max_level(); }

 private:
  const ComponentFactors* factors_;
  std::vector<std::vector<double>> pools_;  // coordinates per dimension
};

struct VariancePrediction {
  double value;  ///< max(raw, 0)
  double raw;
};

/// C(x0,x0) - sum_{j in J(eta)} prod_i Delta_{i,j_i}(x0). The sum over J is
/// evaluated dimension by dimension over partial level budgets.
VariancePrediction predict_variance(const SparseGridDesign& design, const VarianceProfile& profile,
                                    std::span<const double> x0);
VariancePrediction predict_variance(const SparseGridDesign& design, const ComponentFactors& factors,
                                    std::span<const double> x0);

/// Batch variance (one probe per row).
std::vector<VariancePrediction> predict_variance(const SparseGridDesign& design,
                                                 const ComponentFactors& factors,
                                                 const Eigen::MatrixXd& probes);

}  // namespace sgp
