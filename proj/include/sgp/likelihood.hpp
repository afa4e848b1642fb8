#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgp/designs.hpp"
#include "sgp/sg_predictor.hpp"

namespace sgp {

/// log |Sigma| of a sparse grid covariance from the component
/// log-determinants alone:
///   sum_{j in J(eta)} sum_i (log|S_{i,j_i}| - log|S_{i,j_i-1}|) prod_{k != i} #(X_{k,j_k} \ X_{k,j_k-1})
/// with log|S_{i,0}| = 0.
double sg_logdet(const SparseGridDesign& design, const ComponentFactors& factors);

/// Generalized least squares coefficients (F^T R^{-1} F)^{-1} F^T R^{-1} y via
/// q_solve. `factors` must be built from a unit-variance kernel.
/// Throws SingularBasisError when F^T R^{-1} F is singular.
Eigen::VectorXd beta_hat(const SparseGridDesign& design, const ComponentFactors& factors,
                         const Eigen::MatrixXd& f, const Eigen::VectorXd& y);

/// N^{-1} r^T R^{-1} r with r = y - F beta. Throws NumericalFailureError if the
/// quadratic form is negative beyond -1e-12 |y|^2; smaller negatives clamp to 0.
double sigma2_hat(const SparseGridDesign& design, const ComponentFactors& factors,
                  const Eigen::MatrixXd& f, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

/// One evaluation of the concentrated log-likelihood at a lengthscale.
struct ProfileEvaluation {
  double phi = 0.0;
  double loglik = 0.0;  ///< -(N log sigma2 + log|R| + N) / 2
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
  double logdet = 0.0;  ///< log |R_phi|
};

/// Profile likelihood of an isotropic Matérn correlation with smoothness nu.
ProfileEvaluation profile_loglik(const SparseGridDesign& design, const Eigen::MatrixXd& f,
                                 const Eigen::VectorXd& y, double nu, double phi, double nugget = 0.0);

struct MleOptions {
  double log_tolerance = 1e-3;  ///< final bracket width in log(phi)
  int max_evaluations = 100;
};

struct MleResult {
  Eigen::VectorXd beta_hat;
  double sigma2_hat = 0.0;
  double phi_hat = 0.0;
  double loglik = 0.0;
  double logdet = 0.0;
  int n_evals = 0;
  bool bracket_edge = false;
  std::vector<std::pair<double, double>> trace;  ///< (phi, loglik) per probe
};

/// Golden-section search on log(phi) over [lo, hi]. Probes whose evaluation
/// throws or is NaN count as -infinity; +infinity (sigma2 = 0) beats any finite value. The result is the best probe.
/// Throws FitFailureError if no probe is finite, std::invalid_argument on a
/// bad bracket.
MleResult maximize_profile(const std::function<ProfileEvaluation(double)>& evaluate, double lo, double hi,
                           const MleOptions& options = {});

/// maximize_profile over the sparse-grid profile likelihood.
MleResult fit_mle(const SparseGridDesign& design, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                  double nu, double lo, double hi, const MleOptions& options = {}, double nugget = 0.0);

/// Process variance to build a predictor from: sigma2_hat, or 1 when the
/// mean reproduces y exactly and sigma2_hat is 0. The kriging mean does not
/// depend on it.
inline double kernel_variance(double sigma2_hat) { return sigma2_hat > 0.0 ? sigma2_hat : 1.0; }

/// Weights Sigma^{-1} (y - F beta) at the fitted parameters.
Eigen::VectorXd fitted_weights(const SparseGridDesign& design, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                               double nu, const MleResult& fit, double nugget = 0.0);

}  // namespace sgp
