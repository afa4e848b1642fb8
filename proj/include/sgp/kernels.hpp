#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sgp {

/// Matérn correlation in one dimension for half-integer smoothness
/// nu = p + 1/2, p in {0, 1, 2, 3}, evaluated through its closed form
///   exp(-sqrt(2 nu) h) * p!/(2p)! * sum_k (p+k)!/(k!(p-k)!) (2 sqrt(2 nu) h)^(p-k)
/// with h = |x - y| / phi.
class MaternKernel1D {
 public:
  /// Throws UnsupportedSmoothnessError for nu outside {0.5, 1.5, 2.5, 3.5}
  /// and std::invalid_argument for phi <= 0.
  MaternKernel1D(double nu, double phi);

  double nu() const { return nu_; }
  double phi() const { return phi_; }

  double operator()(double x, double y) const;

 private:
  double nu_;
  double phi_;
  int order_;  // p
};

double matern_eval(double nu, double phi, double x, double y);

/// Product covariance sigma2 * prod_i R_i(x_i, x'_i).
class SeparableKernel {
 public:
  SeparableKernel(std::vector<MaternKernel1D> components, double sigma2 = 1.0);

  /// d identical components sharing one lengthscale.
  static SeparableKernel isotropic(int d, double nu, double phi, double sigma2 = 1.0);

  int dim() const { return static_cast<int>(components_.size()); }
  double sigma2() const { return sigma2_; }
  const MaternKernel1D& component(int i) const { return components_[static_cast<std::size_t>(i)]; }
  const std::vector<MaternKernel1D>& components() const { return components_; }

  /// Same components with unit variance.
  SeparableKernel correlation() const { return SeparableKernel(components_, 1.0); }
  SeparableKernel with_sigma2(double sigma2) const { return SeparableKernel(components_, sigma2); }

  double operator()(std::span<const double> a, std::span<const double> b) const;
  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                    const Eigen::Ref<const Eigen::RowVectorXd>& b) const;

 private:
  std::vector<MaternKernel1D> components_;
  double sigma2_;
};

/// Matrix of sigma2 * R(x, x') over a one-dimensional point list, plus an
/// optional diagonal nugget. Throws NotPositiveDefiniteError if the matrix
/// fails a Cholesky factorization (repeated points, degenerate parameters).
Eigen::MatrixXd kernel_matrix(const MaternKernel1D& kernel, std::span<const double> pts,
                              double sigma2 = 1.0, double nugget = 0.0);

/// Mean basis f_1..f_p; the default is the single constant function.
class MeanBasis {
 public:
  using Function = std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)>;

  static MeanBasis constant();
  explicit MeanBasis(std::vector<Function> functions);

  int size() const { return static_cast<int>(functions_.size()); }
  Eigen::RowVectorXd evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  /// N x p matrix F with F(k, l) = f_l(x_k).
  Eigen::MatrixXd matrix(const Eigen::MatrixXd& points) const;

 private:
  std::vector<Function> functions_;
};

}  // namespace sgp
