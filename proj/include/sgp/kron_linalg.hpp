#pragma once

#include <span>

#include <Eigen/Dense>

namespace sgp {

/// Factorizations whose estimated reciprocal condition number falls below
/// this are rejected as numerically singular.
inline constexpr double kMinReciprocalCondition = 1e-13;

/// Cholesky factorization of one component covariance matrix S_{i,j}.
/// A default-constructed factorization stands for the empty level-0 matrix
/// (size 0, log-determinant 0).
class ComponentFactorization {
 public:
  ComponentFactorization() = default;
  /// Throws NotPositiveDefiniteError when the factorization fails or the
  /// matrix is numerically singular (see kMinReciprocalCondition).
  explicit ComponentFactorization(const Eigen::MatrixXd& s);

  Eigen::Index size() const { return size_; }
  double log_determinant() const { return logdet_; }
  const Eigen::MatrixXd& lower() const { return lower_; }

  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Overwrites b with S^{-1} b. One step of iterative refinement follows the
  /// triangular solves, with the residual b - S x accumulated in long double.
  template <typename Derived>
  void solve_in_place(Eigen::MatrixBase<Derived>& b) const {
    const auto l = lower_.triangularView<Eigen::Lower>();
    Eigen::MatrixXd x = b;
    l.solveInPlace(x);
    l.transpose().solveInPlace(x);
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      for (Eigen::Index r = 0; r < size_; ++r) {
        long double acc = b(r, c);
        for (Eigen::Index k = 0; k < size_; ++k) {
          acc -= static_cast<long double>(matrix_(r, k)) * static_cast<long double>(x(k, c));
        }
        b(r, c) = static_cast<double>(acc);
      }
    }
    l.solveInPlace(b);
    l.transpose().solveInPlace(b);
    b += x;
  }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd lower_;
  Eigen::Index size_ = 0;
  double logdet_ = 0.0;
};

double component_logdet(const ComponentFactorization& factor);

/// Applies (S_1^{-1} ⊗ ... ⊗ S_d^{-1}) to every column of b in place. Rows of
/// b are ordered row-major over the factor sizes with dimension d fastest.
/// One sweep per dimension; the Kronecker product is never formed.
/// Throws ShapeError when b.rows() differs from the product of the sizes.
void kron_solve_in_place(std::span<const ComponentFactorization* const> factors,
                         Eigen::Ref<Eigen::MatrixXd> b);

Eigen::MatrixXd kron_solve(std::span<const ComponentFactorization* const> factors, Eigen::MatrixXd b);

}  // namespace sgp
