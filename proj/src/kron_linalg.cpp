#include "sgp/kron_linalg.hpp"

#include <cmath>
#include <string>

#include "sgp/errors.hpp"

namespace sgp {

ComponentFactorization::ComponentFactorization(const Eigen::MatrixXd& s) : size_(s.rows()) {
  if (s.rows() != s.cols()) throw ShapeError("component matrix must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("component covariance matrix of size " + std::to_string(s.rows()) +
                                   " is not positive definite");
  }
  if (!(llt.rcond() >= kMinReciprocalCondition)) {
    throw NotPositiveDefiniteError("component covariance matrix of size " + std::to_string(s.rows()) +
                                   " is numerically singular (rcond " + std::to_string(llt.rcond()) + ")");
  }
  matrix_ = s;
  lower_ = llt.matrixL();
  logdet_ = 2.0 * lower_.diagonal().array().log().sum();
}

double component_logdet(const ComponentFactorization& factor) { return factor.log_determinant(); }

void kron_solve_in_place(std::span<const ComponentFactorization* const> factors,
                         Eigen::Ref<Eigen::MatrixXd> b) {
  Eigen::Index total = 1;
  for (const auto* f : factors) total *= f->size();
  if (factors.empty() || total != b.rows()) {
    throw ShapeError("kron_solve: right-hand side has " + std::to_string(b.rows()) +
                     " rows, factors imply " + std::to_string(total));
  }
  if (total == 0) return;

  using RowMajorMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  Eigen::Index left = 1;
  for (const auto* f : factors) {
    const Eigen::Index m = f->size();
    const Eigen::Index right = total / (left * m);
    if (m > 1) {
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        double* col = b.col(c).data();
        for (Eigen::Index l = 0; l < left; ++l) {
          RowMajorMap block(col + l * m * right, m, right);
          f->solve_in_place(block);
        }
      }
    } else {
      const double inv = 1.0 / (f->lower()(0, 0) * f->lower()(0, 0));
      b *= inv;
    }
    left *= m;
  }
}

Eigen::MatrixXd kron_solve(std::span<const ComponentFactorization* const> factors, Eigen::MatrixXd b) {
  kron_solve_in_place(factors, b);
  return b;
}

}  // namespace sgp
