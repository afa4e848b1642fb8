#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgp/designs.hpp"
#include "sgp/kernels.hpp"

namespace sgp::testing {

inline SparseGridDesign grid(BuiltinSchedule kind, int d, int eta) {
  return build_sparse_grid(std::vector<ComponentSchedule>(static_cast<std::size_t>(d), make_schedule(kind, eta - d + 1)),
                           eta);
}

// Boundary-first schedule: {.5}, {0,1}, {.25,.75}, {.375,.625}, {.125,.875}.
inline ComponentSchedule boundary_schedule() {
  return ComponentSchedule::from_increments({{0.5}, {0.0, 1.0}, {0.25, 0.75}, {0.375, 0.625}, {0.125, 0.875}});
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  return random_vector(r * c, seed).reshaped(r, c);
}

inline PointMatrix random_points(Eigen::Index n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointMatrix p(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (int c = 0; c < d; ++c) p(r, c) = u(rng);
  }
  return p;
}

inline Eigen::MatrixXd random_spd(Eigen::Index n, std::uint64_t seed) {
  const Eigen::MatrixXd a = random_matrix(n, n, seed);
  return a * a.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
}

inline double rel_inf(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace sgp::testing
