#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgp/bench/config.hpp"
#include "sgp/bench/report.hpp"
#include "sgp/dense_oracle.hpp"
#include "sgp/designs.hpp"
#include "sgp/likelihood.hpp"

namespace sgp::bench {

/// Which designs a study compares. Sparse grids are indexed by eta, lattices
/// by the number of levels per axis, Latin hypercubes by their size.
struct Arms {
  std::string schedule = "spread";  ///< built-in name or schedule file
  std::vector<int> etas;
  std::vector<int> lattice_levels;
  std::vector<int> lhs_sizes;
};

/// The one-dimensional lattice axis with n levels: {.5} for n = 1,
/// {1/4, 3/4} for n = 2, otherwise {0, 1/(n-1), ..., 1}.
std::vector<double> lattice_axis(int n);

/// d copies of a built-in schedule, or the contents of a schedule file.
std::vector<ComponentSchedule> load_schedules(const std::string& name, int d, int levels);

/// Uniform probes in [0,1)^d drawn from the stream (seed, tag, index).
PointMatrix uniform_probes(int n, int d, std::uint64_t seed, std::uint64_t tag);

struct RmspeConfig {
  int d = 4;
  double nu = 2.5;
  double phi = 0.75;
  double sigma2 = 1.0;
  Arms arms;
  int n_mc = 200;
  int n_probe = 500;
  std::uint64_t seed = 1;
  bool record_wall_clock = false;
  double nugget = 0.0;
  DenseOptions dense{};  ///< guard on design + probe count
};

struct MapeConfig {
  std::string function = "product_peak";
  int d = 4;
  double nu = 2.5;
  Arms arms;
  int n_probe = 1000;
  std::uint64_t seed = 1;
  double phi_lo = 1e-2;
  double phi_hi = 1e2;
  MleOptions mle{};
  bool record_wall_clock = false;
  double nugget = 0.0;
  DenseOptions dense{};
};

struct TimingConfig {
  int d = 10;
  int eta = 14;
  int trials = 3;
  double nu = 2.5;
  double phi = 0.75;
  double sigma2 = 1.0;
  std::string schedule = "spread";
  std::uint64_t seed = 1;
  double tolerance = 1e-8;
  /// When false the weights_seconds rows carry 0, which makes the report
  /// reproducible; the agreement gate still runs.
  bool record_wall_clock = true;
  DenseOptions dense{10000};
};

/// Read the study settings from a config; unknown keys raise ConfigError.
RmspeConfig rmspe_config(const Config& c);
MapeConfig mape_config(const Config& c);
TimingConfig timing_config(const Config& c);

/// Root mean square prediction error with the kernel known. For every arm,
/// n_mc Gaussian-process draws are taken exactly at the design and probe
/// points (one Cholesky of the joint covariance per arm); replicate r draws
/// from its own stream (seed, r). Sparse grids predict through the fast
/// solve, the other arms through the dense solver. One row per arm,
/// metric RMSPE; n_mc = 0 gives no rows. Throws DenseGuardError when a joint
/// covariance exceeds the guard.
std::vector<ReportRow> rmspe_study(const RmspeConfig& config);

/// Median absolute prediction error of the MLE predictor (constant mean,
/// Matérn nu, one lengthscale) on a deterministic test function. Each arm
/// adds rows MAPE, phi_hat, sigma2_hat and beta_hat; an arm whose fit fails
/// gets a single MAPE_failed row with value nan and the run continues.
std::vector<ReportRow> mape_study(const MapeConfig& config);

/// Median wall-clock of the weight computation, fast vs dense, on the same
/// design and observations. The arms must agree to `tolerance` (max-norm,
/// relative to max(1, |w_dense|)) before any time is reported; otherwise
/// NumericalFailureError. Rows: weight_agreement, then weights_seconds for
/// sparse_grid and dense. The dense arm is skipped above the guard.
std::vector<ReportRow> timing_study(const TimingConfig& config);

}  // namespace sgp::bench
