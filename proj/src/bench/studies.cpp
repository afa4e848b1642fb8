#include "sgp/bench/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "sgp/bench/test_functions.hpp"
#include "sgp/errors.hpp"
#include "sgp/kernels.hpp"
#include "sgp/sg_predictor.hpp"

namespace sgp::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Independent stream per (seed, tag, index).
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return stream(seed, tag, index)();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Arm {
  std::string strategy;
  PointMatrix points;
  std::optional<SparseGridDesign> grid;
};

std::vector<Arm> build_arms(const Arms& arms, int d, std::uint64_t seed) {
  std::vector<Arm> out;
  for (int eta : arms.etas) {
    auto grid = build_sparse_grid(load_schedules(arms.schedule, d, eta - d + 1), eta);
    PointMatrix pts = grid.points();
    out.push_back({"sparse_grid", std::move(pts), std::move(grid)});
  }
  for (int n : arms.lattice_levels) {
    out.push_back({"lattice", build_lattice(std::vector<std::vector<double>>(static_cast<std::size_t>(d), lattice_axis(n))),
                   std::nullopt});
  }
  for (int n : arms.lhs_sizes) {
    out.push_back({"lhs", build_lhs(n, d, derived_seed(seed, 3, static_cast<std::uint64_t>(n))), std::nullopt});
  }
  return out;
}

Arms read_arms(const Config& c) {
  Arms a;
  a.schedule = c.get_string("schedule", a.schedule);
  a.etas = c.get_int_list("etas");
  a.lattice_levels = c.get_int_list("lattice_levels");
  a.lhs_sizes = c.get_int_list("lhs_sizes");
  return a;
}

void check_kernel_keys(const Config& c) {
  if (c.has("mean") && c.get_string("mean", "") != "constant") {
    throw ConfigError("only `mean = constant` is supported");
  }
}

std::vector<double> row(const PointMatrix& p, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(p.cols()));
  for (Eigen::Index c = 0; c < p.cols(); ++c) out[static_cast<std::size_t>(c)] = p(r, c);
  return out;
}

Eigen::VectorXd evaluate(const std::string& function, const PointMatrix& p) {
  Eigen::VectorXd y(p.rows());
  for (Eigen::Index r = 0; r < p.rows(); ++r) y(r) = eval_test_function(function, row(p, r));
  return y;
}

}  // namespace

std::vector<double> lattice_axis(int n) {
  if (n < 1) throw InvalidDesignError("lattice needs at least one level per axis");
  if (n == 1) return {0.5};
  if (n == 2) return {0.25, 0.75};
  std::vector<double> axis(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) axis[static_cast<std::size_t>(k)] = static_cast<double>(k) / (n - 1);
  return axis;
}

std::vector<ComponentSchedule> load_schedules(const std::string& name, int d, int levels) {
  if (name == "spread" || name == "boundary-early" || name == "hyperbolic-cross") {
    return std::vector<ComponentSchedule>(static_cast<std::size_t>(d),
                                          make_schedule(parse_builtin_schedule(name), levels));
  }
  return read_schedule_file(name, d);
}

PointMatrix uniform_probes(int n, int d, std::uint64_t seed, std::uint64_t tag) {
  auto rng = stream(seed, tag, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointMatrix p(n, d);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < d; ++c) p(r, c) = u(rng);
  }
  return p;
}

RmspeConfig rmspe_config(const Config& c) {
  c.require_known({"d", "nu", "phi", "sigma2", "mean", "schedule", "etas", "lattice_levels", "lhs_sizes", "n_mc",
                   "n_probe", "seed", "record_wall_clock", "nugget", "max_dense"});
  check_kernel_keys(c);
  RmspeConfig r;
  r.d = static_cast<int>(c.get_int("d", r.d));
  r.nu = c.get_double("nu", r.nu);
  r.phi = c.get_double("phi", r.phi);
  r.sigma2 = c.get_double("sigma2", r.sigma2);
  r.arms = read_arms(c);
  r.n_mc = static_cast<int>(c.get_int("n_mc", r.n_mc));
  r.n_probe = static_cast<int>(c.get_int("n_probe", r.n_probe));
  r.seed = c.get_seed("seed", r.seed);
  r.record_wall_clock = c.get_bool("record_wall_clock", r.record_wall_clock);
  r.nugget = c.get_double("nugget", r.nugget);
  r.dense.max_points = static_cast<std::size_t>(c.get_int("max_dense", static_cast<long long>(r.dense.max_points)));
  return r;
}

MapeConfig mape_config(const Config& c) {
  c.require_known({"function", "d", "nu", "mean", "schedule", "etas", "lattice_levels", "lhs_sizes", "n_probe",
                   "seed", "phi_lo", "phi_hi", "log_tolerance", "max_evaluations", "record_wall_clock", "nugget",
                   "max_dense"});
  check_kernel_keys(c);
  MapeConfig m;
  m.function = c.get_string("function", m.function);
  test_function_dim(m.function);
  m.d = static_cast<int>(c.get_int("d", m.d));
  m.nu = c.get_double("nu", m.nu);
  m.arms = read_arms(c);
  m.n_probe = static_cast<int>(c.get_int("n_probe", m.n_probe));
  m.seed = c.get_seed("seed", m.seed);
  m.phi_lo = c.get_double("phi_lo", m.phi_lo);
  m.phi_hi = c.get_double("phi_hi", m.phi_hi);
  m.mle.log_tolerance = c.get_double("log_tolerance", m.mle.log_tolerance);
  m.mle.max_evaluations = static_cast<int>(c.get_int("max_evaluations", m.mle.max_evaluations));
  m.record_wall_clock = c.get_bool("record_wall_clock", m.record_wall_clock);
  m.nugget = c.get_double("nugget", m.nugget);
  m.dense.max_points = static_cast<std::size_t>(c.get_int("max_dense", static_cast<long long>(m.dense.max_points)));
  return m;
}

TimingConfig timing_config(const Config& c) {
  c.require_known({"d", "eta", "trials", "nu", "phi", "sigma2", "mean", "schedule", "seed", "tolerance", "max_dense",
                   "record_wall_clock"});
  check_kernel_keys(c);
  TimingConfig t;
  t.d = static_cast<int>(c.get_int("d", t.d));
  t.eta = static_cast<int>(c.get_int("eta", t.eta));
  t.trials = static_cast<int>(c.get_int("trials", t.trials));
  t.nu = c.get_double("nu", t.nu);
  t.phi = c.get_double("phi", t.phi);
  t.sigma2 = c.get_double("sigma2", t.sigma2);
  t.schedule = c.get_string("schedule", t.schedule);
  t.seed = c.get_seed("seed", t.seed);
  t.tolerance = c.get_double("tolerance", t.tolerance);
  t.record_wall_clock = c.get_bool("record_wall_clock", t.record_wall_clock);
  t.dense.max_points = static_cast<std::size_t>(c.get_int("max_dense", static_cast<long long>(t.dense.max_points)));
  if (t.trials < 1) throw ConfigError("trials must be at least 1");
  return t;
}

std::vector<ReportRow> rmspe_study(const RmspeConfig& config) {
  std::vector<ReportRow> rows;
  if (config.n_mc <= 0) return rows;
  const auto kernel = SeparableKernel::isotropic(config.d, config.nu, config.phi, config.sigma2);
  const PointMatrix probes = uniform_probes(config.n_probe, config.d, config.seed, 0);
  const Eigen::Index np = probes.rows();

  for (auto& arm : build_arms(config.arms, config.d, config.seed)) {
    const auto t0 = Clock::now();
    const Eigen::Index n = arm.points.rows();
    if (static_cast<std::size_t>(n + np) > config.dense.max_points) {
      throw DenseGuardError("joint covariance of " + std::to_string(n + np) + " points exceeds the guard of " +
                            std::to_string(config.dense.max_points));
    }
    PointMatrix joint(n + np, config.d);
    joint << arm.points, probes;
    const Eigen::LLT<Eigen::MatrixXd> llt(dense_covariance(joint, kernel));
    if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("joint covariance is not positive definite");

    Eigen::MatrixXd draws(n + np, config.n_mc);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < config.n_mc; ++r) {
      auto rng = stream(config.seed, 1, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal;
      Eigen::VectorXd z(n + np);
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
      draws.col(r) = llt.matrixL() * z;
    }
    const Eigen::MatrixXd y = draws.topRows(n);
    const Eigen::MatrixXd truth = draws.bottomRows(np);

    Eigen::MatrixXd w;
    if (arm.grid) {
      const ComponentFactors factors(*arm.grid, kernel, config.nugget);
      w = q_solve(*arm.grid, factors, y);
    } else {
      const auto model = DenseGpModel::fit(arm.points, kernel, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                                           config.dense);
      w = model.solve(y);
    }
    const Eigen::MatrixXd err = dense_cross_covariance(probes, arm.points, kernel) * w - truth;
    double sum = 0.0;
    for (Eigen::Index c = 0; c < err.cols(); ++c) {
      for (Eigen::Index k = 0; k < err.rows(); ++k) sum += err(k, c) * err(k, c);
    }
    const double rmspe = std::sqrt(sum / static_cast<double>(err.size()));
    rows.push_back({arm.strategy, static_cast<std::uint64_t>(n), config.d, "RMSPE", rmspe,
                    config.record_wall_clock ? seconds_since(t0) : 0.0, config.seed});
  }
  return rows;
}

std::vector<ReportRow> mape_study(const MapeConfig& config) {
  std::vector<ReportRow> rows;
  const PointMatrix probes = uniform_probes(config.n_probe, config.d, config.seed, 0);
  const Eigen::VectorXd truth = evaluate(config.function, probes);

  for (auto& arm : build_arms(config.arms, config.d, config.seed)) {
    const auto t0 = Clock::now();
    const Eigen::Index n = arm.points.rows();
    const auto size = static_cast<std::uint64_t>(n);
    try {
      const Eigen::VectorXd y = evaluate(config.function, arm.points);
      const Eigen::MatrixXd f = Eigen::MatrixXd::Ones(n, 1);
      Eigen::VectorXd pred;
      MleResult fit;
      if (arm.grid) {
        fit = fit_mle(*arm.grid, f, y, config.nu, config.phi_lo, config.phi_hi, config.mle, config.nugget);
        const ComponentFactors factors(
            *arm.grid, SeparableKernel::isotropic(config.d, config.nu, fit.phi_hat, kernel_variance(fit.sigma2_hat)), config.nugget);
        pred = predict_mean_combination(*arm.grid, factors, y - f * fit.beta_hat,
                                        Eigen::VectorXd::Constant(probes.rows(), fit.beta_hat(0)), probes);
      } else {
        fit = dense_mle(arm.points, f, y, config.nu, config.phi_lo, config.phi_hi, config.mle, config.dense);
        const auto kernel = SeparableKernel::isotropic(config.d, config.nu, fit.phi_hat, kernel_variance(fit.sigma2_hat));
        const auto model = DenseGpModel::fit(arm.points, kernel, y, f * fit.beta_hat, config.dense);
        pred = (dense_cross_covariance(probes, arm.points, kernel) * model.weights()).array() + fit.beta_hat(0);
      }
      std::vector<double> abs_err(static_cast<std::size_t>(probes.rows()));
      for (Eigen::Index k = 0; k < probes.rows(); ++k) abs_err[static_cast<std::size_t>(k)] = std::abs(pred(k) - truth(k));
      const double secs = config.record_wall_clock ? seconds_since(t0) : 0.0;
      rows.push_back({arm.strategy, size, config.d, "MAPE", median(abs_err), secs, config.seed});
      rows.push_back({arm.strategy, size, config.d, "phi_hat", fit.phi_hat, 0.0, config.seed});
      rows.push_back({arm.strategy, size, config.d, "sigma2_hat", fit.sigma2_hat, 0.0, config.seed});
      rows.push_back({arm.strategy, size, config.d, "beta_hat", fit.beta_hat(0), 0.0, config.seed});
    } catch (const Error&) {
      rows.push_back({arm.strategy, size, config.d, "MAPE_failed", std::numeric_limits<double>::quiet_NaN(),
                      config.record_wall_clock ? seconds_since(t0) : 0.0, config.seed});
    }
  }
  return rows;
}

std::vector<ReportRow> timing_study(const TimingConfig& config) {
  const auto grid = build_sparse_grid(load_schedules(config.schedule, config.d, config.eta - config.d + 1), config.eta);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto kernel = SeparableKernel::isotropic(config.d, config.nu, config.phi, config.sigma2);
  auto rng = stream(config.seed, 2, 0);
  std::normal_distribution<double> normal;
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) y(k) = normal(rng);
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);

  std::vector<double> fast_times;
  Eigen::VectorXd w_fast;
  for (int t = 0; t < config.trials; ++t) {
    const auto t0 = Clock::now();
    const ComponentFactors factors(grid, kernel);
    w_fast = compute_weights(grid, factors, y, mu);
    fast_times.push_back(seconds_since(t0));
  }

  std::vector<ReportRow> rows;
  const auto size = static_cast<std::uint64_t>(n);
  if (static_cast<std::size_t>(n) > config.dense.max_points) {
    const double m = config.record_wall_clock ? median(fast_times) : 0.0;
    rows.push_back({"sparse_grid", size, config.d, "weights_seconds", m, m, config.seed});
    return rows;
  }

  const PointMatrix points = grid.points();
  std::vector<double> dense_times;
  Eigen::VectorXd w_dense;
  for (int t = 0; t < config.trials; ++t) {
    const auto t0 = Clock::now();
    const auto model = DenseGpModel::fit(points, kernel, y, mu, config.dense);
    w_dense = model.weights();
    dense_times.push_back(seconds_since(t0));
  }

  const double agreement = (w_fast - w_dense).cwiseAbs().maxCoeff() / std::max(1.0, w_dense.cwiseAbs().maxCoeff());
  if (!(agreement <= config.tolerance)) {
    throw NumericalFailureError("fast and dense weights differ by " + std::to_string(agreement) +
                                "; timings withheld");
  }
  rows.push_back({"sparse_grid", size, config.d, "weight_agreement", agreement, 0.0, config.seed});
  const double fm = config.record_wall_clock ? median(fast_times) : 0.0;
  const double dm = config.record_wall_clock ? median(dense_times) : 0.0;
  rows.push_back({"sparse_grid", size, config.d, "weights_seconds", fm, fm, config.seed});
  rows.push_back({"dense", size, config.d, "weights_seconds", dm, dm, config.seed});
  return rows;
}

}  // namespace sgp::bench
