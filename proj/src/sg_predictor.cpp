#include "sgp/sg_predictor.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include <omp.h>

#include "sgp/errors.hpp"

namespace sgp {

namespace {

Eigen::MatrixXd component_matrix(const ComponentFactors& f, int dim, std::span<const double> pts,
                                 double nugget) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    s(a, a) = f.scale(dim) * (1.0 + nugget);
    for (Eigen::Index b = 0; b < a; ++b) {
      s(a, b) = s(b, a) = f.component_cov(dim, pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]);
    }
  }
  return s;
}

// Runs body(k) for k in [0, n) on the OpenMP team and rethrows the first
// exception on the calling thread.
template <typename Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
#pragma omp critical(sgp_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void check_rows(const SparseGridDesign& design, Eigen::Index rows, const char* what) {
  if (rows != static_cast<Eigen::Index>(design.size())) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(design.size()) + " rows, got " +
                     std::to_string(rows));
  }
}

}  // namespace

ComponentFactors::ComponentFactors(const SparseGridDesign& design, const SeparableKernel& kernel, double nugget)
    : kernel_(kernel), nugget_(nugget), max_level_(design.eta() - design.dim() + 1) {
  if (kernel.dim() != design.dim()) {
    throw ShapeError("kernel has " + std::to_string(kernel.dim()) + " dimensions, design has " +
                     std::to_string(design.dim()));
  }
  const int d = design.dim();
  factors_.assign(static_cast<std::size_t>(d), std::vector<ComponentFactorization>(static_cast<std::size_t>(max_level_) + 1));
  parallel_for(static_cast<std::ptrdiff_t>(d) * max_level_, [&](std::ptrdiff_t k) {
    const int i = static_cast<int>(k / max_level_);
    const int level = static_cast<int>(k % max_level_) + 1;
    const auto pts = design.schedules()[static_cast<std::size_t>(i)].points_at(level);
    factors_[static_cast<std::size_t>(i)][static_cast<std::size_t>(level)] =
        ComponentFactorization(component_matrix(*this, i, pts, nugget_));
  });
}

Eigen::MatrixXd lattice_term(const SparseGridDesign& design, const ComponentFactors& factors,
                             const Eigen::MatrixXd& a, std::size_t lattice) {
  const MultiIndex& j = design.lattices()[lattice];
  const auto map = design.lattice_map(lattice);
  Eigen::MatrixXd buf(static_cast<Eigen::Index>(map.size()), a.cols());
  for (std::size_t r = 0; r < map.size(); ++r) buf.row(static_cast<Eigen::Index>(r)) = a.row(map[r]);

  std::vector<const ComponentFactorization*> fs(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) fs[i] = &factors.at(static_cast<int>(i), j[i]);
  kron_solve_in_place(fs, buf);
  buf *= static_cast<double>(smolyak_coefficient(j, design.eta(), design.dim()));
  return buf;
}

void scatter_add(const SparseGridDesign& design, std::size_t lattice, const Eigen::MatrixXd& term,
                 Eigen::MatrixXd& out) {
  const auto map = design.lattice_map(lattice);
  for (std::size_t r = 0; r < map.size(); ++r) out.row(map[r]) += term.row(static_cast<Eigen::Index>(r));
}

Eigen::MatrixXd q_solve(const SparseGridDesign& design, const ComponentFactors& factors,
                        const Eigen::MatrixXd& a) {
  check_rows(design, a.rows(), "q_solve");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  const std::size_t begin = design.first_combination_lattice();
  const std::size_t end = design.lattices().size();
  const std::size_t chunk = 64 * static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
  std::vector<Eigen::MatrixXd> terms;
  for (std::size_t lo = begin; lo < end; lo += chunk) {
    const std::size_t hi = std::min(end, lo + chunk);
    terms.assign(hi - lo, Eigen::MatrixXd());
    parallel_for(static_cast<std::ptrdiff_t>(hi - lo), [&](std::ptrdiff_t k) {
      terms[static_cast<std::size_t>(k)] = lattice_term(design, factors, a, lo + static_cast<std::size_t>(k));
    });
    for (std::size_t q = lo; q < hi; ++q) scatter_add(design, q, terms[q - lo], out);
  }
  return out;
}

Eigen::VectorXd compute_weights(const SparseGridDesign& design, const ComponentFactors& factors,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  check_rows(design, y.size(), "compute_weights (y)");
  check_rows(design, mu.size(), "compute_weights (mu)");
  return q_solve(design, factors, Eigen::MatrixXd(y - mu)).col(0);
}

namespace serial {

Eigen::MatrixXd q_solve(const SparseGridDesign& design, const ComponentFactors& factors,
                        const Eigen::MatrixXd& a) {
  check_rows(design, a.rows(), "q_solve");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (std::size_t q = design.first_combination_lattice(); q < design.lattices().size(); ++q) {
    scatter_add(design, q, lattice_term(design, factors, a, q), out);
  }
  return out;
}

Eigen::VectorXd compute_weights(const SparseGridDesign& design, const ComponentFactors& factors,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  check_rows(design, y.size(), "compute_weights (y)");
  check_rows(design, mu.size(), "compute_weights (mu)");
  return serial::q_solve(design, factors, Eigen::MatrixXd(y - mu)).col(0);
}

}  // namespace serial

Eigen::VectorXd cross_covariance(const SparseGridDesign& design, const ComponentFactors& factors,
                                 std::span<const double> x0) {
  const int d = design.dim();
  if (static_cast<int>(x0.size()) != d) throw ShapeError("probe dimension mismatch");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto pool = design.schedules()[static_cast<std::size_t>(i)].coordinates();
    auto& ci = c[static_cast<std::size_t>(i)];
    ci.resize(pool.size());
    for (std::size_t s = 0; s < pool.size(); ++s) ci[s] = factors.component_cov(i, x0[static_cast<std::size_t>(i)], pool[s]);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(design.size()));
  for (std::size_t p = 0; p < design.size(); ++p) {
    const auto slots = design.slots(p);
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= c[static_cast<std::size_t>(i)][slots[static_cast<std::size_t>(i)]];
    out(static_cast<Eigen::Index>(p)) = v;
  }
  return out;
}

double predict_mean(const SparseGridDesign& design, const ComponentFactors& factors, const Eigen::VectorXd& w,
                    double mean_at_x0, std::span<const double> x0) {
  check_rows(design, w.size(), "predict_mean");
  return mean_at_x0 + cross_covariance(design, factors, x0).dot(w);
}

Eigen::VectorXd predict_mean(const SparseGridDesign& design, const ComponentFactors& factors,
                             const Eigen::VectorXd& w, const Eigen::VectorXd& mean_at_probes,
                             const Eigen::MatrixXd& probes) {
  check_rows(design, w.size(), "predict_mean");
  if (mean_at_probes.size() != probes.rows() || probes.cols() != design.dim()) {
    throw ShapeError("predict_mean: probe/mean shape mismatch");
  }
  Eigen::VectorXd out(probes.rows());
  parallel_for(probes.rows(), [&](std::ptrdiff_t k) {
    const Eigen::RowVectorXd x = probes.row(k);
    out(k) = predict_mean(design, factors, w, mean_at_probes(k), std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  });
  return out;
}

double predict_mean_combination(const SparseGridDesign& design, const ComponentFactors& factors,
                                const Eigen::VectorXd& residual, double mean_at_x0, std::span<const double> x0) {
  check_rows(design, residual.size(), "predict_mean_combination");
  const int d = design.dim();
  if (static_cast<int>(x0.size()) != d) throw ShapeError("probe dimension mismatch");
  const int levels = factors.max_level();

  // lambda[i][l] = S_{i,l}^{-1} s_{i,l}(x0_i)
  std::vector<std::vector<Eigen::VectorXd>> lambda(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto pool = design.schedules()[static_cast<std::size_t>(i)].coordinates();
    auto& li = lambda[static_cast<std::size_t>(i)];
    li.resize(static_cast<std::size_t>(levels) + 1);
    for (int l = 1; l <= levels; ++l) {
      const auto& f = factors.at(i, l);
      Eigen::VectorXd v(f.size());
      for (Eigen::Index k = 0; k < f.size(); ++k) {
        v(k) = factors.component_cov(i, x0[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(k)]);
      }
      f.solve_in_place(v);
      li[static_cast<std::size_t>(l)] = std::move(v);
    }
  }

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  double total = 0.0;
  Eigen::VectorXd buf, next;
  for (std::size_t q = design.first_combination_lattice(); q < design.lattices().size(); ++q) {
    const MultiIndex& j = design.lattices()[q];
    const auto map = design.lattice_map(q);
    buf.resize(static_cast<Eigen::Index>(map.size()));
    for (std::size_t r = 0; r < map.size(); ++r) buf(static_cast<Eigen::Index>(r)) = residual(map[r]);
    // contract the fastest dimension first
    for (int i = d - 1; i >= 0; --i) {
      const Eigen::VectorXd& li = lambda[static_cast<std::size_t>(i)][static_cast<std::size_t>(j[static_cast<std::size_t>(i)])];
      const Eigen::Index rest = buf.size() / li.size();
      next = Eigen::Map<const RowMajor>(buf.data(), rest, li.size()) * li;
      buf.swap(next);
    }
    total += static_cast<double>(smolyak_coefficient(j, design.eta(), d)) * buf(0);
  }
  return mean_at_x0 + total;
}

Eigen::VectorXd predict_mean_combination(const SparseGridDesign& design, const ComponentFactors& factors,
                                         const Eigen::VectorXd& residual, const Eigen::VectorXd& mean_at_probes,
                                         const Eigen::MatrixXd& probes) {
  check_rows(design, residual.size(), "predict_mean_combination");
  if (mean_at_probes.size() != probes.rows() || probes.cols() != design.dim()) {
    throw ShapeError("predict_mean_combination: probe/mean shape mismatch");
  }
  Eigen::VectorXd out(probes.rows());
  parallel_for(probes.rows(), [&](std::ptrdiff_t k) {
    const Eigen::RowVectorXd x = probes.row(k);
    out(k) = predict_mean_combination(design, factors, residual, mean_at_probes(k),
                                      std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Variance

VarianceProfile::VarianceProfile(const ComponentFactors& factors, const SparseGridDesign& design)
    : factors_(&factors) {
  if (factors.dim() != design.dim()) throw ShapeError("factors and design disagree on dimension");
  for (const auto& s : design.schedules()) pools_.emplace_back(s.coordinates().begin(), s.coordinates().end());
}

double VarianceProfile::epsilon(int dim, int level, double x) const {
  const double prior = factors_->component_cov(dim, x, x);
  if (level == 0) return prior;
  const auto& f = factors_->at(dim, level);
  Eigen::VectorXd s(f.size());
  const auto& pool = pools_[static_cast<std::size_t>(dim)];
  for (Eigen::Index k = 0; k < f.size(); ++k) s(k) = factors_->component_cov(dim, x, pool[static_cast<std::size_t>(k)]);
  f.lower().triangularView<Eigen::Lower>().solveInPlace(s);
  return prior - s.squaredNorm();
}

std::vector<double> VarianceProfile::deltas(int dim, double x) const {
  const int top = max_level();
  std::vector<double> eps(static_cast<std::size_t>(top) + 1);
  for (int l = 0; l <= top; ++l) eps[static_cast<std::size_t>(l)] = epsilon(dim, l, x);
  std::vector<double> out(static_cast<std::size_t>(top) + 1, 0.0);
  for (int l = 1; l <= top; ++l) out[static_cast<std::size_t>(l)] = eps[static_cast<std::size_t>(l - 1)] - eps[static_cast<std::size_t>(l)];
  return out;
}

VariancePrediction predict_variance(const SparseGridDesign& design, const VarianceProfile& profile,
                                    std::span<const double> x0) {
  const int d = design.dim();
  const int eta = design.eta();
  if (static_cast<int>(x0.size()) != d) throw ShapeError("probe dimension mismatch");

  // partial[b] = sum over (j_1..j_k) with j_1 + ... + j_k = b of prod Delta.
  std::vector<double> partial(static_cast<std::size_t>(eta) + 1, 0.0);
  partial[0] = 1.0;
  double prior = 1.0;
  for (int i = 0; i < d; ++i) {
    const double xi = x0[static_cast<std::size_t>(i)];
    prior *= profile.epsilon(i, 0, xi);
    const auto delta = profile.deltas(i, xi);
    std::vector<double> next(partial.size(), 0.0);
    for (int b = 0; b <= eta; ++b) {
      if (partial[static_cast<std::size_t>(b)] == 0.0) continue;
      for (int l = 1; l <= profile.max_level() && b + l <= eta; ++l) {
        next[static_cast<std::size_t>(b + l)] += partial[static_cast<std::size_t>(b)] * delta[static_cast<std::size_t>(l)];
      }
    }
    partial = std::move(next);
  }
  double explained = 0.0;
  for (int b = d; b <= eta; ++b) explained += partial[static_cast<std::size_t>(b)];
  const double raw = prior - explained;
  return {std::max(raw, 0.0), raw};
}

VariancePrediction predict_variance(const SparseGridDesign& design, const ComponentFactors& factors,
                                    std::span<const double> x0) {
  return predict_variance(design, VarianceProfile(factors, design), x0);
}

std::vector<VariancePrediction> predict_variance(const SparseGridDesign& design,
                                                 const ComponentFactors& factors,
                                                 const Eigen::MatrixXd& probes) {
  if (probes.cols() != design.dim()) throw ShapeError("predict_variance: probe dimension mismatch");
  const VarianceProfile profile(factors, design);
  std::vector<VariancePrediction> out(static_cast<std::size_t>(probes.rows()));
  parallel_for(probes.rows(), [&](std::ptrdiff_t k) {
    const Eigen::RowVectorXd x = probes.row(k);
    out[static_cast<std::size_t>(k)] =
        predict_variance(design, profile, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  });
  return out;
}

}  // namespace sgp
