#include "sgp/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgp/errors.hpp"

namespace sgp {

double sg_logdet(const SparseGridDesign& design, const ComponentFactors& factors) {
  const int d = design.dim();
  const auto du = static_cast<std::size_t>(d);
  std::vector<double> increment(du), prefix(du + 1), suffix(du + 1);
  double total = 0.0;
  for (const auto& j : design.lattices()) {
    for (std::size_t i = 0; i < du; ++i) {
      increment[i] = static_cast<double>(design.schedules()[i].increment_size(j[i]));
    }
    prefix[0] = 1.0;
    for (std::size_t i = 0; i < du; ++i) prefix[i + 1] = prefix[i] * increment[i];
    suffix[du] = 1.0;
    for (std::size_t i = du; i-- > 0;) suffix[i] = suffix[i + 1] * increment[i];
    for (std::size_t i = 0; i < du; ++i) {
      const double others = prefix[i] * suffix[i + 1];
      if (others == 0.0) continue;
      const int level = j[i];
      const double step = factors.at(static_cast<int>(i), level).log_determinant() -
                          factors.at(static_cast<int>(i), level - 1).log_determinant();
      total += step * others;
    }
  }
  return total;
}

Eigen::VectorXd beta_hat(const SparseGridDesign& design, const ComponentFactors& factors,
                         const Eigen::MatrixXd& f, const Eigen::VectorXd& y) {
  if (f.rows() != y.size()) throw ShapeError("beta_hat: basis matrix and observations disagree");
  const Eigen::MatrixXd qf = q_solve(design, factors, f);
  Eigen::MatrixXd normal = qf.transpose() * f;
  normal = 0.5 * (normal + normal.transpose()).eval();
  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    throw SingularBasisError("mean basis is rank deficient on this design");
  }
  return llt.solve(qf.transpose() * y);
}

double sigma2_hat(const SparseGridDesign& design, const ComponentFactors& factors, const Eigen::MatrixXd& f,
                  const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = y - f * beta;
  const Eigen::MatrixXd qr = q_solve(design, factors, Eigen::MatrixXd(r));
  const double quad = qr.col(0).dot(r);
  if (quad < -1e-12 * y.squaredNorm()) {
    throw NumericalFailureError("negative residual quadratic form in sigma2_hat");
  }
  return std::max(quad, 0.0) / static_cast<double>(y.size());
}

ProfileEvaluation profile_loglik(const SparseGridDesign& design, const Eigen::MatrixXd& f,
                                 const Eigen::VectorXd& y, double nu, double phi, double nugget) {
  if (!(phi > 0.0)) throw std::invalid_argument("profile_loglik: phi must be positive");
  const ComponentFactors factors(design, SeparableKernel::isotropic(design.dim(), nu, phi), nugget);
  ProfileEvaluation e;
  e.phi = phi;
  e.beta = beta_hat(design, factors, f, y);
  e.sigma2 = sigma2_hat(design, factors, f, y, e.beta);
  e.logdet = sg_logdet(design, factors);
  const auto n = static_cast<double>(y.size());
  e.loglik = -0.5 * (n * std::log(e.sigma2) + e.logdet + n);
  return e;
}

MleResult maximize_profile(const std::function<ProfileEvaluation(double)>& evaluate, double lo, double hi,
                           const MleOptions& options) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("phi bracket must satisfy 0 < lo <= hi");

  MleResult result;
  ProfileEvaluation best;
  best.loglik = -std::numeric_limits<double>::infinity();
  bool have_best = false;

  auto probe_phi = [&](double phi) {
    double value = -std::numeric_limits<double>::infinity();
    try {
      ProfileEvaluation e = evaluate(phi);
      // +inf means the mean explains y exactly (sigma2 = 0); it outranks everything.
      if (!std::isnan(e.loglik) && e.loglik > -std::numeric_limits<double>::infinity()) {
        value = e.loglik;
        if (!have_best || value > best.loglik) {
          best = std::move(e);
          have_best = true;
        }
      }
    } catch (const Error&) {
      // Failed factorizations and degenerate fits rank below every finite probe.
    }
    result.trace.emplace_back(phi, value);
    ++result.n_evals;
    return value;
  };
  auto probe = [&](double log_phi) { return probe_phi(std::exp(log_phi)); };

  const double tol = options.log_tolerance;
  double a = std::log(lo);
  double b = std::log(hi);
  if (lo == hi) {
    probe_phi(lo);
  } else if (b - a <= tol) {
    probe(0.5 * (a + b));
  } else {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = probe(c);
    double fd = probe(d);
    while (b - a > tol && result.n_evals < options.max_evaluations) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = probe(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = probe(d);
      }
    }
  }

  if (!have_best) throw FitFailureError("profile likelihood was not finite at any probe");
  result.beta_hat = best.beta;
  result.sigma2_hat = best.sigma2;
  result.phi_hat = best.phi;
  result.loglik = best.loglik;
  result.logdet = best.logdet;
  const double u = std::log(best.phi);
  result.bracket_edge = (u - std::log(lo) <= 2.0 * tol) || (std::log(hi) - u <= 2.0 * tol);
  return result;
}

MleResult fit_mle(const SparseGridDesign& design, const Eigen::MatrixXd& f, const Eigen::VectorXd& y, double nu,
                  double lo, double hi, const MleOptions& options, double nugget) {
  return maximize_profile([&](double phi) { return profile_loglik(design, f, y, nu, phi, nugget); }, lo, hi,
                          options);
}

Eigen::VectorXd fitted_weights(const SparseGridDesign& design, const Eigen::MatrixXd& f, const Eigen::VectorXd& y,
                               double nu, const MleResult& fit, double nugget) {
  const ComponentFactors factors(design, SeparableKernel::isotropic(design.dim(), nu, fit.phi_hat, kernel_variance(fit.sigma2_hat)),
                                 nugget);
  return compute_weights(design, factors, y, f * fit.beta_hat);
}

}  // namespace sgp
