#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgp/bench/config.hpp"
#include "sgp/bench/report.hpp"
#include "sgp/bench/studies.hpp"
#include "sgp/dense_oracle.hpp"
#include "sgp/designs.hpp"
#include "sgp/errors.hpp"
#include "sgp/io.hpp"
#include "sgp/likelihood.hpp"
#include "sgp/sg_predictor.hpp"

using json = nlohmann::json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json schedules_json(const std::vector<sgp::ComponentSchedule>& schedules) {
  json out = json::array();
  for (const auto& s : schedules) out.push_back(s.increments());
  return out;
}

std::vector<sgp::ComponentSchedule> schedules_from_json(const json& j) {
  std::vector<sgp::ComponentSchedule> out;
  for (const auto& s : j) out.push_back(sgp::ComponentSchedule::from_increments(s.get<std::vector<std::vector<double>>>()));
  return out;
}

// Position of each file point in the sparse grid, or empty if the points are
// not exactly that grid.
std::vector<Eigen::Index> match_grid(const sgp::SparseGridDesign& grid, const sgp::PointMatrix& pts) {
  if (static_cast<std::size_t>(pts.rows()) != grid.size() || pts.cols() != grid.dim()) return {};
  std::map<std::vector<double>, Eigen::Index> where;
  const sgp::PointMatrix g = grid.points();
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    std::vector<double> key(static_cast<std::size_t>(g.cols()));
    for (Eigen::Index c = 0; c < g.cols(); ++c) key[static_cast<std::size_t>(c)] = g(r, c);
    where.emplace(std::move(key), r);
  }
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(pts.rows()));
  std::vector<bool> used(static_cast<std::size_t>(pts.rows()), false);
  for (Eigen::Index r = 0; r < pts.rows(); ++r) {
    std::vector<double> key(static_cast<std::size_t>(pts.cols()));
    for (Eigen::Index c = 0; c < pts.cols(); ++c) key[static_cast<std::size_t>(c)] = pts(r, c);
    const auto it = where.find(key);
    if (it == where.end() || used[static_cast<std::size_t>(it->second)]) return {};
    used[static_cast<std::size_t>(it->second)] = true;
    pos[static_cast<std::size_t>(r)] = it->second;
  }
  return pos;
}

// Smallest eta whose sample size reaches n, if it hits n exactly.
int infer_eta(const std::string& schedule, int d, std::size_t n) {
  for (int eta = d; eta < d + 64; ++eta) {
    const auto schedules = sgp::bench::load_schedules(schedule, d, eta - d + 1);
    const auto size = sgp::sample_size(schedules, eta);
    if (size == n) return eta;
    if (size > n) break;
  }
  return -1;
}

int run_design(const std::string& schedule, int dim, int eta, const std::string& out) {
  const auto grid = sgp::build_sparse_grid(sgp::bench::load_schedules(schedule, dim, eta - dim + 1), eta);
  sgp::write_points_csv(out, grid.points());
  std::cerr << grid.size() << " points written to " << out << '\n';
  return 0;
}

int run_fit(const std::string& design, const std::string& obs, double nu, const std::vector<double>& bracket,
            const std::string& schedule, int eta, double nugget, std::size_t max_dense, const std::string& out) {
  const sgp::PointMatrix pts = sgp::read_points_csv(design);
  const Eigen::VectorXd y = sgp::read_observations_csv(obs);
  if (y.size() != pts.rows()) throw sgp::ShapeError("observation count differs from point count");
  const int d = static_cast<int>(pts.cols());
  const Eigen::Index n = pts.rows();
  const Eigen::MatrixXd f = Eigen::MatrixXd::Ones(n, 1);

  if (eta < 0) eta = infer_eta(schedule, d, static_cast<std::size_t>(n));
  std::vector<Eigen::Index> pos;
  std::optional<sgp::SparseGridDesign> grid;
  if (eta >= d) {
    grid = sgp::build_sparse_grid(sgp::bench::load_schedules(schedule, d, eta - d + 1), eta);
    pos = match_grid(*grid, pts);
  }

  json j;
  sgp::MleResult fit;
  if (!pos.empty()) {
    Eigen::VectorXd yg(n);
    for (Eigen::Index r = 0; r < n; ++r) yg(pos[static_cast<std::size_t>(r)]) = y(r);
    fit = sgp::fit_mle(*grid, f, yg, nu, bracket[0], bracket[1], {}, nugget);
    const Eigen::VectorXd w = sgp::fitted_weights(*grid, f, yg, nu, fit, nugget);
    j["model"] = {{"kind", "sparse_grid"}, {"eta", eta}, {"schedules", schedules_json(grid->schedules())},
                  {"y", to_std(yg)}, {"weights", to_std(w)}};
  } else {
    std::cerr << "points are not a " << schedule << " sparse grid; fitting densely\n";
    sgp::DenseOptions options{max_dense};
    fit = sgp::dense_mle(pts, f, y, nu, bracket[0], bracket[1], {}, options);
    const auto kernel = sgp::SeparableKernel::isotropic(d, nu, fit.phi_hat, sgp::kernel_variance(fit.sigma2_hat));
    const auto model = sgp::DenseGpModel::fit(pts, kernel, y, f * fit.beta_hat, options);
    json points = json::array();
    for (Eigen::Index r = 0; r < n; ++r) points.push_back(to_std(pts.row(r).transpose()));
    j["model"] = {{"kind", "dense"}, {"points", points}, {"y", to_std(y)}, {"weights", to_std(model.weights())}};
  }
  j["model"]["d"] = d;
  j["model"]["nu"] = nu;
  j["model"]["nugget"] = nugget;
  j["beta_hat"] = to_std(fit.beta_hat);
  j["sigma2_hat"] = fit.sigma2_hat;
  j["phi_hat"] = fit.phi_hat;
  j["loglik"] = fit.loglik;
  j["n_evals"] = fit.n_evals;
  j["bracket_edge"] = fit.bracket_edge;

  std::ofstream o(out);
  if (!o) throw sgp::ParseError("cannot write " + out);
  o << j.dump(2) << '\n';
  std::cerr << "phi_hat " << sgp::format_double(fit.phi_hat) << ", loglik " << sgp::format_double(fit.loglik)
            << (fit.bracket_edge ? " (at bracket edge)" : "") << '\n';
  return 0;
}

int run_predict(const std::string& fit_path, const std::string& points_path, const std::string& out) {
  std::ifstream in(fit_path);
  if (!in) throw sgp::ParseError("cannot open " + fit_path);
  const json j = json::parse(in);
  const json& m = j.at("model");
  const int d = m.at("d").get<int>();
  const double nu = m.at("nu").get<double>();
  const double nugget = m.at("nugget").get<double>();
  const double beta = j.at("beta_hat").at(0).get<double>();
  const double sigma2 = j.at("sigma2_hat").get<double>();
  const double var_scale = sigma2 > 0.0 ? 1.0 : 0.0;
  const auto kernel =
      sgp::SeparableKernel::isotropic(d, nu, j.at("phi_hat").get<double>(), sgp::kernel_variance(sigma2));
  const sgp::PointMatrix probes = sgp::read_points_csv(points_path);
  if (probes.cols() != d) throw sgp::ShapeError("probe dimension differs from the fitted model");
  const Eigen::VectorXd w = to_eigen(m.at("weights").get<std::vector<double>>());
  const Eigen::VectorXd y = to_eigen(m.at("y").get<std::vector<double>>());
  const Eigen::Index np = probes.rows();
  Eigen::VectorXd mean(np), var(np);

  if (m.at("kind") == "sparse_grid") {
    const auto grid = sgp::build_sparse_grid(schedules_from_json(m.at("schedules")), m.at("eta").get<int>());
    const sgp::ComponentFactors factors(grid, kernel, nugget);
    if (y.size() != w.size()) throw sgp::ShapeError("fit file: y and weights differ in length");
    mean = sgp::predict_mean_combination(grid, factors, (y.array() - beta).matrix(), Eigen::VectorXd::Constant(np, beta), probes);
    const auto v = sgp::predict_variance(grid, factors, probes);
    for (Eigen::Index r = 0; r < np; ++r) var(r) = var_scale * v[static_cast<std::size_t>(r)].value;
  } else {
    const auto rows = m.at("points").get<std::vector<std::vector<double>>>();
    sgp::PointMatrix pts(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < d; ++c) pts(static_cast<Eigen::Index>(r), c) = rows[r].at(static_cast<std::size_t>(c));
    }
    sgp::DenseOptions options{static_cast<std::size_t>(pts.rows())};
    const auto model = sgp::DenseGpModel::fit(pts, kernel, y, Eigen::VectorXd::Constant(y.size(), beta), options);
    for (Eigen::Index r = 0; r < np; ++r) {
      const auto p = model.predict(probes.row(r), beta);
      mean(r) = p.mean;
      var(r) = var_scale * std::max(p.variance, 0.0);
    }
  }
  sgp::write_predictions_csv(out, mean, var);
  return 0;
}

int run_bench(const std::string& study, const std::string& config_path, const std::string& out) {
  const auto config = sgp::bench::Config::from_file(config_path);
  std::vector<sgp::bench::ReportRow> rows;
  if (study == "rmspe") {
    rows = sgp::bench::rmspe_study(sgp::bench::rmspe_config(config));
  } else if (study == "mape") {
    rows = sgp::bench::mape_study(sgp::bench::mape_config(config));
  } else {
    rows = sgp::bench::timing_study(sgp::bench::timing_config(config));
  }
  sgp::bench::write_report(out, rows);
  sgp::bench::write_report(std::cout, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse grid Gaussian process designs, fits and benchmarks"};
  app.require_subcommand(1);

  auto* design = app.add_subcommand("design", "write a sparse grid design as CSV");
  std::string schedule = "spread";
  int dim = 2;
  int eta = 0;
  std::string out;
  design->add_option("--schedule", schedule, "spread, boundary-early, hyperbolic-cross or a schedule file")
      ->capture_default_str();
  design->add_option("--dim", dim, "dimension")->required()->check(CLI::PositiveNumber);
  design->add_option("--eta", eta, "level of construction (>= dim)")->required();
  design->add_option("--out", out, "output CSV")->required();

  auto* fit = app.add_subcommand("fit", "maximum likelihood fit with a constant mean");
  std::string design_path, obs_path;
  double nu = 2.5;
  std::vector<double> bracket{1e-2, 1e2};
  int fit_eta = -1;
  double nugget = 0.0;
  std::size_t max_dense = 5000;
  fit->add_option("--design", design_path, "points CSV (id,x1,...,xd)")->required();
  fit->add_option("--obs", obs_path, "observations CSV (id,y)")->required();
  fit->add_option("--nu", nu, "Matérn smoothness: 0.5, 1.5, 2.5 or 3.5")->capture_default_str();
  fit->add_option("--phi-bracket", bracket, "lengthscale search interval")->expected(2)->capture_default_str();
  fit->add_option("--schedule", schedule, "schedule the design was built from")->capture_default_str();
  fit->add_option("--eta", fit_eta, "level of the design; inferred from N when omitted");
  fit->add_option("--nugget", nugget, "diagonal added to component matrices")->capture_default_str();
  fit->add_option("--max-dense", max_dense, "largest N for the dense fallback")->capture_default_str();
  fit->add_option("--out", out, "fit JSON")->required();

  auto* predict = app.add_subcommand("predict", "predictive mean and variance at probe points");
  std::string fit_path, points_path;
  predict->add_option("--fit", fit_path, "fit JSON")->required();
  predict->add_option("--points", points_path, "probe CSV (id,x1,...,xd)")->required();
  predict->add_option("--out", out, "output CSV (id,mean,variance)")->required();

  auto* bench = app.add_subcommand("bench", "run a benchmark study from a config file");
  std::string study, config_path;
  bench->add_option("study", study, "rmspe, mape or timing")
      ->required()
      ->check(CLI::IsMember({"rmspe", "mape", "timing"}));
  bench->add_option("--config", config_path, "key = value config file")->required();
  bench->add_option("--out", out, "report CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*design) return run_design(schedule, dim, eta, out);
    if (*fit) {
      return run_fit(design_path, obs_path, nu, bracket, schedule, fit_eta, nugget, max_dense, out);
    }
    if (*predict) return run_predict(fit_path, points_path, out);
    return run_bench(study, config_path, out);
  } catch (const sgp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: bad fit file: " << e.what() << '\n';
    return 1;
  }
}
