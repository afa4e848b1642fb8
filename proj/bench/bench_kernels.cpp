#include <random>

#include <benchmark/benchmark.h>

#include "sgp/dense_oracle.hpp"
#include "sgp/designs.hpp"
#include "sgp/sg_predictor.hpp"

namespace {

struct Instance {
  sgp::SparseGridDesign grid;
  sgp::SeparableKernel kernel;
  Eigen::VectorXd y;
  Eigen::VectorXd mu;
};

Instance make_instance(int d, int eta) {
  std::vector<sgp::ComponentSchedule> s(static_cast<std::size_t>(d),
                                        sgp::make_schedule(sgp::BuiltinSchedule::spread, eta - d + 1));
  auto grid = sgp::build_sparse_grid(s, eta);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  Eigen::VectorXd y(static_cast<Eigen::Index>(grid.size()));
  for (auto& v : y) v = normal(rng);
  const auto n = y.size();
  return {std::move(grid), sgp::SeparableKernel::isotropic(d, 2.5, 0.75), y, Eigen::VectorXd::Zero(n)};
}

void BM_WeightsSerial(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const sgp::ComponentFactors factors(in.grid, in.kernel);
  for (auto _ : state) benchmark::DoNotOptimize(sgp::serial::compute_weights(in.grid, factors, in.y, in.mu));
  state.counters["N"] = static_cast<double>(in.grid.size());
}

void BM_WeightsParallel(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const sgp::ComponentFactors factors(in.grid, in.kernel);
  for (auto _ : state) benchmark::DoNotOptimize(sgp::compute_weights(in.grid, factors, in.y, in.mu));
  state.counters["N"] = static_cast<double>(in.grid.size());
}

void BM_WeightsDense(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const sgp::PointMatrix pts = in.grid.points();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgp::DenseGpModel::fit(pts, in.kernel, in.y, in.mu).weights());
  }
  state.counters["N"] = static_cast<double>(in.grid.size());
}

void BM_QSolveSerial(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const sgp::ComponentFactors factors(in.grid, in.kernel);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(in.y.size(), 4);
  for (auto _ : state) benchmark::DoNotOptimize(sgp::serial::q_solve(in.grid, factors, a));
}

void BM_QSolveParallel(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const sgp::ComponentFactors factors(in.grid, in.kernel);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(in.y.size(), 4);
  for (auto _ : state) benchmark::DoNotOptimize(sgp::q_solve(in.grid, factors, a));
}

}  // namespace

BENCHMARK(BM_WeightsSerial)->Args({4, 8})->Args({6, 11})->Args({10, 14})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightsParallel)->Args({4, 8})->Args({6, 11})->Args({10, 14})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightsDense)->Args({4, 8})->Args({6, 11})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QSolveSerial)->Args({6, 11})->Args({10, 15})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QSolveParallel)->Args({6, 11})->Args({10, 15})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
