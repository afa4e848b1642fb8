#include "sgp/bench/test_functions.hpp"

#include <cmath>
#include <numbers>

#include "sgp/errors.hpp"

namespace sgp::bench {

namespace {

double product_peak(std::span<const double> x) {
  double v = 1.0;
  for (double xi : x) v /= 1.0 + 10.0 * (xi - 0.25) * (xi - 0.25);
  return v;
}

double corner_peak(std::span<const double> x) {
  const auto d = static_cast<double>(x.size());
  double s = 0.0;
  for (double xi : x) s += xi;
  return std::pow(1.0 + s / d, -(d + 1.0));
}

double rosenbrock(std::span<const double> x) {
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    a += (x[i] - 1.0) * (x[i] - 1.0);
    const double t = (x[i + 1] - 0.5) - 2.0 * (x[i] - 0.5) * (x[i] - 0.5);
    b += t * t;
  }
  return 4.0 * a + 400.0 * b;
}

double franke(std::span<const double> x) {
  const double u = 9.0 * x[0];
  const double v = 9.0 * x[1];
  return 0.75 * std::exp(-((u - 2.0) * (u - 2.0) + (v - 2.0) * (v - 2.0)) / 4.0) +
         0.75 * std::exp(-(u + 1.0) * (u + 1.0) / 49.0 - (v + 1.0) / 10.0) +
         0.5 * std::exp(-((u - 7.0) * (u - 7.0) + (v - 3.0) * (v - 3.0)) / 4.0) -
         0.2 * std::exp(-(u - 4.0) * (u - 4.0) - (v - 7.0) * (v - 7.0));
}

double borehole(std::span<const double> x) {
  constexpr double lo[8] = {0.05, 100.0, 63070.0, 990.0, 63.1, 700.0, 1120.0, 9855.0};
  constexpr double hi[8] = {0.15, 50000.0, 115600.0, 1110.0, 116.0, 820.0, 1680.0, 12045.0};
  double p[8];
  for (int k = 0; k < 8; ++k) p[k] = lo[k] + x[static_cast<std::size_t>(k)] * (hi[k] - lo[k]);
  const double rw = p[0], r = p[1], tu = p[2], hu = p[3], tl = p[4], hl = p[5], len = p[6], kw = p[7];
  const double lr = std::log(r / rw);
  return 2.0 * std::numbers::pi * tu * (hu - hl) / (lr * (1.0 + 2.0 * len * tu / (lr * rw * rw * kw) + tu / tl));
}

}  // namespace

std::vector<std::string> test_function_names() {
  return {"product_peak", "corner_peak", "rosenbrock", "franke", "borehole", "constant"};
}

int test_function_dim(const std::string& name) {
  if (name == "franke") return 2;
  if (name == "borehole") return 8;
  if (name == "rosenbrock") return 0;
  for (const auto& n : test_function_names()) {
    if (n == name) return 0;
  }
  throw UnknownFunctionError("unknown test function `" + name + "`");
}

double eval_test_function(const std::string& name, std::span<const double> x) {
  const int need = test_function_dim(name);
  if (need != 0 && static_cast<int>(x.size()) != need) {
    throw ShapeError(name + " takes " + std::to_string(need) + " inputs, got " + std::to_string(x.size()));
  }
  if (x.empty()) throw ShapeError("test functions need at least one input");
  if (name == "product_peak") return product_peak(x);
  if (name == "corner_peak") return corner_peak(x);
  if (name == "rosenbrock") return rosenbrock(x);
  if (name == "franke") return franke(x);
  if (name == "borehole") return borehole(x);
  return 1.0;
}

}  // namespace sgp::bench
