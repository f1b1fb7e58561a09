#pragma once

#include "avocodo/autograd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testutil {

inline Eigen::ArrayXd tone(double freq, double sample_rate, long n, double amplitude = 1.0,
                           double phase = 0.0) {
  Eigen::ArrayXd x(n);
  for (long i = 0; i < n; ++i)
    x(i) = amplitude * std::sin(2.0 * M_PI * freq * i / sample_rate + phase);
  return x;
}

inline Eigen::ArrayXd white_noise(long n, uint64_t seed, double amplitude = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Eigen::ArrayXd x(n);
  for (long i = 0; i < n; ++i) x(i) = dist(rng);
  return x;
}

inline Eigen::ArrayXXd random_array(long rows, long cols, uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Eigen::ArrayXXd a(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) a(i, j) = dist(rng);
  return a;
}

/// Central-difference gradient verification. `fn` must rebuild the scalar
/// graph from the current parameter values on every call. Returns the worst
/// relative error over up to `max_per_param` sampled entries per parameter.
inline double grad_check(const std::vector<avocodo::ad::Var>& params,
                         const std::function<avocodo::ad::Var()>& fn, double eps = 1e-3,
                         int max_per_param = 4, uint64_t seed = 7) {
  using avocodo::ad::Var;
  Var root = fn();
  avocodo::ad::zero_grad_tree(root);
  // probes that do not participate in this graph keep stale gradients from
  // earlier backward passes; clear them all explicitly
  for (const auto& p : params) p->grad.resize(0, 0);
  avocodo::ad::backward(root);
  std::vector<Eigen::ArrayXXd> analytic;
  for (const auto& p : params) {
    p->ensure_grad();
    analytic.push_back(p->grad);
  }

  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    auto& p = params[pi];
    const long n = p->value.size();
    const int checks = static_cast<int>(std::min<long>(n, max_per_param));
    for (int c = 0; c < checks; ++c) {
      const long flat = (n <= max_per_param) ? c : static_cast<long>(rng() % n);
      const long i = flat % p->value.rows();
      const long j = flat / p->value.rows();
      const double saved = p->value(i, j);
      p->value(i, j) = saved + eps;
      const double fp = fn()->scalar();
      p->value(i, j) = saved - eps;
      const double fm = fn()->scalar();
      p->value(i, j) = saved;
      const double numeric = (fp - fm) / (2.0 * eps);
      const double g = analytic[pi](i, j);
      const double denom = std::max({std::abs(numeric), std::abs(g), 1e-6});
      worst = std::max(worst, std::abs(numeric - g) / denom);
    }
  }
  return worst;
}

}  // namespace testutil
