#pragma once

// Exact draws from the generalized Dirichlet by stick breaking:
// V_i ~ Beta(alpha_i, beta_i) independent, Y_i = V_i prod_{k<i} (1 - V_k).

#include <random>
#include <vector>

#include "gendir/distributions.hpp"

namespace gendir {

template <class Engine>
double sample_beta(double a, double b, Engine& engine) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(engine);
  const double y = gb(engine);
  return x / (x + y);
}

template <class Engine>
std::vector<double> stick_breaking_sample(const GenDirParams& p, Engine& engine) {
  const std::size_t k = p.dimension();
  std::vector<double> y(k);
  double stick = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double v = sample_beta(p.alpha()[i], p.beta()[i], engine);
    y[i] = v * stick;
    stick -= y[i];
    if (stick < 0.0) stick = 0.0;
  }
  return y;
}

}  // namespace gendir

namespace gendir {

/// Uniform point of the open simplex (Dirichlet(1, ..., 1)) whose N
/// components all exceed min_component.
template <class Engine>
std::vector<double> random_interior_point(Engine& engine, std::size_t k, double min_component = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> e(k + 1);
  for (;;) {
    double total = 0.0;
    for (auto& v : e) total += (v = expo(engine));
    std::vector<double> y(k);
    double r = 1.0;
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      y[i] = e[i] / total;
      r -= y[i];
      ok = ok && y[i] > min_component;
    }
    if (ok && r > min_component) return y;
  }
}

/// alpha_i, beta_i independently uniform on [lo, hi].
template <class Engine>
GenDirParams random_gen_dir_params(Engine& engine, std::size_t k, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> a(k), b(k);
  for (std::size_t i = 0; i < k; ++i) {
    a[i] = u(engine);
    b[i] = u(engine);
  }
  return GenDirParams(std::move(a), std::move(b));
}

}  // namespace gendir
