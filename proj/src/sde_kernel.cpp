#include "gendir/sde_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace gendir {

namespace {

void require_dimension(const SdeCoefficients& c, const SimplexPoint& y) {
  if (c.dimension() != y.dimension())
    throw CoefficientError("point dimension does not match coefficients");
}

void require_strict_interior(const SimplexPoint& y) {
  const auto r = remainders(y);
  for (std::size_t i = 0; i < y.dimension(); ++i)
    if (!(y[i] > 0.0)) throw GeometryError("coordinate on a face; point must be strictly interior");
  if (!(r.values.back() > 0.0)) throw GeometryError("remainder on a face; point must be strictly interior");
}

// Throws SingularFaceError when some R_j, j < K, vanishes.
void require_evaluable(const SimplexPoint& y) { (void)scaling_factors(remainders(y)); }

}  // namespace

void gen_dir_drift_diffusion(const SdeCoefficients& c, std::span<const double> y,
                             std::span<double> drift, std::span<double> diffusion,
                             std::span<double> scratch) noexcept {
  const std::size_t k = y.size();
  auto rem = scratch.subspan(0, k);
  auto scale = scratch.subspan(k, k);
  remainders_into(y, rem);
  const double last = std::max(rem[k - 1], 0.0);

  scale[k - 1] = 1.0;
  for (std::size_t i = k - 1; i-- > 0;) scale[i] = scale[i + 1] / rem[i];

  for (std::size_t i = 0; i < k; ++i) {
    double bracket = c.b[i] * (c.S[i] * last - (1.0 - c.S[i]) * y[i]);
    // A zero Y_i or R_K factor kills the coupling sum before any division.
    if (y[i] > 0.0 && last > 0.0) {
      double sum = 0.0;
      for (std::size_t j = i; j + 1 < k; ++j) sum += c.c(i, j) / rem[j];
      bracket += y[i] * last * sum;
    }
    drift[i] = 0.5 * scale[i] * bracket;
    diffusion[i] = std::max(c.kappa[i] * y[i] * last * scale[i], 0.0);
  }
}

std::vector<double> drift(const SdeCoefficients& c, const SimplexPoint& y) {
  require_dimension(c, y);
  require_evaluable(y);
  const std::size_t k = y.dimension();
  std::vector<double> a(k), b(k), scratch(2 * k);
  gen_dir_drift_diffusion(c, y.coords(), a, b, scratch);
  return a;
}

std::vector<double> diffusion_diag(const SdeCoefficients& c, const SimplexPoint& y) {
  require_dimension(c, y);
  require_evaluable(y);
  const std::size_t k = y.dimension();
  std::vector<double> a(k), b(k), scratch(2 * k);
  gen_dir_drift_diffusion(c, y.coords(), a, b, scratch);
  return b;
}

std::vector<double> diffusion_diag_derivative(const SdeCoefficients& c, const SimplexPoint& y) {
  require_dimension(c, y);
  const auto r = remainders(y);
  const auto u = scaling_factors(r);
  const std::size_t k = y.dimension();
  const double last = r.values[k - 1];
  std::vector<double> d(k);
  for (std::size_t j = 0; j < k; ++j) {
    double inv_sum = 0.0;
    for (std::size_t m = j; m + 1 < k; ++m) inv_sum += 1.0 / r.values[m];
    d[j] = c.kappa[j] * u.values[j] * (last - y[j]) +
           c.kappa[j] * y[j] * last * u.values[j] * inv_sum;
  }
  return d;
}

std::vector<double> potential_gradient(const GenDirParams& p, const SimplexPoint& y) {
  if (p.dimension() != y.dimension()) throw ParameterError("point dimension does not match parameters");
  require_strict_interior(y);
  const std::size_t k = y.dimension();
  const auto r = remainders(y);
  const auto g = p.gamma();
  std::vector<double> grad(k);
  // Suffix sums of gamma_i / R_i.
  double tail = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    tail += g[j] / r.values[j];
    grad[j] = (p.alpha()[j] - 1.0) / y[j] - tail;
  }
  return grad;
}

std::vector<double> potential_residual(const SdeCoefficients& c, const GenDirParams& target,
                                       const SimplexPoint& y) {
  const auto grad = potential_gradient(target, y);
  const auto a = drift(c, y);
  const auto b = diffusion_diag(c, y);
  const auto db = diffusion_diag_derivative(c, y);
  std::vector<double> res(y.dimension());
  for (std::size_t j = 0; j < res.size(); ++j) res[j] = grad[j] - (2.0 * a[j] - db[j]) / b[j];
  return res;
}

std::vector<double> potential_residual(const SdeCoefficients& c, const SimplexPoint& y) {
  return potential_residual(c, sde_to_distribution(c), y);
}

GenDirProcess::GenDirProcess(SdeCoefficients c) : c_(std::move(c)) { require_valid(c_); }

bool GenDirProcess::evaluable(std::span<const double> y) const {
  double r = 1.0;
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    r -= y[j];
    if (!(r > kGeometryTolerance)) return false;
  }
  return true;
}

void GenDirProcess::evaluate(std::span<const double> y, std::span<double> drift,
                             std::span<double> noise, std::span<double> scratch,
                             StepDiagnostics& /*diag*/) const {
  gen_dir_drift_diffusion(c_, y, drift, noise, scratch);
  for (auto& v : noise) v = std::sqrt(v);
}

}  // namespace gendir
