#include "gendir/related_processes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gendir/param_map.hpp"

namespace gendir {

namespace {

double last_coordinate(std::span<const double> y) {
  double r = 1.0;
  for (double v : y) r -= v;
  return std::max(r, 0.0);
}

double clipped_sqrt(double radicand, StepDiagnostics* diag) {
  if (radicand < 0.0) {
    if (diag) ++diag->clipped_radicands;
    return 0.0;
  }
  return std::sqrt(radicand);
}

// Pairs (i, j), i < j < n, in lexicographic order.
std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

void wright_fisher_eval(const std::vector<double>& omega, double total, std::span<const double> y,
                        std::span<double> drift, std::span<double> noise, StepDiagnostics* diag) {
  const std::size_t k = y.size();
  const std::size_t n = k + 1;
  const double last = last_coordinate(y);
  auto coord = [&](std::size_t i) { return i < k ? y[i] : last; };
  for (std::size_t i = 0; i < k; ++i) drift[i] = 0.5 * (omega[i] - total * y[i]);

  const std::size_t m = pair_count(n);
  std::fill(noise.begin(), noise.begin() + static_cast<std::ptrdiff_t>(k * m), 0.0);
  std::size_t col = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++col) {
      const double amp = clipped_sqrt(coord(i) * coord(j), diag);
      if (i < k) noise[i * m + col] = amp;
      if (j < k) noise[j * m + col] = -amp;
    }
  }
}

void jacobi_eval(const JacobiParams& p, std::span<const double> full, std::size_t rows,
                 std::span<double> drift, std::span<double> noise, StepDiagnostics* diag) {
  const std::size_t n = p.pi.size();
  const std::size_t cols = n - 1;
  for (std::size_t i = 0; i < rows; ++i) {
    drift[i] = p.a * (full[i] - p.pi[i]);
    for (std::size_t j = 0; j < cols; ++j) {
      const double root = clipped_sqrt(p.c * full[j], diag);
      noise[i * cols + j] = (i == j ? root : 0.0) - full[i] * root;
    }
  }
}

}  // namespace

// --- Dirichlet SDE ---------------------------------------------------------

std::pair<std::vector<double>, std::vector<double>> dirichlet_sde_drift_diff(
    const DirichletSdeParams& p, const SimplexPoint& y) {
  const std::size_t k = y.dimension();
  if (p.b.size() != k || p.S.size() != k || p.kappa.size() != k)
    throw CoefficientError("Dirichlet SDE coefficients do not match the point dimension");
  const double last = last_coordinate(y.coords());
  std::vector<double> a(k), b(k);
  for (std::size_t i = 0; i < k; ++i) {
    a[i] = 0.5 * p.b[i] * (p.S[i] * last - (1.0 - p.S[i]) * y[i]);
    b[i] = p.kappa[i] * y[i] * last;
  }
  return {a, b};
}

DirichletSdeProcess::DirichletSdeProcess(DirichletSdeParams p) : p_(std::move(p)) {
  const std::size_t k = p_.b.size();
  if (k == 0 || p_.S.size() != k || p_.kappa.size() != k)
    throw CoefficientError("b, S and kappa must be non-empty and of equal length");
  for (std::size_t i = 0; i < k; ++i)
    if (!(p_.b[i] > 0.0 && p_.kappa[i] > 0.0 && p_.S[i] > 0.0 && p_.S[i] < 1.0))
      throw CoefficientError("Dirichlet SDE needs b > 0, kappa > 0 and 0 < S < 1");
}

void DirichletSdeProcess::evaluate(std::span<const double> y, std::span<double> drift,
                                   std::span<double> noise, std::span<double>,
                                   StepDiagnostics&) const {
  const double last = last_coordinate(y);
  for (std::size_t i = 0; i < y.size(); ++i) {
    drift[i] = 0.5 * p_.b[i] * (p_.S[i] * last - (1.0 - p_.S[i]) * y[i]);
    noise[i] = std::sqrt(std::max(p_.kappa[i] * y[i] * last, 0.0));
  }
}

// --- Wright-Fisher ---------------------------------------------------------

DriftDiffusion wright_fisher_drift_diff(const WrightFisherParams& p, const SimplexPoint& y,
                                        StepDiagnostics* diag) {
  const std::size_t k = y.dimension();
  if (p.omega.size() != k + 1) throw ParameterError("Wright-Fisher needs N = K+1 weights");
  const double total = std::accumulate(p.omega.begin(), p.omega.end(), 0.0);
  const std::size_t m = pair_count(k + 1);
  DriftDiffusion out{std::vector<double>(k), std::vector<double>(k * m), m};
  wright_fisher_eval(p.omega, total, y.coords(), out.drift, out.noise, diag);
  return out;
}

WrightFisherProcess::WrightFisherProcess(WrightFisherParams p) : p_(std::move(p)) {
  if (p_.omega.size() < 2) throw ParameterError("Wright-Fisher needs at least two weights");
  for (double w : p_.omega)
    if (!(w > 0.0)) throw ParameterError("Wright-Fisher weights must be positive");
  total_ = std::accumulate(p_.omega.begin(), p_.omega.end(), 0.0);
}

std::size_t WrightFisherProcess::noise_dimension() const { return pair_count(p_.omega.size()); }

void WrightFisherProcess::evaluate(std::span<const double> y, std::span<double> drift,
                                   std::span<double> noise, std::span<double>,
                                   StepDiagnostics& diag) const {
  wright_fisher_eval(p_.omega, total_, y, drift, noise, &diag);
}

// --- Jacobi ----------------------------------------------------------------

namespace {

void check_jacobi(const JacobiParams& p) {
  if (!(p.a < 0.0)) throw ParameterError("Jacobi process needs a < 0");
  if (!(p.c > 0.0)) throw ParameterError("Jacobi process needs c > 0");
  if (p.pi.size() < 2) throw ParameterError("Jacobi process needs at least two components");
  double s = 0.0;
  for (double v : p.pi) {
    if (!(v > 0.0)) throw ParameterError("Jacobi pi entries must be positive");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ParameterError("Jacobi pi entries must sum to 1");
}

}  // namespace

DriftDiffusion jacobi_drift_diff(const JacobiParams& p, std::span<const double> full_y,
                                 StepDiagnostics* diag) {
  check_jacobi(p);
  const std::size_t n = p.pi.size();
  if (full_y.size() != n) throw ParameterError("Jacobi point must have N coordinates");
  DriftDiffusion out{std::vector<double>(n), std::vector<double>(n * (n - 1)), n - 1};
  jacobi_eval(p, full_y, n, out.drift, out.noise, diag);
  return out;
}

JacobiProcess::JacobiProcess(JacobiParams p) : p_(std::move(p)) { check_jacobi(p_); }

void JacobiProcess::evaluate(std::span<const double> y, std::span<double> drift,
                             std::span<double> noise, std::span<double>,
                             StepDiagnostics& diag) const {
  // The noise columns only reference Y_1..Y_{N-1}, so the free coordinates
  // suffice.
  jacobi_eval(p_, y, y.size(), drift, noise, &diag);
}

// --- beta ------------------------------------------------------------------

std::pair<double, double> beta_sde_drift_diff(const BetaSdeParams& p, double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw GeometryError("beta SDE state must lie in [0, 1]");
  return {0.5 * p.b * (p.S - y), p.kappa * y * (1.0 - y)};
}

BetaParams beta_sde_invariant(const BetaSdeParams& p) {
  return {p.b * p.S / p.kappa, p.b * (1.0 - p.S) / p.kappa};
}

BetaProcess::BetaProcess(BetaSdeParams p) : p_(p) {
  if (!(p_.b > 0.0 && p_.kappa > 0.0 && p_.S > 0.0 && p_.S < 1.0))
    throw CoefficientError("beta SDE needs b > 0, kappa > 0 and 0 < S < 1");
}

void BetaProcess::evaluate(std::span<const double> y, std::span<double> drift,
                           std::span<double> noise, std::span<double>, StepDiagnostics&) const {
  drift[0] = 0.5 * p_.b * (p_.S - y[0]);
  noise[0] = std::sqrt(std::max(p_.kappa * y[0] * (1.0 - y[0]), 0.0));
}

}  // namespace gendir
