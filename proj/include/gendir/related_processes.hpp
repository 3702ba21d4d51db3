#pragma once

// Neighbouring diffusions on the simplex, for cross-checks against the
// generalized Dirichlet kernel:
//
//   Dirichlet SDE    dY_i = (b_i/2)[S_i Y_N - (1-S_i) Y_i] dt + sqrt(kappa_i Y_i Y_N) dW_i
//   Wright-Fisher    dY_i = (omega_i - omega Y_i)/2 dt + noise with covariance Y_i(delta_ij - Y_j)
//   Jacobi           dY_i = a (Y_i - pi_i) dt + sqrt(c Y_i) dW_i - Y_i sum_{j<N} sqrt(c Y_j) dW_j
//   beta             dY   = (b/2)(S - Y) dt + sqrt(kappa Y (1-Y)) dW

#include <utility>
#include <vector>

#include "gendir/distributions.hpp"
#include "gendir/process.hpp"
#include "gendir/simplex.hpp"

namespace gendir {

struct DriftDiffusion {
  std::vector<double> drift;
  /// Diagonal amplitudes (K entries) or a row-major K x M noise factor.
  std::vector<double> noise;
  std::size_t noise_columns = 0;
};

// --- Dirichlet SDE ---------------------------------------------------------

struct DirichletSdeParams {
  std::vector<double> b;
  std::vector<double> S;
  std::vector<double> kappa;
};

/// drift_i = (b_i/2)[S_i Y_N - (1-S_i) Y_i], diffusion_ii = kappa_i Y_i Y_N.
/// Returns (drift, diagonal diffusion B_ii).
std::pair<std::vector<double>, std::vector<double>> dirichlet_sde_drift_diff(
    const DirichletSdeParams& p, const SimplexPoint& y);

class DirichletSdeProcess final : public DiffusionProcess {
 public:
  explicit DirichletSdeProcess(DirichletSdeParams p);
  std::size_t dimension() const override { return p_.b.size(); }
  std::size_t noise_dimension() const override { return p_.b.size(); }
  bool diagonal_noise() const override { return true; }
  void evaluate(std::span<const double> y, std::span<double> drift, std::span<double> noise,
                std::span<double> scratch, StepDiagnostics& diag) const override;

 private:
  DirichletSdeParams p_;
};

// --- Wright-Fisher ---------------------------------------------------------

struct WrightFisherParams {
  std::vector<double> omega;  // N = K+1 positive weights
};

/// Drift (omega_i - omega Y_i)/2 and a K x N(N-1)/2 noise factor driven by
/// one Wiener increment per unordered pair (i, j) of the N components:
/// component i receives +sqrt(Y_i Y_j) dW_ij and j receives -sqrt(Y_i Y_j) dW_ij.
/// The factor reproduces the covariance Y_i(delta_ij - Y_j) and its rows sum
/// to zero over all N components, so the unit sum holds pathwise.
DriftDiffusion wright_fisher_drift_diff(const WrightFisherParams& p, const SimplexPoint& y,
                                        StepDiagnostics* diag = nullptr);

class WrightFisherProcess final : public DiffusionProcess {
 public:
  explicit WrightFisherProcess(WrightFisherParams p);
  std::size_t dimension() const override { return p_.omega.size() - 1; }
  std::size_t noise_dimension() const override;
  bool diagonal_noise() const override { return false; }
  void evaluate(std::span<const double> y, std::span<double> drift, std::span<double> noise,
                std::span<double> scratch, StepDiagnostics& diag) const override;

 private:
  WrightFisherParams p_;
  double total_;
};

// --- Jacobi ----------------------------------------------------------------

struct JacobiParams {
  double a;                // < 0
  double c;                // > 0
  std::vector<double> pi;  // N positive entries summing to 1
};

/// Evaluated on all N coordinates exactly as written: drift_i = a(Y_i - pi_i),
/// noise factor G (N x (N-1), row-major) with
/// G_ij = delta_ij sqrt(c Y_j) - Y_i sqrt(c Y_j).
DriftDiffusion jacobi_drift_diff(const JacobiParams& p, std::span<const double> full_y,
                                 StepDiagnostics* diag = nullptr);

/// Simulates the first K = N-1 rows; Y_N stays derived.
class JacobiProcess final : public DiffusionProcess {
 public:
  explicit JacobiProcess(JacobiParams p);
  std::size_t dimension() const override { return p_.pi.size() - 1; }
  std::size_t noise_dimension() const override { return p_.pi.size() - 1; }
  bool diagonal_noise() const override { return false; }
  void evaluate(std::span<const double> y, std::span<double> drift, std::span<double> noise,
                std::span<double> scratch, StepDiagnostics& diag) const override;

 private:
  JacobiParams p_;
};

// --- beta ------------------------------------------------------------------

struct BetaSdeParams {
  double b;
  double S;
  double kappa;
};

/// ((b/2)(S - y), kappa y (1 - y)).
std::pair<double, double> beta_sde_drift_diff(const BetaSdeParams& p, double y);

/// Invariant Beta(b S / kappa, b (1-S) / kappa).
BetaParams beta_sde_invariant(const BetaSdeParams& p);

class BetaProcess final : public DiffusionProcess {
 public:
  explicit BetaProcess(BetaSdeParams p);
  std::size_t dimension() const override { return 1; }
  std::size_t noise_dimension() const override { return 1; }
  bool diagonal_noise() const override { return true; }
  void evaluate(std::span<const double> y, std::span<double> drift, std::span<double> noise,
                std::span<double> scratch, StepDiagnostics& diag) const override;

 private:
  BetaSdeParams p_;
};

}  // namespace gendir
