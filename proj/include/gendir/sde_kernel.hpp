#pragma once

// Drift and diffusion of the generalized Dirichlet diffusion
//
//   dY_i = (U_i/2) { b_i [S_i R_K - (1-S_i) Y_i] + Y_i R_K sum_{j=i}^{K-1} c_ij / R_j } dt
//          + sqrt(kappa_i Y_i R_K U_i) dW_i,
//
// with R_i the remainders and U_i the scaling factors from simplex.hpp, plus
// the stationary-potential check: for a valid coefficient set the vector
// (2 a_j - dB_jj/dY_j) / B_jj must equal the gradient of
// -phi = sum (alpha_i - 1) ln Y_i + sum gamma_i ln R_i.

#include <span>
#include <vector>

#include "gendir/distributions.hpp"
#include "gendir/param_map.hpp"
#include "gendir/process.hpp"
#include "gendir/simplex.hpp"

namespace gendir {

std::vector<double> drift(const SdeCoefficients& c, const SimplexPoint& y);

/// Diagonal B_ii = kappa_i Y_i R_K U_i. Off-diagonal entries are zero, so the
/// noise amplitude of component i is sqrt(B_ii).
std::vector<double> diffusion_diag(const SdeCoefficients& c, const SimplexPoint& y);

/// dB_jj/dY_j = kappa_j U_j (R_K - Y_j) + kappa_j Y_j R_K U_j sum_{m=j}^{K-1} 1/R_m.
std::vector<double> diffusion_diag_derivative(const SdeCoefficients& c, const SimplexPoint& y);

/// d(-phi)/dY_j = (alpha_j - 1)/Y_j - sum_{i=j}^{K} gamma_i / R_i.
/// Throws GeometryError unless y is strictly interior.
std::vector<double> potential_gradient(const GenDirParams& p, const SimplexPoint& y);

/// potential_gradient(sde_to_distribution(c), y) - (2a - dB/dY) / B.
/// Vanishes identically when the coefficient chains hold.
std::vector<double> potential_residual(const SdeCoefficients& c, const SimplexPoint& y);

/// As above but against an explicit target density, so coefficient sets that
/// break the chains can be probed too.
std::vector<double> potential_residual(const SdeCoefficients& c, const GenDirParams& target,
                                       const SimplexPoint& y);

/// Unchecked kernel: fills drift and diag(B) for a point whose remainders
/// R_1..R_{K-1} are positive. scratch needs 2K entries.
void gen_dir_drift_diffusion(const SdeCoefficients& c, std::span<const double> y,
                             std::span<double> drift, std::span<double> diffusion,
                             std::span<double> scratch) noexcept;

/// The generalized Dirichlet diffusion as an integrator process.
class GenDirProcess final : public DiffusionProcess {
 public:
  /// Validates c (throws CoefficientError).
  explicit GenDirProcess(SdeCoefficients c);

  const SdeCoefficients& coefficients() const noexcept { return c_; }

  std::size_t dimension() const override { return c_.dimension(); }
  std::size_t noise_dimension() const override { return c_.dimension(); }
  bool diagonal_noise() const override { return true; }
  std::size_t scratch_size() const override { return 2 * c_.dimension(); }
  bool evaluable(std::span<const double> y) const override;
  void evaluate(std::span<const double> y, std::span<double> drift, std::span<double> noise,
                std::span<double> scratch, StepDiagnostics& diag) const override;

 private:
  SdeCoefficients c_;
};

}  // namespace gendir
