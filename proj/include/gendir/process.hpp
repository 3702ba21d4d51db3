#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace gendir {

/// Per-worker counters collected while stepping an ensemble.
struct StepDiagnostics {
  std::uint64_t particle_steps = 0;
  std::uint64_t retries = 0;            // redrawn Wiener increments
  std::uint64_t clamped = 0;            // retries exhausted, particle projected
  std::uint64_t clipped_radicands = 0;  // negative radicands set to zero

  StepDiagnostics& operator+=(const StepDiagnostics& o) noexcept {
    particle_steps += o.particle_steps;
    retries += o.retries;
    clamped += o.clamped;
    clipped_radicands += o.clipped_radicands;
    return *this;
  }

  double clamp_fraction() const noexcept {
    return particle_steps == 0 ? 0.0 : static_cast<double>(clamped) / static_cast<double>(particle_steps);
  }
};

/// An Ito diffusion dY = a(Y) dt + G(Y) dW on the K free simplex coordinates.
///
/// The integrator calls evaluate() once per particle step. With diagonal
/// noise, `noise` has K entries and G = diag(noise); otherwise it is the
/// K x M factor in row-major order, M = noise_dimension().
class DiffusionProcess {
 public:
  virtual ~DiffusionProcess() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::size_t noise_dimension() const = 0;
  virtual bool diagonal_noise() const = 0;
  virtual std::size_t scratch_size() const { return 0; }

  /// False on faces where drift or noise are singular. Proposals landing
  /// there are treated like proposals leaving the simplex.
  virtual bool evaluable(std::span<const double> /*y*/) const { return true; }

  virtual void evaluate(std::span<const double> y, std::span<double> drift,
                        std::span<double> noise, std::span<double> scratch,
                        StepDiagnostics& diag) const = 0;
};

}  // namespace gendir
