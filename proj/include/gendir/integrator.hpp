#pragma once

// Euler-Maruyama ensemble integration on the simplex.
//
// Each particle step proposes Y' = Y + a(Y) dt + G(Y) dW with dW drawn from
// the counter-based stream (seed, particle, step, substream 0). A proposal
// outside the closed simplex (or on a singular face of the process) is
// redrawn from substreams 1..boundary_retries; when those run out the last
// proposal is projected onto the simplex with a small margin and the
// particle is counted as clamped.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gendir/distributions.hpp"
#include "gendir/param_map.hpp"
#include "gendir/process.hpp"
#include "gendir/simplex.hpp"
#include "gendir/stats.hpp"

namespace gendir {

/// Projected particles keep 2 * kBoundaryMargin from the remainder face.
inline constexpr double kBoundaryMargin = 1e-12;

class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
  double dt = 0.025;
  double t_end = 50.0;
  std::size_t particles = 10000;
  std::uint64_t seed = 1;
  unsigned boundary_retries = 10;
  std::size_t record_stride = 1;
  /// Worker threads. Results are identical for every value.
  unsigned threads = 1;

  /// Number of steps, round(t_end / dt).
  std::size_t steps() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void check() const;
};

/// P particles of dimension K stored contiguously, plus the clock.
class EnsembleState {
 public:
  EnsembleState() = default;
  EnsembleState(std::size_t particles, std::size_t dimension);

  std::size_t size() const noexcept { return particles_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<double> particle(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> particle(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  SimplexPoint point(std::size_t i) const;
  const std::vector<double>& coords() const noexcept { return coords_; }

  double t = 0.0;
  std::size_t step_index = 0;

  friend bool operator==(const EnsembleState&, const EnsembleState&) = default;

 private:
  std::size_t particles_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

struct PointInit {
  std::vector<double> y;
};
struct ExactSampleInit {
  GenDirParams target;
};
using InitialCondition = std::variant<PointInit, ExactSampleInit>;

/// Builds the starting ensemble. Exact samples use the stream reserved for
/// initial conditions, one per particle.
EnsembleState initial_state(const InitialCondition& init, std::size_t particles,
                            std::size_t dimension, std::uint64_t seed);

/// Nearest point of {y >= 0, 1 - sum(y) >= margin} in the Euclidean norm.
void project_to_simplex(std::span<double> y, double margin);

/// True when every y_i >= 0 and 1 - sum(y) >= 0 (running subtraction).
bool admissible(std::span<const double> y) noexcept;

/// Advances every particle by one step of size cfg.dt.
EnsembleState em_step(const DiffusionProcess& process, EnsembleState state,
                      const IntegratorConfig& cfg, StepDiagnostics* diag = nullptr);
EnsembleState em_step(const SdeCoefficients& c, EnsembleState state, const IntegratorConfig& cfg,
                      StepDiagnostics* diag = nullptr);

/// Ensemble moments over all N = K+1 components, accumulated in fixed-size
/// particle chunks and merged pairwise; independent of the thread count.
MomentRecord ensemble_moments(const EnsembleState& state, unsigned threads = 1);

/// Called at every recorded step with the current ensemble.
using StateObserver = std::function<void(const EnsembleState&)>;

struct SimulationResult {
  MomentTimeSeries series;
  EnsembleState final_state;
  StepDiagnostics diagnostics;
};

/// Records moments at step 0, every record_stride steps and at the end.
SimulationResult simulate(const DiffusionProcess& process, const IntegratorConfig& cfg,
                          const InitialCondition& init, const StateObserver& observer = {});
SimulationResult simulate(const SdeCoefficients& c, const IntegratorConfig& cfg,
                          const InitialCondition& init, const StateObserver& observer = {});

}  // namespace gendir
