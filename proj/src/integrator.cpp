#include "gendir/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "gendir/rng.hpp"
#include "gendir/sampling.hpp"
#include "gendir/sde_kernel.hpp"

namespace gendir {

namespace {

// Fixed work unit for stepping and for moment accumulation. Moment merges
// follow the chunk order, which keeps results independent of thread count.
constexpr std::size_t kChunk = 256;

std::size_t chunk_count(std::size_t particles) { return (particles + kChunk - 1) / kChunk; }

// Runs fn(chunk) for every chunk, contiguous chunk ranges per thread.
template <class Fn>
void for_each_chunk(std::size_t chunks, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = w * chunks / workers; c < (w + 1) * chunks / workers; ++c) fn(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

void IntegratorConfig::check() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be non-negative");
  if (particles == 0) throw std::invalid_argument("particle count must be at least 1");
  if (record_stride == 0) throw std::invalid_argument("record_stride must be at least 1");
  constexpr auto limit = std::numeric_limits<std::uint32_t>::max();
  if (particles > limit) throw std::invalid_argument("particle count exceeds the RNG stream range");
  if (steps() >= limit) throw std::invalid_argument("step count exceeds the RNG stream range");
  if (boundary_retries >= limit - 1) throw std::invalid_argument("too many boundary retries");
}

EnsembleState::EnsembleState(std::size_t particles, std::size_t dimension)
    : particles_(particles), dim_(dimension), coords_(particles * dimension, 0.0) {
  if (dimension == 0) throw std::invalid_argument("ensemble dimension must be at least 1");
}

SimplexPoint EnsembleState::point(std::size_t i) const {
  auto p = particle(i);
  return SimplexPoint(std::vector<double>(p.begin(), p.end()));
}

bool admissible(std::span<const double> y) noexcept {
  double r = 1.0;
  for (double v : y) {
    if (!(v >= 0.0)) return false;
    r -= v;
  }
  return r >= 0.0;
}

void project_to_simplex(std::span<double> y, double margin) {
  for (auto& v : y) v = std::max(v, 0.0);
  auto remainder = [&] {
    double r = 1.0;
    for (double v : y) r -= v;
    return r;
  };
  if (remainder() >= margin) return;

  // Sort-based projection onto {x >= 0, sum x = 1 - margin}.
  const double target = 1.0 - margin;
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double prefix = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    prefix += u[j];
    const double candidate = (prefix - target) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) shift = candidate;
  }
  for (auto& v : y) v = std::max(v - shift, 0.0);
  // Remove the last bits of round-off so the running remainder is >= margin.
  for (double r = remainder(); r < margin; r = remainder()) {
    auto largest = std::max_element(y.begin(), y.end());
    *largest = std::max(std::nextafter(*largest - (margin - r), 0.0), 0.0);
  }
}

EnsembleState initial_state(const InitialCondition& init, std::size_t particles,
                            std::size_t dimension, std::uint64_t seed) {
  EnsembleState state(particles, dimension);
  if (const auto* point = std::get_if<PointInit>(&init)) {
    const SimplexPoint p(point->y);
    if (p.dimension() != dimension) throw std::invalid_argument("initial point has the wrong dimension");
    for (std::size_t i = 0; i < particles; ++i) {
      auto dst = state.particle(i);
      std::copy(p.coords().begin(), p.coords().end(), dst.begin());
      // Round-off admitted by validation is removed here.
      if (!admissible(dst)) project_to_simplex(dst, 0.0);
    }
    return state;
  }
  const auto& target = std::get<ExactSampleInit>(init).target;
  if (target.dimension() != dimension) throw std::invalid_argument("initial target has the wrong dimension");
  for (std::size_t i = 0; i < particles; ++i) {
    PhiloxEngine engine(seed, {static_cast<std::uint32_t>(i), 0, kInitSubstream});
    const auto y = stick_breaking_sample(target, engine);
    auto dst = state.particle(i);
    std::copy(y.begin(), y.end(), dst.begin());
    double r = 1.0;
    for (double v : dst) r -= v;
    if (r < 2.0 * kBoundaryMargin) project_to_simplex(dst, 2.0 * kBoundaryMargin);
  }
  return state;
}

EnsembleState em_step(const DiffusionProcess& process, EnsembleState state,
                      const IntegratorConfig& cfg, StepDiagnostics* diag) {
  const std::size_t k = process.dimension();
  if (state.dimension() != k) throw std::invalid_argument("ensemble and process dimensions differ");
  if (!(cfg.dt >= 0.0)) throw std::invalid_argument("dt must be non-negative");
  const std::size_t m = process.noise_dimension();
  const bool diagonal = process.diagonal_noise();
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  const auto step = static_cast<std::uint32_t>(state.step_index);

  const std::size_t chunks = chunk_count(state.size());
  std::vector<StepDiagnostics> per_chunk(chunks);

  for_each_chunk(chunks, cfg.threads, [&](std::size_t chunk) {
    std::vector<double> a(k), g(diagonal ? k : k * m), dw(m), proposal(k), fallback(k);
    std::vector<double> scratch(process.scratch_size());
    StepDiagnostics& d = per_chunk[chunk];
    const std::size_t end = std::min(state.size(), (chunk + 1) * kChunk);
    for (std::size_t p = chunk * kChunk; p < end; ++p) {
      auto y = state.particle(p);
      process.evaluate(y, a, g, scratch, d);
      bool accepted = false;
      bool have_fallback = false;
      for (unsigned attempt = 0; attempt <= cfg.boundary_retries; ++attempt) {
        if (attempt > 0) ++d.retries;
        standard_normals(cfg.seed, {static_cast<std::uint32_t>(p), step, attempt}, dw);
        for (std::size_t i = 0; i < k; ++i) {
          double noise = 0.0;
          if (diagonal) {
            noise = g[i] * dw[i];
          } else {
            for (std::size_t j = 0; j < m; ++j) noise += g[i * m + j] * dw[j];
          }
          proposal[i] = y[i] + a[i] * dt + noise * sqrt_dt;
        }
        if (!all_finite(proposal)) continue;
        if (admissible(proposal) && process.evaluable(proposal)) {
          accepted = true;
          break;
        }
        fallback = proposal;
        have_fallback = true;
      }
      if (!accepted) {
        if (!have_fallback) throw NonFiniteStateError("Euler-Maruyama proposal is not finite");
        // R_K must clear the singular-face tolerance after projection.
        project_to_simplex(fallback, 2.0 * kBoundaryMargin);
        proposal = fallback;
        ++d.clamped;
      }
      std::copy(proposal.begin(), proposal.end(), y.begin());
      ++d.particle_steps;
    }
  });

  state.step_index += 1;
  state.t = static_cast<double>(state.step_index) * dt;
  if (diag)
    for (const auto& d : per_chunk) *diag += d;
  return state;
}

EnsembleState em_step(const SdeCoefficients& c, EnsembleState state, const IntegratorConfig& cfg,
                      StepDiagnostics* diag) {
  return em_step(GenDirProcess(c), std::move(state), cfg, diag);
}

MomentRecord ensemble_moments(const EnsembleState& state, unsigned threads) {
  const std::size_t k = state.dimension();
  const std::size_t chunks = chunk_count(state.size());
  std::vector<OnlineMoments> parts(chunks, OnlineMoments(k + 1));
  for_each_chunk(chunks, threads, [&](std::size_t chunk) {
    std::vector<double> full(k + 1);
    const std::size_t end = std::min(state.size(), (chunk + 1) * kChunk);
    for (std::size_t p = chunk * kChunk; p < end; ++p) {
      auto y = state.particle(p);
      double r = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        full[i] = y[i];
        r -= y[i];
      }
      full[k] = std::max(r, 0.0);
      parts[chunk].add(full);
    }
  });
  return finalize(merge_pairwise(std::move(parts)), state.t);
}

SimulationResult simulate(const DiffusionProcess& process, const IntegratorConfig& cfg,
                          const InitialCondition& init, const StateObserver& observer) {
  cfg.check();
  SimulationResult result{MomentTimeSeries{},
                          initial_state(init, cfg.particles, process.dimension(), cfg.seed),
                          StepDiagnostics{}};
  auto& state = result.final_state;
  auto record = [&] {
    if (observer) observer(state);
    result.series.push(ensemble_moments(state, cfg.threads));
  };
  record();
  const std::size_t steps = cfg.steps();
  for (std::size_t s = 1; s <= steps; ++s) {
    state = em_step(process, std::move(state), cfg, &result.diagnostics);
    if (s % cfg.record_stride == 0 || s == steps) record();
  }
  return result;
}

SimulationResult simulate(const SdeCoefficients& c, const IntegratorConfig& cfg,
                          const InitialCondition& init, const StateObserver& observer) {
  return simulate(GenDirProcess(c), cfg, init, observer);
}

}  // namespace gendir
