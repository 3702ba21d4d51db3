#pragma once

// Run configuration: JSON documents with nested sections, numbers given as
// JSON numbers or as strings ("0.0125", "1/80", "-1/4", "2.5e-3").

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

#include "gendir/distributions.hpp"
#include "gendir/integrator.hpp"
#include "gendir/param_map.hpp"
#include "gendir/process.hpp"
#include "gendir/related_processes.hpp"
#include "gendir/stats.hpp"

namespace gendir {

using Rational = boost::multiprecision::cpp_rational;

/// Validation failure carrying the offending field path, e.g.
/// "coefficients.S[0]".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Exact value of an integer, decimal, scientific or "p/q" literal.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// parse_rational rounded to the nearest double.
double parse_number(std::string_view text);

/// Comma-separated list of numbers.
std::vector<Rational> parse_rational_list(std::string_view text);

std::string format_rational(const Rational& r);

template <class T>
std::vector<double> to_doubles(const std::vector<T>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, double>) out.push_back(x);
    else out.push_back(x.template convert_to<double>());
  }
  return out;
}

enum class ProcessKind { gendir, dirichlet, wright_fisher, jacobi, beta };

ProcessKind parse_process_kind(std::string_view name);
std::string_view process_name(ProcessKind kind);

struct RunConfig {
  ProcessKind process = ProcessKind::gendir;
  std::size_t K = 0;

  // gendir: exactly one of these two is set.
  std::optional<BasicSdeCoefficients<Rational>> coefficients;
  struct Distribution {
    std::vector<Rational> alpha;
    std::vector<Rational> beta;
    std::vector<Rational> kappa;
  };
  std::optional<Distribution> distribution;

  std::optional<DirichletSdeParams> dirichlet;
  std::optional<WrightFisherParams> wright_fisher;
  std::optional<JacobiParams> jacobi;
  std::optional<BetaSdeParams> beta;

  IntegratorConfig integrator;
  bool init_exact_sample = false;
  std::vector<double> init_point;  // empty means the origin

  double window_from = 0.0;
  double window_to = 0.0;
  Tolerance tolerance;
  std::string output_dir = "out";

  /// SDE coefficients of the gendir process in exact arithmetic.
  BasicSdeCoefficients<Rational> resolved_coefficients() const;
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Reference presets: case 1 c11 = 1/80, case 2 c11 = -1/80,
/// case 3 c11 = -1/4, common b = (1/10, 3/2), S = (5/8, 2/5),
/// kappa = (1/80, 3/10); 10,000 particles, dt = 0.025, origin start,
/// t_end = 50, averaging window [25, 50].
RunConfig appendix_b_preset(int which);
nlohmann::json appendix_b_preset_json(int which);

std::unique_ptr<DiffusionProcess> make_process(const RunConfig& cfg);

/// Invariant generalized Dirichlet parameters, when the process has one in
/// that family (gendir, dirichlet, wright-fisher, beta).
std::optional<GenDirParams> invariant_params(const RunConfig& cfg);

/// Analytic stationary moments of the K free coordinates, when known.
std::optional<MomentSet> analytic_moments(const RunConfig& cfg);

InitialCondition initial_condition(const RunConfig& cfg);

}  // namespace gendir
