#include "gendir/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gendir/sde_kernel.hpp"

namespace gendir {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Numbers

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  // [sign] digits [. digits] [(e|E) [sign] digits]
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  std::size_t frac_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++frac_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E')
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) exp_negative = text[pos++] == '-';
    if (pos == text.size()) throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 4000) throw std::invalid_argument("exponent out of range in '" + std::string(text) + "'");
    }
    if (exp_negative) exponent = -exponent;
  }
  exponent -= static_cast<long>(frac_digits);
  // cpp_int reads a leading 0 as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));

  boost::multiprecision::cpp_int value(digits);
  boost::multiprecision::cpp_int scale = boost::multiprecision::pow(
      boost::multiprecision::cpp_int(10), static_cast<unsigned>(std::abs(exponent)));
  Rational r = exponent >= 0 ? Rational(value * scale) : Rational(value, scale);
  return negative ? Rational(-r) : r;
}

double parse_number(std::string_view text) { return parse_rational(text).convert_to<double>(); }

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_rational(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// ---------------------------------------------------------------------------
// Process kinds

ProcessKind parse_process_kind(std::string_view name) {
  if (name == "gendir") return ProcessKind::gendir;
  if (name == "dirichlet") return ProcessKind::dirichlet;
  if (name == "wright-fisher") return ProcessKind::wright_fisher;
  if (name == "jacobi") return ProcessKind::jacobi;
  if (name == "beta") return ProcessKind::beta;
  throw ConfigError("process", "unknown process '" + std::string(name) +
                                   "' (expected gendir, dirichlet, wright-fisher, jacobi or beta)");
}

std::string_view process_name(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::gendir: return "gendir";
    case ProcessKind::dirichlet: return "dirichlet";
    case ProcessKind::wright_fisher: return "wright-fisher";
    case ProcessKind::jacobi: return "jacobi";
    case ProcessKind::beta: return "beta";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// JSON helpers

namespace {

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

Rational rational_at(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_unsigned()) return Rational(v.get<unsigned long long>());
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw std::invalid_argument("number is not finite");
      return Rational(d);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected a number or a numeric string");
}

double number_at(const json& v, const std::string& path) {
  return rational_at(v, path).convert_to<double>();
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(path + "." + key, "missing field");
  return obj.at(key);
}

std::vector<Rational> rational_list(const json& v, const std::string& path, std::size_t expected) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  if (expected != 0 && v.size() != expected)
    throw ConfigError(path, "expected " + std::to_string(expected) + " entries, got " +
                                std::to_string(v.size()));
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_at(v[i], indexed(path, i)));
  return out;
}

std::vector<double> number_list(const json& v, const std::string& path, std::size_t expected) {
  return to_doubles(rational_list(v, path, expected));
}

template <class T>
void require_positive(const std::vector<T>& v, const std::string& path, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > T(0))) throw ConfigError(indexed(path, i), std::string(name) + " must satisfy " + name + " > 0");
}

template <class T>
void require_unit_interval(const std::vector<T>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > T(0) && v[i] < T(1))) throw ConfigError(indexed(path, i), "S must satisfy 0 < S < 1");
}

// c as rows (full or upper-triangular) or as {"11": v, "12": v, ...}.
SquareMatrix<Rational> parse_c(const json& v, const std::string& path, std::size_t k) {
  const std::size_t n = k - 1;
  SquareMatrix<Rational> c(n);
  if (v.is_null()) {
    if (n == 0) return c;
    throw ConfigError(path, "missing field");
  }
  if (v.is_array()) {
    if (v.size() != n) throw ConfigError(path, "expected " + std::to_string(n) + " rows for K = " + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) {
      const auto row_path = indexed(path, i);
      const auto& row = v[i];
      if (!row.is_array()) throw ConfigError(row_path, "expected an array");
      if (row.size() == n) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto value = rational_at(row[j], indexed(row_path, j));
          if (j < i && value != 0) throw ConfigError(indexed(row_path, j), "c is upper triangular; entries below the diagonal must be 0");
          c(i, j) = value;
        }
      } else if (row.size() == n - i) {
        for (std::size_t j = i; j < n; ++j) c(i, j) = rational_at(row[j - i], indexed(row_path, j - i));
      } else {
        throw ConfigError(row_path, "expected " + std::to_string(n) + " or " + std::to_string(n - i) + " entries");
      }
    }
    return c;
  }
  if (v.is_object()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const std::string compact = std::to_string(i + 1) + std::to_string(j + 1);
        const std::string separated = std::to_string(i + 1) + "," + std::to_string(j + 1);
        const std::string key = v.contains(separated) ? separated : compact;
        if (!v.contains(key)) throw ConfigError(path + "." + compact, "missing field");
        c(i, j) = rational_at(v.at(key), path + "." + key);
      }
    }
    return c;
  }
  throw ConfigError(path, "expected an array of rows or an object keyed by \"ij\"");
}

GenDirParams dirichlet_as_gen_dir(const std::vector<double>& omega) {
  const std::size_t k = omega.size() - 1;
  std::vector<double> alpha(omega.begin(), omega.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<double> beta(k);
  beta[k - 1] = omega[k];
  for (std::size_t i = k - 1; i-- > 0;) beta[i] = alpha[i + 1] + beta[i + 1];
  return GenDirParams(std::move(alpha), std::move(beta));
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

BasicSdeCoefficients<Rational> RunConfig::resolved_coefficients() const {
  if (coefficients) return *coefficients;
  if (distribution) {
    BasicGenDirParams<Rational> p(distribution->alpha, distribution->beta);
    return distribution_to_sde(p, distribution->kappa);
  }
  throw ConfigError("coefficients", "no generalized Dirichlet coefficients configured");
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "configuration must be a JSON object");
  RunConfig cfg;
  cfg.process = parse_process_kind(doc.value("process", std::string("gendir")));

  switch (cfg.process) {
    case ProcessKind::gendir: {
      const bool has_coeff = doc.contains("coefficients");
      const bool has_dist = doc.contains("distribution");
      if (has_coeff == has_dist)
        throw ConfigError("coefficients", "exactly one of 'coefficients' and 'distribution' must be present");
      if (has_coeff) {
        const auto& block = doc.at("coefficients");
        BasicSdeCoefficients<Rational> c;
        c.b = rational_list(member(block, "b", "coefficients"), "coefficients.b", 0);
        const std::size_t k = c.b.size();
        if (k == 0) throw ConfigError("coefficients.b", "needs at least one entry");
        c.S = rational_list(member(block, "S", "coefficients"), "coefficients.S", k);
        c.kappa = rational_list(member(block, "kappa", "coefficients"), "coefficients.kappa", k);
        c.c = parse_c(block.contains("c") ? block.at("c") : json(), "coefficients.c", k);
        require_positive(c.b, "coefficients.b", "b");
        require_unit_interval(c.S, "coefficients.S");
        require_positive(c.kappa, "coefficients.kappa", "kappa");
        if (auto report = validate(c); !report.ok())
          throw ConfigError("coefficients", report.describe());
        cfg.K = k;
        cfg.coefficients = std::move(c);
      } else {
        const auto& block = doc.at("distribution");
        RunConfig::Distribution d;
        d.alpha = rational_list(member(block, "alpha", "distribution"), "distribution.alpha", 0);
        const std::size_t k = d.alpha.size();
        if (k == 0) throw ConfigError("distribution.alpha", "needs at least one entry");
        d.beta = rational_list(member(block, "beta", "distribution"), "distribution.beta", k);
        d.kappa = block.contains("kappa") ? rational_list(block.at("kappa"), "distribution.kappa", k)
                                          : std::vector<Rational>(k, Rational(1));
        require_positive(d.alpha, "distribution.alpha", "alpha");
        require_positive(d.beta, "distribution.beta", "beta");
        require_positive(d.kappa, "distribution.kappa", "kappa");
        cfg.K = k;
        cfg.distribution = std::move(d);
      }
      // Forward map must succeed (recovered beta > 0).
      try {
        (void)sde_to_distribution(cfg.resolved_coefficients());
      } catch (const CoefficientError& e) {
        throw ConfigError("coefficients", e.what());
      }
      break;
    }
    case ProcessKind::dirichlet: {
      const auto& block = member(doc, "dirichlet", "$");
      DirichletSdeParams p;
      p.b = number_list(member(block, "b", "dirichlet"), "dirichlet.b", 0);
      cfg.K = p.b.size();
      if (cfg.K == 0) throw ConfigError("dirichlet.b", "needs at least one entry");
      p.S = number_list(member(block, "S", "dirichlet"), "dirichlet.S", cfg.K);
      p.kappa = number_list(member(block, "kappa", "dirichlet"), "dirichlet.kappa", cfg.K);
      require_positive(p.b, "dirichlet.b", "b");
      require_unit_interval(p.S, "dirichlet.S");
      require_positive(p.kappa, "dirichlet.kappa", "kappa");
      cfg.dirichlet = std::move(p);
      break;
    }
    case ProcessKind::wright_fisher: {
      const auto& block = member(doc, "wright_fisher", "$");
      WrightFisherParams p{number_list(member(block, "omega", "wright_fisher"), "wright_fisher.omega", 0)};
      if (p.omega.size() < 2) throw ConfigError("wright_fisher.omega", "needs at least two weights");
      require_positive(p.omega, "wright_fisher.omega", "omega");
      cfg.K = p.omega.size() - 1;
      cfg.wright_fisher = std::move(p);
      break;
    }
    case ProcessKind::jacobi: {
      const auto& block = member(doc, "jacobi", "$");
      JacobiParams p;
      p.a = number_at(member(block, "a", "jacobi"), "jacobi.a");
      p.c = number_at(member(block, "c", "jacobi"), "jacobi.c");
      p.pi = number_list(member(block, "pi", "jacobi"), "jacobi.pi", 0);
      if (!(p.a < 0.0)) throw ConfigError("jacobi.a", "a must satisfy a < 0");
      if (!(p.c > 0.0)) throw ConfigError("jacobi.c", "c must satisfy c > 0");
      if (p.pi.size() < 2) throw ConfigError("jacobi.pi", "needs at least two entries");
      require_positive(p.pi, "jacobi.pi", "pi");
      double s = 0.0;
      for (double v : p.pi) s += v;
      if (std::abs(s - 1.0) > 1e-12) throw ConfigError("jacobi.pi", "entries must sum to 1");
      cfg.K = p.pi.size() - 1;
      cfg.jacobi = std::move(p);
      break;
    }
    case ProcessKind::beta: {
      const auto& block = member(doc, "beta", "$");
      BetaSdeParams p;
      p.b = number_at(member(block, "b", "beta"), "beta.b");
      p.S = number_at(member(block, "S", "beta"), "beta.S");
      p.kappa = number_at(member(block, "kappa", "beta"), "beta.kappa");
      if (!(p.b > 0.0)) throw ConfigError("beta.b", "b must satisfy b > 0");
      if (!(p.S > 0.0 && p.S < 1.0)) throw ConfigError("beta.S", "S must satisfy 0 < S < 1");
      if (!(p.kappa > 0.0)) throw ConfigError("beta.kappa", "kappa must satisfy kappa > 0");
      cfg.K = 1;
      cfg.beta = p;
      break;
    }
  }

  if (doc.contains("integrator")) {
    const auto& block = doc.at("integrator");
    auto& in = cfg.integrator;
    if (block.contains("dt")) in.dt = number_at(block.at("dt"), "integrator.dt");
    if (block.contains("t_end")) in.t_end = number_at(block.at("t_end"), "integrator.t_end");
    auto count = [&](const char* key, auto& field) {
      if (!block.contains(key)) return;
      const auto& v = block.at(key);
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(std::string("integrator.") + key, "expected a non-negative integer");
      field = static_cast<std::remove_reference_t<decltype(field)>>(v.get<long long>());
    };
    count("particles", in.particles);
    count("seed", in.seed);
    count("record_stride", in.record_stride);
    count("boundary_retries", in.boundary_retries);
    count("threads", in.threads);
  }
  try {
    cfg.integrator.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("integrator", e.what());
  }

  if (doc.contains("init")) {
    const auto& block = doc.at("init");
    if (block.is_string() && block.get<std::string>() == "origin") {
      // default
    } else if (block.is_string() && block.get<std::string>() == "exact-sample") {
      cfg.init_exact_sample = true;
    } else if (block.is_object() && block.contains("point")) {
      cfg.init_point = number_list(block.at("point"), "init.point", cfg.K);
      if (auto err = check_simplex(cfg.init_point); !err.empty()) throw ConfigError("init.point", err);
    } else if (block.is_object() && block.value("exact_sample", false)) {
      cfg.init_exact_sample = true;
    } else {
      throw ConfigError("init", "expected \"origin\", \"exact-sample\" or {\"point\": [...]}");
    }
    if (cfg.init_exact_sample && !invariant_params(cfg))
      throw ConfigError("init", "exact sampling needs a process with a generalized Dirichlet invariant");
  }

  cfg.window_from = cfg.integrator.t_end / 2.0;
  cfg.window_to = cfg.integrator.t_end;
  if (doc.contains("window")) {
    const auto w = number_list(doc.at("window"), "window", 2);
    if (!(w[0] <= w[1])) throw ConfigError("window", "expected [from, to] with from <= to");
    cfg.window_from = w[0];
    cfg.window_to = w[1];
  }
  if (doc.contains("tolerance")) {
    const auto& block = doc.at("tolerance");
    if (block.contains("mean")) cfg.tolerance.mean_rel = number_at(block.at("mean"), "tolerance.mean");
    if (block.contains("var")) cfg.tolerance.var_rel = number_at(block.at("var"), "tolerance.var");
    if (block.contains("cov")) cfg.tolerance.cov_rel = number_at(block.at("cov"), "tolerance.cov");
  }
  if (doc.contains("output")) {
    const auto& block = doc.at("output");
    if (block.contains("dir")) {
      if (!block.at("dir").is_string()) throw ConfigError("output.dir", "expected a string");
      cfg.output_dir = block.at("dir").get<std::string>();
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open configuration file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

json appendix_b_preset_json(int which) {
  static const char* c11[] = {"1/80", "-1/80", "-1/4"};
  if (which < 1 || which > 3) throw ConfigError("case", "expected 1, 2 or 3");
  return json{
      {"process", "gendir"},
      {"coefficients",
       {{"b", {"1/10", "3/2"}},
        {"S", {"5/8", "2/5"}},
        {"kappa", {"1/80", "3/10"}},
        {"c", {{"11", c11[which - 1]}}}}},
      {"integrator",
       {{"dt", "0.025"},
        {"t_end", 50},
        {"particles", 10000},
        {"seed", 20130912 + which},
        {"record_stride", 4},
        {"boundary_retries", 10}}},
      {"init", "origin"},
      {"window", {25, 50}},
      {"tolerance", {{"mean", "0.05"}, {"var", "0.05"}, {"cov", "0.10"}}},
      {"output", {{"dir", "appendix-b-case-" + std::to_string(which)}}},
  };
}

RunConfig appendix_b_preset(int which) { return parse_run_config(appendix_b_preset_json(which)); }

std::unique_ptr<DiffusionProcess> make_process(const RunConfig& cfg) {
  switch (cfg.process) {
    case ProcessKind::gendir: {
      const auto exact = cfg.resolved_coefficients();
      SdeCoefficients c{to_doubles(exact.b), to_doubles(exact.S), to_doubles(exact.kappa),
                        SquareMatrix<double>(exact.c.size())};
      for (std::size_t i = 0; i < exact.c.size(); ++i)
        for (std::size_t j = 0; j < exact.c.size(); ++j) c.c(i, j) = exact.c(i, j).convert_to<double>();
      return std::make_unique<GenDirProcess>(std::move(c));
    }
    case ProcessKind::dirichlet: return std::make_unique<DirichletSdeProcess>(*cfg.dirichlet);
    case ProcessKind::wright_fisher: return std::make_unique<WrightFisherProcess>(*cfg.wright_fisher);
    case ProcessKind::jacobi: return std::make_unique<JacobiProcess>(*cfg.jacobi);
    case ProcessKind::beta: return std::make_unique<BetaProcess>(*cfg.beta);
  }
  throw ConfigError("process", "unsupported process");
}

std::optional<GenDirParams> invariant_params(const RunConfig& cfg) {
  switch (cfg.process) {
    case ProcessKind::gendir: {
      const auto p = sde_to_distribution(cfg.resolved_coefficients());
      return GenDirParams(to_doubles(p.alpha()), to_doubles(p.beta()));
    }
    case ProcessKind::dirichlet: {
      // Dirichlet invariant only when b_i(1-S_i)/kappa_i agree.
      const auto& p = *cfg.dirichlet;
      std::vector<double> chain;
      for (std::size_t i = 0; i < cfg.K; ++i) chain.push_back(p.b[i] * (1.0 - p.S[i]) / p.kappa[i]);
      double spread = 0.0;
      if (!detail::chain_agrees(chain, kMapTolerance, spread)) return std::nullopt;
      std::vector<double> omega;
      for (std::size_t i = 0; i < cfg.K; ++i) omega.push_back(p.b[i] * p.S[i] / p.kappa[i]);
      omega.push_back(chain.front());
      return dirichlet_as_gen_dir(omega);
    }
    case ProcessKind::wright_fisher: return dirichlet_as_gen_dir(cfg.wright_fisher->omega);
    case ProcessKind::beta: {
      const auto b = beta_sde_invariant(*cfg.beta);
      return GenDirParams({b.alpha}, {b.beta});
    }
    case ProcessKind::jacobi: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<MomentSet> analytic_moments(const RunConfig& cfg) {
  if (auto p = invariant_params(cfg)) return gd_moments(*p);
  return std::nullopt;
}

InitialCondition initial_condition(const RunConfig& cfg) {
  if (cfg.init_exact_sample) return ExactSampleInit{*invariant_params(cfg)};
  if (!cfg.init_point.empty()) return PointInit{cfg.init_point};
  return PointInit{std::vector<double>(cfg.K, 0.0)};
}

}  // namespace gendir
