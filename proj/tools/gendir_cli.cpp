// gendir: command-line front end for the generalized Dirichlet diffusion.
//
//   gendir simulate --config run.json [--threads N] [--out DIR]
//   gendir simulate --process gendir --alpha 5,2 --beta 5,3 --kappa 1/80,3/10 ...
//   gendir reproduce-appendix-b --case 1|2|3|all [--out DIR]
//   gendir moments --alpha 5,2 --beta 5,3
//   gendir density --alpha 5,2 --beta 5,3 --point 0.3,0.4
//   gendir map --from-sde b=0.1,1.5 S=0.625,0.4 kappa=0.0125,0.3 c11=-0.25
//   gendir map --from-dist --alpha 5,2 --beta 26,3 --kappa 1/80,3/10
//   gendir verify-potential --K 3 --points 1000 --seed 7

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gendir/config.hpp"
#include "gendir/distributions.hpp"
#include "gendir/output.hpp"
#include "gendir/param_map.hpp"
#include "gendir/sampling.hpp"
#include "gendir/sde_kernel.hpp"

using namespace gendir;
using nlohmann::json;

namespace {

json rational_strings(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s;
}

std::string show(const Rational& r) {
  const std::string exact = format_rational(r);
  const std::string dec = format_double(r.convert_to<double>());
  return exact == dec ? exact : exact + " (" + dec + ")";
}

std::string show_list(const std::vector<Rational>& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(show(x));
  return "(" + join(parts) + ")";
}

void print_moments(const BasicMomentSet<Rational>& m) {
  const std::size_t k = m.mean.size();
  for (std::size_t i = 0; i < k; ++i) std::cout << "mean_" << i + 1 << " = " << show(m.mean[i]) << '\n';
  for (std::size_t i = 0; i < k; ++i) std::cout << "var_" << i + 1 << " = " << show(m.cov(i, i)) << '\n';
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      std::cout << "cov_" << i + 1 << "_" << j + 1 << " = " << show(m.cov(i, j)) << '\n';
}

void print_report(const ComparisonReport& report) {
  for (const auto& e : report.entries) {
    std::printf("  %-8s empirical %+.6e analytic %+.6e rel.dev %.3e (tol %.2f) %s\n", e.quantity.c_str(),
                e.empirical, e.analytic, e.rel_dev, e.tolerance, e.pass ? "ok" : "FAIL");
  }
}

int run_and_report(const RunConfig& cfg, const std::optional<std::filesystem::path>& out) {
  const auto outcome = run_simulate(cfg, out);
  const auto& d = outcome.result.diagnostics;
  std::cout << "process " << process_name(cfg.process) << ", K = " << cfg.K << ", "
            << cfg.integrator.particles << " particles, " << cfg.integrator.steps() << " steps of "
            << cfg.integrator.dt << '\n';
  if (auto p = invariant_params(cfg)) {
    std::cout << "invariant alpha = (" << join([&] {
      std::vector<std::string> s;
      for (double v : p->alpha()) s.push_back(format_double(v));
      return s;
    }()) << "), beta = (" << join([&] {
      std::vector<std::string> s;
      for (double v : p->beta()) s.push_back(format_double(v));
      return s;
    }()) << ")\n";
  }
  std::cout << "window [" << cfg.window_from << ", " << cfg.window_to << "]\n";
  if (outcome.comparison) print_report(*outcome.comparison);
  std::cout << "clamped " << d.clamped << " of " << d.particle_steps << " particle-steps, retries "
            << d.retries << '\n';
  if (out) std::cout << "wrote " << (*out / "timeseries.csv").string() << " and "
                     << (*out / "summary.json").string() << '\n';
  return outcome.exit_code;
}

// key=value tokens for `map --from-sde`.
BasicSdeCoefficients<Rational> coefficients_from_tokens(const std::vector<std::string>& tokens) {
  std::map<std::string, std::vector<Rational>> lists;
  std::map<std::pair<std::size_t, std::size_t>, Rational> c_entries;
  const std::regex c_key(R"(c(\d+)[,_](\d+)|c(\d)(\d))");
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError(tok, "expected key=value");
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    std::smatch m;
    if (key == "b" || key == "S" || key == "kappa") {
      lists[key] = parse_rational_list(value);
    } else if (std::regex_match(key, m, c_key)) {
      const std::size_t i = std::stoul(m[1].matched ? m[1].str() : m[3].str());
      const std::size_t j = std::stoul(m[2].matched ? m[2].str() : m[4].str());
      if (i == 0 || j == 0 || i > j) throw ConfigError(key, "c entries need 1 <= i <= j");
      c_entries[{i - 1, j - 1}] = parse_rational(value);
    } else {
      throw ConfigError(key, "unknown coefficient (expected b, S, kappa or cij)");
    }
  }
  for (const char* key : {"b", "S", "kappa"})
    if (!lists.count(key)) throw ConfigError(key, "missing field");
  BasicSdeCoefficients<Rational> c{lists["b"], lists["S"], lists["kappa"], SquareMatrix<Rational>()};
  const std::size_t k = c.b.size();
  if (k == 0) throw ConfigError("b", "needs at least one entry");
  c.c = SquareMatrix<Rational>(k - 1);
  for (const auto& [ij, v] : c_entries) {
    if (ij.second + 1 >= k) throw ConfigError("c", "index out of range for K = " + std::to_string(k));
    c.c(ij.first, ij.second) = v;
  }
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i; j + 1 < k; ++j)
      if (!c_entries.count({i, j}))
        throw ConfigError("c" + std::to_string(i + 1) + std::to_string(j + 1), "missing field");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Dirichlet diffusion: moments, densities, coefficient maps and ensemble simulation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run an ensemble simulation");
  std::string config_path, process = "gendir", out_dir, init = "origin";
  std::string s_alpha, s_beta, s_kappa, s_b, s_S, s_c, s_omega, s_pi, s_point;
  std::string jac_a, jac_c, s_dt, s_tend, s_window;
  long long particles = -1, seed = -1, stride = -1;
  unsigned threads = 0;
  sim->add_option("--config", config_path, "JSON run configuration");
  sim->add_option("--process", process, "gendir | dirichlet | wright-fisher | jacobi | beta");
  sim->add_option("--alpha", s_alpha, "gendir distribution block: alpha list");
  sim->add_option("--beta", s_beta, "gendir distribution block: beta list");
  sim->add_option("--kappa", s_kappa, "kappa list (defaults to 1 for the distribution block)");
  sim->add_option("--b", s_b, "b list");
  sim->add_option("--S", s_S, "S list");
  sim->add_option("--c", s_c, "c upper triangle, row by row (c11,c12,...,c22,...)");
  sim->add_option("--omega", s_omega, "Wright-Fisher weights");
  sim->add_option("--jacobi-a", jac_a, "Jacobi a < 0");
  sim->add_option("--jacobi-c", jac_c, "Jacobi c > 0");
  sim->add_option("--pi", s_pi, "Jacobi pi");
  sim->add_option("--dt", s_dt, "time step");
  sim->add_option("--t-end", s_tend, "end time");
  sim->add_option("--particles", particles, "ensemble size");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--record-stride", stride, "steps between moment records");
  sim->add_option("--init", init, "origin | exact-sample | point");
  sim->add_option("--point", s_point, "initial point for --init point");
  sim->add_option("--window", s_window, "averaging window from,to");
  sim->add_option("--threads", threads, "worker threads (results do not depend on it)");
  sim->add_option("--out", out_dir, "output directory");

  // reproduce-appendix-b
  auto* repro = app.add_subcommand("reproduce-appendix-b", "Run the three K=2 reference cases");
  std::string which = "all";
  repro->add_option("--case", which, "1, 2, 3 or all")->check(CLI::IsMember({"1", "2", "3", "all"}));
  repro->add_option("--out", out_dir, "output directory (one subdirectory per case)");
  repro->add_option("--threads", threads, "worker threads");
  repro->add_option("--particles", particles, "override the ensemble size");
  repro->add_option("--seed", seed, "override the seed");

  // moments
  auto* mom = app.add_subcommand("moments", "Analytic means and covariances");
  mom->add_option("--alpha", s_alpha, "generalized Dirichlet alpha");
  mom->add_option("--beta", s_beta, "generalized Dirichlet beta");
  mom->add_option("--omega", s_omega, "Dirichlet weights");

  // density
  auto* den = app.add_subcommand("density", "Log-density at points");
  std::vector<std::string> points;
  den->add_option("--alpha", s_alpha, "generalized Dirichlet alpha");
  den->add_option("--beta", s_beta, "generalized Dirichlet beta");
  den->add_option("--omega", s_omega, "Dirichlet weights");
  den->add_option("--point", points, "point y_1,...,y_K (repeatable)")->required();

  // map
  auto* map = app.add_subcommand("map", "Convert between SDE coefficients and distribution parameters");
  bool from_sde = false, from_dist = false;
  std::vector<std::string> tokens;
  map->add_flag("--from-sde", from_sde, "tokens b=.. S=.. kappa=.. cij=..");
  map->add_flag("--from-dist", from_dist, "use --alpha --beta [--kappa]");
  map->add_option("--alpha", s_alpha, "alpha list");
  map->add_option("--beta", s_beta, "beta list");
  map->add_option("--kappa", s_kappa, "kappa list (default all 1)");
  map->add_option("tokens", tokens, "key=value coefficient tokens");

  // verify-potential
  auto* ver = app.add_subcommand("verify-potential", "Check the stationary-potential identity at random points");
  std::size_t vk = 3, npoints = 1000, nsets = 1;
  std::uint64_t vseed = 7;
  ver->add_option("--K", vk, "dimension")->check(CLI::PositiveNumber);
  ver->add_option("--points", npoints, "interior points per coefficient set");
  ver->add_option("--sets", nsets, "random coefficient sets");
  ver->add_option("--seed", vseed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      json doc;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          std::cerr << "error: cannot open " << config_path << '\n';
          return kExitIo;
        }
        try {
          doc = json::parse(in);
        } catch (const json::parse_error& e) {
          throw ConfigError("$", std::string("invalid JSON: ") + e.what());
        }
      } else {
        doc["process"] = process;
        auto list = [](const std::string& s) { return rational_strings(parse_rational_list(s)); };
        if (process == "gendir") {
          if (!s_alpha.empty()) {
            doc["distribution"] = {{"alpha", list(s_alpha)}, {"beta", list(s_beta)}};
            if (!s_kappa.empty()) doc["distribution"]["kappa"] = list(s_kappa);
          } else {
            doc["coefficients"] = {{"b", list(s_b)}, {"S", list(s_S)}, {"kappa", list(s_kappa)}};
            const std::size_t k = doc["coefficients"]["b"].size();
            json rows = json::array();
            const auto c = s_c.empty() ? json::array() : list(s_c);
            std::size_t pos = 0;
            for (std::size_t i = 0; i + 1 < k; ++i) {
              json row = json::array();
              for (std::size_t j = i; j + 1 < k; ++j) {
                if (pos >= c.size()) throw ConfigError("--c", "too few entries for K = " + std::to_string(k));
                row.push_back(c[pos++]);
              }
              rows.push_back(row);
            }
            if (pos != c.size()) throw ConfigError("--c", "too many entries for K = " + std::to_string(k));
            doc["coefficients"]["c"] = rows;
          }
        } else if (process == "dirichlet" || process == "beta") {
          doc[process] = {{"b", list(s_b)}, {"S", list(s_S)}, {"kappa", list(s_kappa)}};
          if (process == "beta") {
            for (const char* key : {"b", "S", "kappa"}) {
              auto& v = doc[process][key];
              if (v.size() != 1) throw ConfigError(std::string("--") + key, "beta process takes one value");
              v = v[0];
            }
          }
        } else if (process == "wright-fisher") {
          doc["wright_fisher"] = {{"omega", list(s_omega)}};
        } else if (process == "jacobi") {
          doc["jacobi"] = {{"a", jac_a}, {"c", jac_c}, {"pi", list(s_pi)}};
        } else {
          (void)parse_process_kind(process);
        }
        doc["integrator"] = json::object();
      }
      auto& in = doc["integrator"];
      if (!s_dt.empty()) in["dt"] = s_dt;
      if (!s_tend.empty()) in["t_end"] = s_tend;
      if (particles >= 0) in["particles"] = particles;
      if (seed >= 0) in["seed"] = seed;
      if (stride >= 0) in["record_stride"] = stride;
      if (threads > 0) in["threads"] = threads;
      if (sim->count("--init")) {
        if (init == "point") doc["init"] = {{"point", rational_strings(parse_rational_list(s_point))}};
        else doc["init"] = init;
      }
      if (!s_window.empty()) doc["window"] = rational_strings(parse_rational_list(s_window));
      const auto cfg = parse_run_config(doc);
      std::filesystem::path out = out_dir.empty() ? cfg.output_dir : out_dir;
      return run_and_report(cfg, out);
    }

    if (*repro) {
      std::vector<int> cases = which == "all" ? std::vector<int>{1, 2, 3} : std::vector<int>{std::stoi(which)};
      int worst = kExitOk;
      for (int c : cases) {
        auto doc = appendix_b_preset_json(c);
        if (threads > 0) doc["integrator"]["threads"] = threads;
        if (particles >= 0) doc["integrator"]["particles"] = particles;
        if (seed >= 0) doc["integrator"]["seed"] = seed;
        const auto cfg = parse_run_config(doc);
        std::filesystem::path out =
            out_dir.empty() ? std::filesystem::path(cfg.output_dir) : std::filesystem::path(out_dir) / cfg.output_dir;
        std::cout << "== case " << c << " ==\n";
        worst = std::max(worst, run_and_report(cfg, out));
      }
      return worst;
    }

    if (*mom) {
      if (!s_omega.empty()) {
        print_moments(dirichlet_moments(BasicDirichletParams<Rational>(parse_rational_list(s_omega))));
      } else {
        BasicGenDirParams<Rational> p(parse_rational_list(s_alpha), parse_rational_list(s_beta));
        std::cout << "gamma = " << show_list(p.gamma()) << '\n';
        print_moments(gd_moments(p));
      }
      return kExitOk;
    }

    if (*den) {
      for (const auto& text : points) {
        const SimplexPoint y(to_doubles(parse_rational_list(text)));
        LogDensity ld;
        if (!s_omega.empty()) ld = dirichlet_log_density(DirichletParams(to_doubles(parse_rational_list(s_omega))), y);
        else
          ld = gd_log_density(GenDirParams(to_doubles(parse_rational_list(s_alpha)),
                                           to_doubles(parse_rational_list(s_beta))),
                              y);
        std::cout << text << "  log-density " << format_double(ld.value) << '\n';
      }
      return kExitOk;
    }

    if (*map) {
      if (from_sde == from_dist) throw ConfigError("map", "choose exactly one of --from-sde and --from-dist");
      if (from_sde) {
        const auto c = coefficients_from_tokens(tokens);
        const auto p = sde_to_distribution(c);
        std::cout << "alpha = " << show_list(p.alpha()) << '\n'
                  << "beta  = " << show_list(p.beta()) << '\n'
                  << "gamma = " << show_list(p.gamma()) << '\n';
      } else {
        BasicGenDirParams<Rational> p(parse_rational_list(s_alpha), parse_rational_list(s_beta));
        const auto kappa = s_kappa.empty() ? std::vector<Rational>(p.dimension(), Rational(1))
                                           : parse_rational_list(s_kappa);
        const auto c = distribution_to_sde(p, kappa);
        std::cout << "b     = " << show_list(c.b) << '\n'
                  << "S     = " << show_list(c.S) << '\n'
                  << "kappa = " << show_list(c.kappa) << '\n';
        for (std::size_t i = 0; i < c.c.size(); ++i)
          for (std::size_t j = i; j < c.c.size(); ++j)
            std::cout << "c" << i + 1 << j + 1 << "   = " << show(c.c(i, j)) << '\n';
      }
      return kExitOk;
    }

    if (*ver) {
      std::mt19937_64 engine(vseed);
      std::uniform_real_distribution<double> kappa_dist(0.05, 2.0);
      double worst = 0.0;
      for (std::size_t s = 0; s < nsets; ++s) {
        const auto params = random_gen_dir_params(engine, vk, 0.5, 10.0);
        std::vector<double> kappa(vk);
        for (auto& v : kappa) v = kappa_dist(engine);
        const auto c = distribution_to_sde(params, kappa);
        for (std::size_t i = 0; i < npoints; ++i) {
          const SimplexPoint y(random_interior_point(engine, vk, 1e-3));
          for (double r : potential_residual(c, y)) worst = std::max(worst, std::abs(r));
        }
      }
      std::cout << "K = " << vk << ", " << nsets << " coefficient set(s) x " << npoints
                << " points: max |potential residual| = " << format_double(worst) << '\n';
      const bool ok = worst <= 1e-8;
      std::cout << (ok ? "PASS" : "FAIL") << " (threshold 1e-08)\n";
      return ok ? kExitOk : kExitComparison;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
