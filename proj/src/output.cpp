#include "gendir/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace gendir {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(std::size_t n) {
  std::string h = "t";
  for (std::size_t i = 1; i <= n; ++i) h += ",mean_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) h += ",var_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) h += ",cov_" + std::to_string(i) + "_" + std::to_string(j);
  return h;
}

void write_csv(std::ostream& out, const MomentTimeSeries& ts) {
  if (ts.empty()) return;
  const std::size_t n = ts.records().front().dimension();
  out << csv_header(n) << '\n';
  const std::string nan = "nan";
  for (const auto& r : ts.records()) {
    out << format_double(r.t);
    for (std::size_t i = 0; i < n; ++i) out << ',' << format_double(r.mean[i]);
    for (std::size_t i = 0; i < n; ++i) out << ',' << (r.cov ? format_double((*r.cov)(i, i)) : nan);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out << ',' << (r.cov ? format_double((*r.cov)(i, j)) : nan);
    out << '\n';
  }
}

json moments_json(const MomentSet& m) {
  json cov = json::array();
  for (std::size_t i = 0; i < m.cov.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cov.size(); ++j) row.push_back(m.cov(i, j));
    cov.push_back(row);
  }
  return {{"mean", m.mean}, {"cov", cov}};
}

json record_json(const MomentRecord& rec) {
  json j{{"t", rec.t}, {"count", rec.count}, {"mean", rec.mean}, {"mean_se", rec.mean_se}};
  if (rec.cov) {
    json cov = json::array();
    for (std::size_t i = 0; i < rec.cov->size(); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < rec.cov->size(); ++k) row.push_back((*rec.cov)(i, k));
      cov.push_back(row);
    }
    j["cov"] = cov;
  } else {
    j["cov"] = nullptr;
  }
  return j;
}

json comparison_json(const ComparisonReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"quantity", e.quantity},
                       {"empirical", e.empirical},
                       {"analytic", e.analytic},
                       {"abs_dev", e.abs_dev},
                       {"rel_dev", e.rel_dev},
                       {"se_multiple", std::isfinite(e.se_multiple) ? json(e.se_multiple) : json(nullptr)},
                       {"tolerance", e.tolerance},
                       {"pass", e.pass}});
  }
  return {{"pass", report.pass}, {"entries", entries}};
}

namespace {

json config_echo(const RunConfig& cfg) {
  json j{{"process", std::string(process_name(cfg.process))}, {"K", cfg.K}};
  if (cfg.process == ProcessKind::gendir) {
    const auto c = cfg.resolved_coefficients();
    auto strings = [](const std::vector<Rational>& v) {
      std::vector<std::string> s;
      for (const auto& x : v) s.push_back(format_rational(x));
      return s;
    };
    json cm = json::object();
    for (std::size_t i = 0; i < c.c.size(); ++i)
      for (std::size_t k = i; k < c.c.size(); ++k)
        cm[std::to_string(i + 1) + "," + std::to_string(k + 1)] = format_rational(c.c(i, k));
    j["coefficients"] = {{"b", strings(c.b)}, {"S", strings(c.S)}, {"kappa", strings(c.kappa)}, {"c", cm}};
  }
  const auto& in = cfg.integrator;
  j["integrator"] = {{"dt", in.dt},
                     {"t_end", in.t_end},
                     {"steps", in.steps()},
                     {"particles", in.particles},
                     {"seed", in.seed},
                     {"record_stride", in.record_stride},
                     {"boundary_retries", in.boundary_retries}};
  if (cfg.init_exact_sample) j["init"] = "exact-sample";
  else if (cfg.init_point.empty()) j["init"] = "origin";
  else j["init"] = {{"point", cfg.init_point}};
  j["window"] = {cfg.window_from, cfg.window_to};
  return j;
}

}  // namespace

RunOutcome run_simulate(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir,
                        const StateObserver& observer) {
  namespace fs = std::filesystem;
  const auto started = std::chrono::steady_clock::now();
  const auto process = make_process(cfg);

  std::optional<fs::path> csv_path, summary_path;
  if (out_dir) {
    fs::create_directories(*out_dir);
    csv_path = *out_dir / "timeseries.csv";
    summary_path = *out_dir / "summary.json";
  }
  auto remove_partial = [&] {
    std::error_code ec;
    if (csv_path) fs::remove(*csv_path, ec);
    if (summary_path) fs::remove(*summary_path, ec);
  };

  try {
    RunOutcome out;
    out.result = simulate(*process, cfg.integrator, initial_condition(cfg), observer);
    out.analytic = analytic_moments(cfg);
    out.window = window_average(out.result.series, cfg.window_from, cfg.window_to);
    if (out.analytic) {
      out.comparison = compare(out.window, *out.analytic, cfg.tolerance);
      if (!out.comparison->pass) out.exit_code = kExitComparison;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    json& s = out.summary;
    s["config"] = config_echo(cfg);
    if (auto p = invariant_params(cfg)) {
      s["resolved_params"] = {{"alpha", p->alpha()}, {"beta", p->beta()}, {"gamma", p->gamma()}};
    } else {
      s["resolved_params"] = nullptr;
    }
    if (out.analytic) {
      s["analytic"] = moments_json(*out.analytic);
      s["analytic_full"] = moments_json(complete_moments(*out.analytic));
    } else {
      s["analytic"] = nullptr;
      s["analytic_full"] = nullptr;
    }
    s["empirical"] = record_json(out.window);
    s["empirical"]["window"] = {cfg.window_from, cfg.window_to};
    s["comparison"] = out.comparison ? comparison_json(*out.comparison) : json(nullptr);
    const auto& d = out.result.diagnostics;
    s["diagnostics"] = {{"particle_steps", d.particle_steps},
                        {"retries", d.retries},
                        {"clamped", d.clamped},
                        {"clamp_fraction", d.clamp_fraction()},
                        {"clipped_radicands", d.clipped_radicands}};
    s["seed"] = cfg.integrator.seed;
    s["wall_time_s"] = wall;

    if (out_dir) {
      std::ofstream csv(*csv_path, std::ios::binary);
      write_csv(csv, out.result.series);
      std::ofstream summary(*summary_path, std::ios::binary);
      summary << s.dump(2) << '\n';
      if (!csv || !summary) throw std::ios_base::failure("failed writing outputs to " + out_dir->string());
    }
    return out;
  } catch (...) {
    remove_partial();
    throw;
  }
}

}  // namespace gendir
