#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "gendir/config.hpp"
#include "gendir/integrator.hpp"
#include "gendir/stats.hpp"

namespace gendir {

/// Process exit codes shared by the CLI subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitComparison = 2,
  kExitIo = 3,
};

/// Header: t,mean_1..mean_N,var_1..var_N,cov_i_j (i < j, lexicographic).
std::string csv_header(std::size_t components);

/// One row per record, every value with 17 significant digits. Missing
/// variances (single-particle ensembles) print as nan.
void write_csv(std::ostream& out, const MomentTimeSeries& ts);

/// %.17g
std::string format_double(double v);

nlohmann::json moments_json(const MomentSet& m);
nlohmann::json record_json(const MomentRecord& rec);
nlohmann::json comparison_json(const ComparisonReport& report);

struct RunOutcome {
  SimulationResult result;
  std::optional<MomentSet> analytic;
  MomentRecord window;
  std::optional<ComparisonReport> comparison;
  nlohmann::json summary;
  int exit_code = kExitOk;
};

/// Runs the configured simulation. When out_dir is given, writes
/// timeseries.csv and summary.json there (removed again if the run aborts).
RunOutcome run_simulate(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir,
                        const StateObserver& observer = {});

}  // namespace gendir
