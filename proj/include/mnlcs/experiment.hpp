#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mnlcs/bootstrap.hpp"
#include "mnlcs/csv_io.hpp"
#include "mnlcs/fieller.hpp"
#include "mnlcs/model.hpp"
#include "mnlcs/stability.hpp"
#include "mnlcs/synth.hpp"

namespace mnlcs {

// Everything that determines the outputs of a run. `threads` does not: results
// are identical for any thread count, so it is left out of the canonical form.
struct ExperimentConfig {
  // Exactly one of the two input sources is set.
  std::optional<std::filesystem::path> input_csv;
  std::optional<ScenarioSpec> scenario;

  std::vector<std::string> journals;
  std::optional<YearRange> years;
  std::size_t max_bad_rows = 0;

  // Explicit group countries; when empty the top_k countries are used.
  std::vector<std::string> countries;
  std::size_t top_k = 10;
  std::vector<CountingScheme> schemes{CountingScheme::Exclusive, CountingScheme::Inclusive};

  int max_offset = 18;
  double alpha = 0.025;
  std::size_t min_group_n = 5;
  FiellerForm fieller_form = FiellerForm::Standard;
  std::size_t bootstrap_replicates = 1000;
  std::uint64_t seed = 1;

  std::size_t threads = 0;  // 0: hardware concurrency

  FiellerOptions fieller_options() const { return {alpha, fieller_form, min_group_n}; }
  // Split-half settings; the split seed is derived from `seed`.
  Lag0Options lag0_options() const;
  std::size_t thread_count() const;
};

ScenarioSpec scenario_from_json(const nlohmann::json& j, std::uint64_t default_seed);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

// Accepts either a config object or a run manifest (whose "config" member is
// used). Relative input paths resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical JSON with every default filled in; the manifest hash is taken over
// its compact dump.
nlohmann::json config_to_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

struct LoadedData {
  std::vector<Cohort> cohorts;
  std::vector<RowError> row_errors;
};

LoadedData load_cohorts(const ExperimentConfig& config);

// Group countries for the run: the explicit list, else the top_k by inclusive
// article count.
std::vector<std::string> resolve_countries(const ExperimentConfig& config,
                                           std::span<const Cohort> cohorts);

struct ExperimentResults {
  std::vector<std::string> countries;
  std::vector<CellResult> cells;
  std::vector<Lag0Cell> lag0;
  std::vector<CoverageCurve> curves;
};

ExperimentResults run_analysis(const ExperimentConfig& config, std::span<const Cohort> cohorts);

// Runs the whole experiment and writes cells.csv, lag0.csv, curves.csv,
// fig1_exclusive.csv, fig2_inclusive.csv, series.csv, exclusions.csv and
// manifest.json (unless `write_manifest` is false) into `out_dir`. Returns the
// written file names.
std::vector<std::string> run_experiment(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir,
                                        bool write_manifest = true);

}  // namespace mnlcs
