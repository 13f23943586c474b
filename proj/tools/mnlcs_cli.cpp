// mnlcs: command-line driver for MNLCS indicators, Fieller intervals and the
// year-offset stability experiment.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mnlcs/bootstrap.hpp"
#include "mnlcs/csv_io.hpp"
#include "mnlcs/error.hpp"
#include "mnlcs/experiment.hpp"
#include "mnlcs/parallel.hpp"
#include "mnlcs/synth.hpp"

namespace {

using nlohmann::json;
using namespace mnlcs;

struct CommonFlags {
  std::string config;
  std::string input;
  std::string scenario;
  std::string out;
  std::string scheme;
  std::string fieller_form;
  std::vector<std::string> countries;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> min_group_n;
  std::optional<std::size_t> top_k;
  std::optional<std::size_t> replicates;
  std::optional<int> max_offset;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_out) {
  cmd->add_option("--config", f.config, "Experiment config (JSON) or a run manifest");
  cmd->add_option("--input", f.input, "Input records CSV (journal_id,year,citations,countries)");
  cmd->add_option("--scenario", f.scenario, "Synthetic scenario JSON used as input");
  auto* out = cmd->add_option("--out", f.out, "Output directory");
  if (needs_out) out->required();
  cmd->add_option("--scheme", f.scheme, "inclusive|exclusive|both")
      ->check(CLI::IsMember({"inclusive", "exclusive", "both"}));
  cmd->add_option("--fieller-form", f.fieller_form, "standard|printed")
      ->check(CLI::IsMember({"standard", "printed"}));
  cmd->add_option("--countries", f.countries, "Group countries (ISO alpha-2)")->delimiter(',');
  cmd->add_option("--seed", f.seed, "Master RNG seed");
  cmd->add_option("--min-group-n", f.min_group_n, "Smallest group that gets an interval");
  cmd->add_option("--top-k", f.top_k, "Number of countries when --countries is not given");
  cmd->add_option("--replicates", f.replicates, "Split-half replicates per journal-year");
  cmd->add_option("--max-offset", f.max_offset, "Largest year offset in coverage curves");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
}

ExperimentConfig build_config(const CommonFlags& f) {
  const int sources = !f.config.empty() + !f.input.empty() + !f.scenario.empty();
  if (sources != 1) {
    throw Error(ErrorCode::InvalidConfig, "give exactly one of --config, --input or --scenario");
  }
  ExperimentConfig c;
  if (!f.config.empty()) {
    c = load_config(f.config);
  } else if (!f.input.empty()) {
    c.input_csv = f.input;
  } else {
    std::ifstream in(f.scenario);
    if (!in) throw Error(ErrorCode::Io, "cannot open scenario file", f.scenario);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, std::string("scenario is not valid JSON: ") + e.what(), f.scenario);
    }
    c.scenario = scenario_from_json(j, f.seed.value_or(c.seed));
  }

  if (f.seed) c.seed = *f.seed;
  if (!f.scheme.empty()) {
    if (f.scheme == "both") {
      c.schemes = {CountingScheme::Exclusive, CountingScheme::Inclusive};
    } else {
      c.schemes = {*parse_scheme(f.scheme)};
    }
  }
  if (!f.fieller_form.empty()) c.fieller_form = *parse_fieller_form(f.fieller_form);
  if (!f.countries.empty()) {
    c.countries.clear();
    for (const auto& code : f.countries) {
      auto parsed = parse_countries(code);
      if (parsed.size() != 1) throw Error(ErrorCode::InvalidConfig, "bad country code '" + code + "'");
      c.countries.push_back(parsed.front());
    }
  }
  if (f.min_group_n) {
    if (*f.min_group_n < 2) throw Error(ErrorCode::InvalidConfig, "--min-group-n must be at least 2");
    c.min_group_n = *f.min_group_n;
  }
  if (f.top_k) c.top_k = *f.top_k;
  if (f.replicates) c.bootstrap_replicates = *f.replicates;
  if (f.max_offset) c.max_offset = *f.max_offset;
  if (f.threads) c.threads = *f.threads;
  return c;
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory: " + ec.message(), dir.string());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file", (dir / name).string());
  return out;
}

std::optional<YearRange> parse_year_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) throw std::invalid_argument(text);
    return YearRange{std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "--years expects FIRST-LAST, got '" + text + "'");
  }
}

void report_error(const Error& e) {
  json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (!e.context().empty()) j["context"] = e.context();
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MNLCS indicators, Fieller confidence intervals and temporal stability analysis"};
  app.require_subcommand(1);

  // ingest-check
  auto* ingest_cmd = app.add_subcommand("ingest-check", "Validate an input CSV and summarise it");
  std::string ingest_path, ingest_years;
  std::vector<std::string> ingest_journals;
  std::size_t ingest_tolerance = 0;
  ingest_cmd->add_option("path", ingest_path, "Input records CSV")->required();
  ingest_cmd->add_option("--years", ingest_years, "Keep only FIRST-LAST");
  ingest_cmd->add_option("--journals", ingest_journals, "Keep only these journals")->delimiter(',');
  ingest_cmd->add_option("--max-bad-rows", ingest_tolerance, "Malformed rows tolerated");

  CommonFlags indicator_flags, bootstrap_flags, stability_flags, run_flags;
  auto* indicator_cmd = app.add_subcommand("indicator", "Per journal-year MNLCS with intervals (cells.csv)");
  add_common(indicator_cmd, indicator_flags, true);
  auto* bootstrap_cmd = app.add_subcommand("bootstrap", "Split-half lag-0 coverage (lag0.csv)");
  add_common(bootstrap_cmd, bootstrap_flags, true);
  auto* stability_cmd = app.add_subcommand("stability", "Coverage curves, series and exclusions");
  add_common(stability_cmd, stability_flags, true);
  auto* run_cmd = app.add_subcommand("run", "Full experiment with manifest");
  add_common(run_cmd, run_flags, true);

  // simulate
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Write synthetic records, or estimate a second-sample coverage probability");
  std::string sim_scenario, sim_out;
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::size_t> sim_n_first, sim_n_second;
  std::size_t sim_replicates = 10000;
  double sim_mu0 = 0.0, sim_sigma0 = 1.0;
  simulate_cmd->add_option("--scenario", sim_scenario, "Scenario JSON (or a config with a scenario input)");
  simulate_cmd->add_option("--out", sim_out, "Records CSV to write");
  simulate_cmd->add_option("--seed", sim_seed, "RNG seed");
  simulate_cmd->add_option("--n-first", sim_n_first, "First sample size (coverage mode)");
  simulate_cmd->add_option("--n-second", sim_n_second, "Second sample size (coverage mode)");
  simulate_cmd->add_option("--replicates", sim_replicates, "Monte Carlo replicates (coverage mode)");
  simulate_cmd->add_option("--mu0", sim_mu0, "Normal mean (coverage mode)");
  simulate_cmd->add_option("--sigma0", sim_sigma0, "Normal sd (coverage mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) {
      IngestOptions opts{ingest_journals, parse_year_flag(ingest_years), ingest_tolerance};
      const auto result = ingest(std::filesystem::path(ingest_path), opts);
      std::size_t records = 0;
      for (const auto& c : result.cohorts) records += c.size();
      json errors = json::array();
      for (const auto& e : result.row_errors) {
        errors.push_back({{"line", e.line}, {"error", std::string(to_string(e.code))}, {"message", e.message}});
      }
      std::cout << json{{"rows_read", result.rows_read},
                        {"rows_filtered", result.rows_filtered},
                        {"records", records},
                        {"cohorts", result.cohorts.size()},
                        {"row_errors", errors}}
                       .dump(2)
                << '\n';
    } else if (*indicator_cmd) {
      const auto config = build_config(indicator_flags);
      const auto data = load_cohorts(config);
      const auto countries = resolve_countries(config, data.cohorts);
      const auto cells = compute_cells(data.cohorts, countries, config.schemes,
                                       config.fieller_options(), config.thread_count());
      auto out = open_out(indicator_flags.out, "cells.csv");
      write_cells_csv(out, cells);
    } else if (*bootstrap_cmd) {
      const auto config = build_config(bootstrap_flags);
      const auto data = load_cohorts(config);
      std::vector<GroupKey> groups;
      for (const auto& country : resolve_countries(config, data.cohorts)) {
        for (auto s : config.schemes) groups.push_back({country, s});
      }
      const auto lag0 = compute_lag0(data.cohorts, groups, config.lag0_options(), config.thread_count());
      auto out = open_out(bootstrap_flags.out, "lag0.csv");
      write_lag0_csv(out, lag0);
    } else if (*stability_cmd) {
      run_experiment(build_config(stability_flags), stability_flags.out, false);
    } else if (*run_cmd) {
      run_experiment(build_config(run_flags), run_flags.out, true);
    } else if (*simulate_cmd) {
      if (sim_n_first || sim_n_second) {
        CoverageSimSpec spec;
        spec.mu0 = sim_mu0;
        spec.sigma0 = sim_sigma0;
        spec.n_first = sim_n_first.value_or(spec.n_first);
        spec.n_second = sim_n_second.value_or(spec.n_second);
        spec.replicates = sim_replicates;
        spec.rng_seed = sim_seed.value_or(spec.rng_seed);
        const double p = coverage_probability_sim(spec, default_thread_count());
        std::cout << json{{"n_first", spec.n_first}, {"n_second", spec.n_second},
                          {"replicates", spec.replicates}, {"fraction", p}}
                         .dump()
                  << '\n';
      } else {
        if (sim_scenario.empty() || sim_out.empty()) {
          throw Error(ErrorCode::InvalidConfig,
                      "simulate needs --scenario and --out, or --n-first/--n-second");
        }
        std::ifstream in(sim_scenario);
        if (!in) throw Error(ErrorCode::Io, "cannot open scenario file", sim_scenario);
        json j;
        try {
          in >> j;
        } catch (const json::exception& e) {
          throw Error(ErrorCode::InvalidConfig, std::string("scenario is not valid JSON: ") + e.what(),
                      sim_scenario);
        }
        ScenarioSpec spec;
        if (j.contains("input")) {
          const auto config = config_from_json(j);
          if (!config.scenario) throw Error(ErrorCode::InvalidConfig, "config has no scenario input");
          spec = *config.scenario;
          if (sim_seed) spec.rng_seed = *sim_seed;
        } else {
          spec = scenario_from_json(j, sim_seed.value_or(1));
          if (sim_seed) spec.rng_seed = *sim_seed;
        }
        const auto cohorts = generate(spec, default_thread_count());
        const std::filesystem::path out_path(sim_out);
        if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
        write_records(out_path, cohorts);
      }
    }
  } catch (const Error& e) {
    report_error(e);
    return 2;
  } catch (const std::exception& e) {
    report_error(Error(ErrorCode::Io, e.what()));
    return 2;
  }
  return 0;
}
