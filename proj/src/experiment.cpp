#include "mnlcs/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "mnlcs/counting.hpp"
#include "mnlcs/csv_io.hpp"
#include "mnlcs/error.hpp"
#include "mnlcs/parallel.hpp"
#include "mnlcs/random.hpp"

namespace mnlcs {

using nlohmann::json;

namespace {

const std::uint64_t kLag0SeedTag = fnv1a64("lag0");

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) config_error(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      config_error(fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

YearRange parse_years(const json& j) {
  if (!j.is_array() || j.size() != 2) config_error("years must be [first, last]");
  YearRange r{j[0].get<int>(), j[1].get<int>()};
  if (r.last < r.first) config_error("years range is empty");
  return r;
}

std::string hex64(std::uint64_t h) { return fmt::format("{:016x}", h); }

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return hex64(fnv1a64(buf.str()));
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file", path.string());
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed", path.string());
}

}  // namespace

std::size_t ExperimentConfig::thread_count() const {
  return threads == 0 ? default_thread_count() : threads;
}

Lag0Options ExperimentConfig::lag0_options() const {
  Lag0Options opts;
  opts.replicates = bootstrap_replicates;
  opts.seed = derive_stream(seed, {kLag0SeedTag});
  opts.fieller = fieller_options();
  return opts;
}

ScenarioSpec scenario_from_json(const json& j, std::uint64_t default_seed) {
  check_keys(j,
             {"n_journals", "years", "field_size_per_year", "field_mu", "field_sigma", "groups",
              "capability", "collaboration_fraction", "seed"},
             "scenario");
  ScenarioSpec s;
  s.n_journals = get_or<std::size_t>(j, "n_journals", s.n_journals);
  if (j.contains("years")) s.years = parse_years(j["years"]);
  s.field_size_per_year = get_or<std::size_t>(j, "field_size_per_year", s.field_size_per_year);
  s.field_mu = get_or<double>(j, "field_mu", s.field_mu);
  s.field_sigma = get_or<double>(j, "field_sigma", s.field_sigma);
  s.collaboration_fraction = get_or<double>(j, "collaboration_fraction", s.collaboration_fraction);
  s.rng_seed = get_or<std::uint64_t>(j, "seed", default_seed);

  if (j.contains("groups")) {
    for (const auto& g : j["groups"]) {
      check_keys(g, {"country", "share", "mu", "sigma"}, "scenario group");
      GroupSpec gs;
      gs.country = get_or<std::string>(g, "country", "");
      gs.share = get_or<double>(g, "share", gs.share);
      gs.mu = get_or<double>(g, "mu", gs.mu);
      gs.sigma = get_or<double>(g, "sigma", gs.sigma);
      s.groups.push_back(std::move(gs));
    }
  }

  if (j.contains("capability")) {
    const auto& c = j["capability"];
    check_keys(c, {"mode", "step_sd", "slope", "prior_sd"}, "capability");
    const auto mode = get_or<std::string>(c, "mode", "static");
    if (mode == "static") {
      s.capability = capability::Static{};
    } else if (mode == "random_walk") {
      s.capability = capability::RandomWalk{get_or<double>(c, "step_sd", 0.1)};
    } else if (mode == "linear_drift") {
      s.capability = capability::LinearDrift{get_or<double>(c, "slope", -0.02)};
    } else if (mode == "independent_resample") {
      s.capability = capability::IndependentResample{get_or<double>(c, "prior_sd", 0.2)};
    } else {
      config_error("unknown capability mode '" + mode + "'");
    }
  }
  s.validate();
  return s;
}

json scenario_to_json(const ScenarioSpec& s) {
  json groups = json::array();
  for (const auto& g : s.groups) {
    groups.push_back({{"country", g.country}, {"share", g.share}, {"mu", g.mu}, {"sigma", g.sigma}});
  }
  json cap = std::visit(
      [](const auto& mode) -> json {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, capability::RandomWalk>) {
          return {{"mode", "random_walk"}, {"step_sd", mode.step_sd}};
        } else if constexpr (std::is_same_v<T, capability::LinearDrift>) {
          return {{"mode", "linear_drift"}, {"slope", mode.slope}};
        } else if constexpr (std::is_same_v<T, capability::IndependentResample>) {
          return {{"mode", "independent_resample"}, {"prior_sd", mode.prior_sd}};
        } else {
          return {{"mode", "static"}};
        }
      },
      s.capability);
  return {{"n_journals", s.n_journals},
          {"years", {s.years.first, s.years.last}},
          {"field_size_per_year", s.field_size_per_year},
          {"field_mu", s.field_mu},
          {"field_sigma", s.field_sigma},
          {"groups", groups},
          {"capability", cap},
          {"collaboration_fraction", s.collaboration_fraction},
          {"seed", s.rng_seed}};
}

ExperimentConfig config_from_json(const json& root, const std::filesystem::path& base_dir) {
  const json& j = root.contains("config") && root.contains("config_hash") ? root["config"] : root;
  check_keys(j,
             {"input", "journals", "years", "max_bad_rows", "countries", "top_k", "schemes",
              "max_offset", "alpha", "min_group_n", "fieller_form", "bootstrap_replicates", "seed",
              "threads"},
             "config");

  ExperimentConfig c;
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);

  if (!j.contains("input")) config_error("config needs an 'input' with 'csv' or 'scenario'");
  const auto& input = j["input"];
  check_keys(input, {"csv", "scenario"}, "input");
  if (input.contains("csv") == input.contains("scenario")) {
    config_error("input must have exactly one of 'csv' or 'scenario'");
  }
  if (input.contains("csv")) {
    std::filesystem::path p = input["csv"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.input_csv = p;
  } else {
    c.scenario = scenario_from_json(input["scenario"], c.seed);
  }

  c.journals = get_or<std::vector<std::string>>(j, "journals", {});
  if (j.contains("years")) c.years = parse_years(j["years"]);
  c.max_bad_rows = get_or<std::size_t>(j, "max_bad_rows", c.max_bad_rows);
  if (j.contains("countries")) {
    for (const auto& code : j["countries"].get<std::vector<std::string>>()) {
      auto parsed = parse_countries(code);
      if (parsed.size() != 1) config_error("bad country code '" + code + "'");
      c.countries.push_back(parsed.front());
    }
  }
  c.top_k = get_or<std::size_t>(j, "top_k", c.top_k);
  if (c.top_k == 0) config_error("top_k must be at least 1");
  if (j.contains("schemes")) {
    c.schemes.clear();
    for (const auto& s : j["schemes"].get<std::vector<std::string>>()) {
      auto scheme = parse_scheme(s);
      if (!scheme) config_error("unknown scheme '" + s + "'");
      c.schemes.push_back(*scheme);
    }
    if (c.schemes.empty()) config_error("schemes must not be empty");
  }
  c.max_offset = get_or<int>(j, "max_offset", c.max_offset);
  if (c.max_offset < 1) config_error("max_offset must be at least 1");
  c.alpha = get_or<double>(j, "alpha", c.alpha);
  if (!(c.alpha > 0.0 && c.alpha < 0.5)) config_error("alpha must lie in (0, 0.5)");
  c.min_group_n = get_or<std::size_t>(j, "min_group_n", c.min_group_n);
  if (c.min_group_n < 2) config_error("min_group_n must be at least 2");
  const auto form = parse_fieller_form(get_or<std::string>(j, "fieller_form", "standard"));
  if (!form) config_error("fieller_form must be 'standard' or 'printed'");
  c.fieller_form = *form;
  c.bootstrap_replicates = get_or<std::size_t>(j, "bootstrap_replicates", c.bootstrap_replicates);
  c.threads = get_or<std::size_t>(j, "threads", c.threads);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file", path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what(),
                path.string());
  }
  return config_from_json(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
  json input;
  if (c.input_csv) {
    input["csv"] = std::filesystem::absolute(*c.input_csv).lexically_normal().string();
  } else if (c.scenario) {
    input["scenario"] = scenario_to_json(*c.scenario);
  }
  json schemes = json::array();
  for (auto s : c.schemes) schemes.push_back(std::string(to_string(s)));
  json j = {{"input", input},
            {"journals", c.journals},
            {"max_bad_rows", c.max_bad_rows},
            {"countries", c.countries},
            {"top_k", c.top_k},
            {"schemes", schemes},
            {"max_offset", c.max_offset},
            {"alpha", c.alpha},
            {"min_group_n", c.min_group_n},
            {"fieller_form", std::string(to_string(c.fieller_form))},
            {"bootstrap_replicates", c.bootstrap_replicates},
            {"seed", c.seed}};
  if (c.years) j["years"] = {c.years->first, c.years->last};
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  return hex64(fnv1a64(config_to_json(config).dump()));
}

LoadedData load_cohorts(const ExperimentConfig& config) {
  LoadedData data;
  if (config.input_csv) {
    IngestOptions opts{config.journals, config.years, config.max_bad_rows};
    auto result = ingest(*config.input_csv, opts);
    data.cohorts = std::move(result.cohorts);
    data.row_errors = std::move(result.row_errors);
    return data;
  }
  if (!config.scenario) throw Error(ErrorCode::InvalidConfig, "no input source configured");
  auto cohorts = generate(*config.scenario, config.thread_count());
  const std::set<std::string> wanted(config.journals.begin(), config.journals.end());
  for (auto& c : cohorts) {
    if (!wanted.empty() && !wanted.count(c.journal_id())) continue;
    if (config.years && !config.years->contains(c.year())) continue;
    data.cohorts.push_back(std::move(c));
  }
  return data;
}

std::vector<std::string> resolve_countries(const ExperimentConfig& config,
                                           std::span<const Cohort> cohorts) {
  if (!config.countries.empty()) return config.countries;
  return top_countries(cohorts, config.top_k).codes();
}

ExperimentResults run_analysis(const ExperimentConfig& config, std::span<const Cohort> cohorts) {
  ExperimentResults r;
  const auto threads = config.thread_count();
  r.countries = resolve_countries(config, cohorts);
  r.cells = compute_cells(cohorts, r.countries, config.schemes, config.fieller_options(), threads);

  std::vector<GroupKey> groups;
  for (const auto& country : r.countries) {
    for (auto scheme : config.schemes) groups.push_back({country, scheme});
  }
  if (config.bootstrap_replicates > 0) {
    r.lag0 = compute_lag0(cohorts, groups, config.lag0_options(), threads);
  }

  for (const auto& g : groups) {
    std::vector<CellResult> subset;
    for (const auto& c : r.cells) {
      if (c.country == g.country && c.scheme == g.scheme) subset.push_back(c);
    }
    auto curve = coverage_curve(subset, config.max_offset, summarize_lag0(r.lag0, g));
    curve.country = g.country;
    curve.scheme = g.scheme;
    r.curves.push_back(std::move(curve));
  }
  return r;
}

std::vector<std::string> run_experiment(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir,
                                        bool write_manifest) {
  const auto data = load_cohorts(config);
  const auto results = run_analysis(config, data.cohorts);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory: " + ec.message(), out_dir.string());

  std::vector<SeriesRow> series;
  {
    // journal -> (country, scheme) -> cells, keeping cell order.
    std::map<std::tuple<std::string, std::string, CountingScheme>, std::vector<CellResult>> grouped;
    for (const auto& c : results.cells) grouped[{c.journal_id, c.country, c.scheme}].push_back(c);
    for (const auto& [key, cells] : grouped) {
      if (std::none_of(cells.begin(), cells.end(),
                       [](const CellResult& c) { return c.estimate.has_value(); })) {
        continue;
      }
      for (const auto& p : series_report(cells)) {
        series.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), p});
      }
    }
  }

  std::vector<std::string> files;
  auto emit = [&](const std::string& name, auto&& writer) {
    write_file(out_dir / name, writer);
    files.push_back(name);
  };
  emit("cells.csv", [&](std::ostream& o) { write_cells_csv(o, results.cells); });
  emit("lag0.csv", [&](std::ostream& o) { write_lag0_csv(o, results.lag0); });
  emit("curves.csv", [&](std::ostream& o) { write_curves_csv(o, results.curves); });
  emit("fig1_exclusive.csv",
       [&](std::ostream& o) { write_figure_csv(o, results.curves, CountingScheme::Exclusive); });
  emit("fig2_inclusive.csv",
       [&](std::ostream& o) { write_figure_csv(o, results.curves, CountingScheme::Inclusive); });
  emit("series.csv", [&](std::ostream& o) { write_series_csv(o, series); });
  emit("exclusions.csv",
       [&](std::ostream& o) { write_exclusions_csv(o, results.curves, results.lag0); });

  if (!write_manifest) return files;

  json manifest;
  manifest["tool"] = "mnlcs";
  manifest["config"] = config_to_json(config);
  manifest["config_hash"] = config_hash(config);
  manifest["hash_algorithm"] = "fnv1a64";
  manifest["seed"] = config.seed;
  manifest["countries"] = results.countries;
  manifest["cohorts"] = data.cohorts.size();
  manifest["row_errors"] = data.row_errors.size();
  if (config.input_csv) manifest["input_digest"] = file_digest(*config.input_csv);
  json digests = json::object();
  for (const auto& f : files) digests[f] = file_digest(out_dir / f);
  manifest["files"] = digests;
  emit("manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
  return files;
}

}  // namespace mnlcs
