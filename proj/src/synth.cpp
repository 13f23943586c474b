#include "mnlcs/synth.hpp"

#include <cmath>
#include <cstdio>
#include <type_traits>

#include "mnlcs/error.hpp"
#include "mnlcs/parallel.hpp"

namespace mnlcs {

namespace {

const std::uint64_t kCapabilityTag = fnv1a64("capability");
const std::uint64_t kCohortTag = fnv1a64("cohort");

}  // namespace

void ScenarioSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (n_journals == 0) fail("scenario needs at least one journal");
  if (years.last < years.first) fail("scenario year range is empty");
  if (field_size_per_year == 0) fail("field_size_per_year must be positive");
  if (!(field_sigma > 0.0)) fail("field_sigma must be positive");
  if (!(collaboration_fraction >= 0.0 && collaboration_fraction <= 1.0)) {
    fail("collaboration_fraction must lie in [0, 1]");
  }
  double total = 0.0;
  for (const auto& g : groups) {
    if (!(g.share > 0.0 && g.share <= 1.0)) fail("group share must lie in (0, 1]: " + g.country);
    if (!(g.sigma > 0.0)) fail("group sigma must be positive: " + g.country);
    if (parse_countries(g.country) != std::vector<std::string>{g.country}) {
      fail("group country must be one upper-case alpha-2 code: " + g.country);
    }
    total += g.share;
  }
  if (total > 1.0 + 1e-12) fail("group shares sum to more than 1");
  std::visit(
      [&](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, capability::RandomWalk>) {
          if (!(mode.step_sd >= 0.0)) fail("random walk step_sd must be non-negative");
        } else if constexpr (std::is_same_v<T, capability::IndependentResample>) {
          if (!(mode.prior_sd >= 0.0)) fail("resample prior_sd must be non-negative");
        }
      },
      capability);
}

std::int64_t discretise_log_impact(double y) noexcept {
  const double capped = std::min(y, 40.0);
  const auto rounded = std::llround(std::exp(capped));
  return std::max<std::int64_t>(0, rounded - 1);
}

std::vector<std::int64_t> sample_citations(double mu, double sigma, std::size_t n, Rng& rng) {
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(discretise_log_impact(rng.normal(mu, sigma)));
  return out;
}

std::string journal_name(const ScenarioSpec& spec, std::size_t journal_index) {
  const int width = static_cast<int>(std::to_string(spec.n_journals).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "J%0*zu", width, journal_index + 1);
  return buf;
}

std::vector<double> capability_trajectory(const ScenarioSpec& spec, std::size_t group_index,
                                          std::size_t journal_index) {
  const auto& g = spec.groups.at(group_index);
  const auto n_years = static_cast<std::size_t>(spec.years.count());
  Rng rng(derive_stream(spec.rng_seed, {kCapabilityTag, journal_index, group_index}));

  std::vector<double> mu(n_years, g.mu);
  std::visit(
      [&](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, capability::RandomWalk>) {
          for (std::size_t y = 1; y < n_years; ++y) mu[y] = mu[y - 1] + rng.normal(0.0, mode.step_sd);
        } else if constexpr (std::is_same_v<T, capability::LinearDrift>) {
          for (std::size_t y = 0; y < n_years; ++y) mu[y] = g.mu + mode.slope * static_cast<double>(y);
        } else if constexpr (std::is_same_v<T, capability::IndependentResample>) {
          for (auto& m : mu) m = rng.normal(g.mu, mode.prior_sd);
        }
      },
      spec.capability);
  return mu;
}

std::vector<Cohort> generate(const ScenarioSpec& spec, std::size_t threads) {
  spec.validate();
  const auto n_years = static_cast<std::size_t>(spec.years.count());
  const auto n_groups = spec.groups.size();

  // trajectories[journal][group][year]
  std::vector<std::vector<std::vector<double>>> trajectories(spec.n_journals);
  for (std::size_t j = 0; j < spec.n_journals; ++j) {
    for (std::size_t g = 0; g < n_groups; ++g) {
      trajectories[j].push_back(capability_trajectory(spec, g, j));
    }
  }

  std::vector<std::size_t> group_sizes;
  std::size_t assigned = 0;
  for (const auto& g : spec.groups) {
    group_sizes.push_back(static_cast<std::size_t>(
        std::llround(g.share * static_cast<double>(spec.field_size_per_year))));
    assigned += group_sizes.back();
  }
  const std::size_t remainder =
      assigned >= spec.field_size_per_year ? 0 : spec.field_size_per_year - assigned;

  std::vector<std::optional<Cohort>> slots(spec.n_journals * n_years);
  parallel_for(slots.size(), threads, [&](std::size_t slot) {
    const std::size_t j = slot / n_years;
    const std::size_t y = slot % n_years;
    const int year = spec.years.first + static_cast<int>(y);
    const auto journal = journal_name(spec, j);
    Rng rng(derive_stream(spec.rng_seed, {kCohortTag, j, static_cast<std::uint64_t>(year)}));

    std::vector<CitationRecord> records;
    records.reserve(assigned + remainder);
    for (std::size_t g = 0; g < n_groups; ++g) {
      const auto& group = spec.groups[g];
      for (auto c : sample_citations(trajectories[j][g][y], group.sigma, group_sizes[g], rng)) {
        CitationRecord rec{journal, year, c, {group.country}};
        if (spec.collaboration_fraction > 0.0 && rng.uniform() < spec.collaboration_fraction) {
          std::string partner = "ZZ";
          if (n_groups > 1) {
            auto other = static_cast<std::size_t>(rng.below(n_groups - 1));
            if (other >= g) ++other;
            partner = spec.groups[other].country;
          }
          rec.countries = parse_countries(group.country + ";" + partner);
        }
        records.push_back(std::move(rec));
      }
    }
    for (auto c : sample_citations(spec.field_mu, spec.field_sigma, remainder, rng)) {
      records.push_back(CitationRecord{journal, year, c, {}});
    }
    slots[slot].emplace(journal, year, std::move(records));
  });

  std::vector<Cohort> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace mnlcs
