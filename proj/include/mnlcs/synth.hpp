#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mnlcs/model.hpp"
#include "mnlcs/random.hpp"

namespace mnlcs {

// Capability trajectories for a group over the scenario's years. Each
// (journal, group) pair follows its own independent trajectory.
namespace capability {
// mu never changes.
struct Static {};
// mu takes a Gaussian step of sd `step_sd` every year.
struct RandomWalk {
  double step_sd = 0.1;
};
// mu moves by `slope` per year from the first year.
struct LinearDrift {
  double slope = -0.02;
};
// mu is redrawn every year from Normal(base mu, prior_sd^2).
struct IndependentResample {
  double prior_sd = 0.2;
};
}  // namespace capability

using CapabilityMode = std::variant<capability::Static, capability::RandomWalk,
                                    capability::LinearDrift, capability::IndependentResample>;

struct GroupSpec {
  std::string country;
  double share = 0.1;  // fraction of each cohort authored by this group
  double mu = 1.0;
  double sigma = 1.0;
};

struct ScenarioSpec {
  std::size_t n_journals = 36;
  YearRange years{1996, 2014};
  std::size_t field_size_per_year = 1000;
  // Articles not assigned to any group: drawn from this baseline, no country.
  double field_mu = 1.0;
  double field_sigma = 1.0;
  std::vector<GroupSpec> groups;
  CapabilityMode capability = capability::Static{};
  // Fraction of each group's articles that also carry a second country label
  // (another group's country, or "ZZ" when there is only one group).
  double collaboration_fraction = 0.0;
  std::uint64_t rng_seed = 1;

  // Throws InvalidConfig when the invariants do not hold.
  void validate() const;
};

// Maps a latent log-impact y to a count: c = max(0, round(e^y) - 1), so that
// ln(1 + c) is approximately y. y is capped at 40 to stay inside int64.
std::int64_t discretise_log_impact(double y) noexcept;

std::vector<std::int64_t> sample_citations(double mu, double sigma, std::size_t n, Rng& rng);

std::string journal_name(const ScenarioSpec& spec, std::size_t journal_index);

// mu of `group_index` in journal `journal_index` for every scenario year.
std::vector<double> capability_trajectory(const ScenarioSpec& spec, std::size_t group_index,
                                          std::size_t journal_index);

// One cohort per (journal, year), ordered by journal then year. Deterministic
// in the spec; generation of separate cohorts uses separate RNG streams.
std::vector<Cohort> generate(const ScenarioSpec& spec, std::size_t threads = 1);

}  // namespace mnlcs
