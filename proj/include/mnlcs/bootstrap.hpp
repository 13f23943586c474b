#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mnlcs/fieller.hpp"
#include "mnlcs/model.hpp"
#include "mnlcs/random.hpp"

namespace mnlcs {

// Records of `cohort` in canonical order; the split and the lag-0 estimate
// both start from this order so that input order never matters.
std::vector<CitationRecord> canonical_records(const Cohort& cohort);

// Stream used for replicate `replicate` of the split of (journal, year).
Rng split_stream(std::uint64_t seed, const Cohort& cohort, std::uint64_t replicate);

// Random permutation of [0, n); the first n/2 entries (rounded down) form the
// first half.
std::vector<std::size_t> split_permutation(std::size_t n, Rng& rng);

// Disjoint random halves of sizes floor(n/2) and ceil(n/2). Country subsets
// follow their records. Throws InsufficientData for cohorts of fewer than two
// records.
std::pair<Cohort, Cohort> split_half(const Cohort& cohort, std::uint64_t seed,
                                     std::uint64_t replicate = 0);

struct Lag0Options {
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  FiellerOptions fieller;
  std::size_t threads = 1;
};

struct GroupKey {
  std::string country;
  CountingScheme scheme = CountingScheme::Inclusive;
};

struct Lag0Result {
  GroupKey group;
  std::size_t inside = 0;
  std::size_t valid = 0;
  // First-half interval could not be formed (group below minimum size, or an
  // all-zero field).
  std::size_t excluded_insufficient = 0;
  // First-half interval unbounded (h >= 1).
  std::size_t excluded_unbounded = 0;
  // Second half had no group articles or an all-zero field.
  std::size_t excluded_missing_second = 0;

  std::size_t excluded() const noexcept {
    return excluded_insufficient + excluded_unbounded + excluded_missing_second;
  }
  double fraction() const noexcept {
    return valid ? static_cast<double>(inside) / static_cast<double>(valid) : 0.0;
  }
};

// Fraction of split-half replicates in which the second half's MNLCS lies in
// the first half's interval. Throws NoValidReplicates if every replicate was
// excluded.
Lag0Result lag0_coverage(const Cohort& cohort, std::string_view country, CountingScheme scheme,
                         const Lag0Options& options);

// Same computation for several groups sharing each replicate's split. Results
// are identical to calling lag0_coverage per group; never throws
// NoValidReplicates (check `valid`).
std::vector<Lag0Result> lag0_coverage_many(const Cohort& cohort, std::span<const GroupKey> groups,
                                           const Lag0Options& options);

struct CoverageSimSpec {
  double mu0 = 0.0;
  double sigma0 = 1.0;
  std::size_t n_first = 100;
  std::size_t n_second = 100;
  std::size_t replicates = 10000;
  std::uint64_t rng_seed = 1;
  double alpha = 0.025;

  void validate() const;
};

// Monte Carlo probability that the mean of a second Normal(mu0, sigma0^2)
// sample lies in the t-based 95% interval for the mean built from a first
// sample.
double coverage_probability_sim(const CoverageSimSpec& spec, std::size_t threads = 1);

}  // namespace mnlcs
