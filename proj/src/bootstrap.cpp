#include "mnlcs/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mnlcs/counting.hpp"
#include "mnlcs/error.hpp"
#include "mnlcs/indicator.hpp"
#include "mnlcs/parallel.hpp"

namespace mnlcs {

namespace {

const std::uint64_t kSplitTag = fnv1a64("split-half");
const std::uint64_t kCoverageSimTag = fnv1a64("coverage-sim");

std::string cell_name(const Cohort& cohort) {
  return cohort.journal_id() + "/" + std::to_string(cohort.year());
}

struct ReplicateCounts {
  std::size_t inside = 0;
  std::size_t valid = 0;
  std::size_t insufficient = 0;
  std::size_t unbounded = 0;
  std::size_t missing_second = 0;
};

}  // namespace

std::vector<CitationRecord> canonical_records(const Cohort& cohort) {
  auto records = cohort.records();
  std::stable_sort(records.begin(), records.end(), canonical_less);
  return records;
}

Rng split_stream(std::uint64_t seed, const Cohort& cohort, std::uint64_t replicate) {
  return Rng(derive_stream(seed, {kSplitTag, fnv1a64(cohort.journal_id()),
                                  static_cast<std::uint64_t>(cohort.year()), replicate}));
}

std::vector<std::size_t> split_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(perm), rng);
  return perm;
}

std::pair<Cohort, Cohort> split_half(const Cohort& cohort, std::uint64_t seed,
                                     std::uint64_t replicate) {
  if (cohort.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "split_half needs at least two records",
                cell_name(cohort));
  }
  const auto records = canonical_records(cohort);
  auto rng = split_stream(seed, cohort, replicate);
  const auto perm = split_permutation(records.size(), rng);
  const std::size_t half = records.size() / 2;

  std::vector<CitationRecord> first, second;
  first.reserve(half);
  second.reserve(records.size() - half);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    (i < half ? first : second).push_back(records[perm[i]]);
  }
  return {Cohort(cohort.journal_id(), cohort.year(), std::move(first)),
          Cohort(cohort.journal_id(), cohort.year(), std::move(second))};
}

std::vector<Lag0Result> lag0_coverage_many(const Cohort& cohort, std::span<const GroupKey> groups,
                                           const Lag0Options& options) {
  if (cohort.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "lag-0 split needs at least two records",
                cell_name(cohort));
  }
  const auto records = canonical_records(cohort);
  const std::size_t n = records.size();
  const std::size_t half = n / 2;

  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = log_citation(records[i].citations);

  std::vector<std::vector<char>> member(groups.size(), std::vector<char>(n, 0));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i = 0; i < n; ++i) {
      member[g][i] = is_member(records[i], groups[g].country, groups[g].scheme);
    }
  }

  // counts[replicate][group], reduced in replicate order afterwards.
  std::vector<std::vector<ReplicateCounts>> counts(options.replicates,
                                                   std::vector<ReplicateCounts>(groups.size()));
  parallel_for(options.replicates, options.threads, [&](std::size_t rep) {
    auto rng = split_stream(options.seed, cohort, rep);
    const auto perm = split_permutation(n, rng);

    std::vector<double> field_a, field_b, group_a, group_b;
    field_a.reserve(half);
    field_b.reserve(n - half);
    for (std::size_t i = 0; i < n; ++i) (i < half ? field_a : field_b).push_back(logs[perm[i]]);
    const auto field_a_stats = log_stats_of_logs(field_a);
    const auto field_b_stats = log_stats_of_logs(field_b);

    for (std::size_t g = 0; g < groups.size(); ++g) {
      group_a.clear();
      group_b.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (member[g][perm[i]]) (i < half ? group_a : group_b).push_back(logs[perm[i]]);
      }
      auto& c = counts[rep][g];

      const LogStats ga = group_a.empty() ? LogStats{} : log_stats_of_logs(group_a);
      const auto first = estimate_mnlcs(ga, field_a_stats, options.fieller);
      if (first.valid == Validity::UnboundedFieller) {
        ++c.unbounded;
        continue;
      }
      if (!first.ok()) {
        ++c.insufficient;
        continue;
      }
      if (group_b.empty() || !(field_b_stats.mean > 0.0)) {
        ++c.missing_second;
        continue;
      }
      const double second = mnlcs(log_stats_of_logs(group_b), field_b_stats);
      ++c.valid;
      if (first.contains(second)) ++c.inside;
    }
  });

  std::vector<Lag0Result> out;
  out.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Lag0Result r{groups[g]};
    for (const auto& rep : counts) {
      r.inside += rep[g].inside;
      r.valid += rep[g].valid;
      r.excluded_insufficient += rep[g].insufficient;
      r.excluded_unbounded += rep[g].unbounded;
      r.excluded_missing_second += rep[g].missing_second;
    }
    out.push_back(std::move(r));
  }
  return out;
}

Lag0Result lag0_coverage(const Cohort& cohort, std::string_view country, CountingScheme scheme,
                         const Lag0Options& options) {
  const GroupKey key{std::string(country), scheme};
  auto result = lag0_coverage_many(cohort, std::span<const GroupKey>(&key, 1), options).front();
  if (result.valid == 0) {
    throw Error(ErrorCode::NoValidReplicates,
                "no split-half replicate produced a usable comparison",
                cell_name(cohort) + "/" + key.country + "/" + std::string(to_string(scheme)));
  }
  return result;
}

void CoverageSimSpec::validate() const {
  if (!(sigma0 > 0.0)) throw Error(ErrorCode::DomainError, "sigma0 must be positive");
  if (n_first < 2) throw Error(ErrorCode::DomainError, "n_first must be at least 2");
  if (n_second < 1) throw Error(ErrorCode::DomainError, "n_second must be at least 1");
  if (replicates < 100) throw Error(ErrorCode::DomainError, "replicates must be at least 100");
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 0.5)");
}

double coverage_probability_sim(const CoverageSimSpec& spec, std::size_t threads) {
  spec.validate();
  const double t = t_quantile({static_cast<double>(spec.n_first - 1), spec.alpha});
  const double sqrt_n = std::sqrt(static_cast<double>(spec.n_first));

  std::vector<char> inside(spec.replicates, 0);
  parallel_for(spec.replicates, threads, [&](std::size_t rep) {
    Rng rng(derive_stream(spec.rng_seed, {kCoverageSimTag, rep}));
    // Welford accumulation for the first sample.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < spec.n_first; ++i) {
      const double x = rng.normal(spec.mu0, spec.sigma0);
      const double delta = x - mean;
      mean += delta / static_cast<double>(i + 1);
      m2 += delta * (x - mean);
    }
    const double sd = std::sqrt(m2 / static_cast<double>(spec.n_first - 1));
    const double half_width = t * sd / sqrt_n;

    CompensatedSum second;
    for (std::size_t i = 0; i < spec.n_second; ++i) second.add(rng.normal(spec.mu0, spec.sigma0));
    const double second_mean = second.value() / static_cast<double>(spec.n_second);
    inside[rep] = std::abs(second_mean - mean) <= half_width;
  });

  const auto hits = std::count(inside.begin(), inside.end(), char{1});
  return static_cast<double>(hits) / static_cast<double>(spec.replicates);
}

}  // namespace mnlcs
