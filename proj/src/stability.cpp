#include "mnlcs/stability.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mnlcs/counting.hpp"
#include "mnlcs/error.hpp"
#include "mnlcs/indicator.hpp"
#include "mnlcs/parallel.hpp"

namespace mnlcs {

namespace {

CellResult cell_from_field(const Cohort& cohort, const LogStats& field, const std::string& country,
                           CountingScheme scheme, const FiellerOptions& options) {
  const auto group_counts = group_citations(cohort, select_group(cohort, country, scheme));
  const LogStats group = group_counts.empty() ? LogStats{} : log_stats(group_counts);
  return {cohort.journal_id(), cohort.year(), country, scheme, estimate_mnlcs(group, field, options)};
}

}  // namespace

CellResult compute_cell(const Cohort& cohort, const std::string& country, CountingScheme scheme,
                        const FiellerOptions& options) {
  return cell_from_field(cohort, log_stats(cohort.citations()), country, scheme, options);
}

std::vector<CellResult> compute_cells(std::span<const Cohort> cohorts,
                                      std::span<const std::string> countries,
                                      std::span<const CountingScheme> schemes,
                                      const FiellerOptions& options, std::size_t threads) {
  const std::size_t per_cohort = countries.size() * schemes.size();
  std::vector<CellResult> out(cohorts.size() * per_cohort);
  parallel_for(cohorts.size(), threads, [&](std::size_t ci) {
    const auto& cohort = cohorts[ci];
    const auto field = log_stats(cohort.citations());
    for (std::size_t k = 0; k < per_cohort; ++k) {
      const auto& country = countries[k / schemes.size()];
      const auto scheme = schemes[k % schemes.size()];
      try {
        out[ci * per_cohort + k] = cell_from_field(cohort, field, country, scheme, options);
      } catch (const Error& e) {
        throw e.with_context(cohort.journal_id() + "/" + std::to_string(cohort.year()) + "/" +
                             country + "/" + std::string(to_string(scheme)));
      }
    }
  });
  return out;
}

std::vector<std::pair<int, int>> enumerate_pairs(const YearRange& years, int offset) {
  if (offset < 1) throw Error(ErrorCode::DomainError, "pair offset must be at least 1");
  std::vector<std::pair<int, int>> out;
  for (int base = years.first; base + offset <= years.last; ++base) out.emplace_back(base, base + offset);
  return out;
}

std::vector<Lag0Cell> compute_lag0(std::span<const Cohort> cohorts, std::span<const GroupKey> groups,
                                   const Lag0Options& options, std::size_t threads) {
  std::vector<std::vector<Lag0Result>> per_cohort(cohorts.size());
  auto inner = options;
  inner.threads = 1;
  parallel_for(cohorts.size(), threads, [&](std::size_t i) {
    if (cohorts[i].size() < 2) {
      for (const auto& g : groups) per_cohort[i].push_back(Lag0Result{g});
      return;
    }
    per_cohort[i] = lag0_coverage_many(cohorts[i], groups, inner);
  });

  std::vector<Lag0Cell> out;
  out.reserve(cohorts.size() * groups.size());
  for (std::size_t i = 0; i < cohorts.size(); ++i) {
    for (auto& r : per_cohort[i]) out.push_back({cohorts[i].journal_id(), cohorts[i].year(), std::move(r)});
  }
  return out;
}

std::optional<Lag0Summary> summarize_lag0(std::span<const Lag0Cell> cells, const GroupKey& group) {
  CompensatedSum total;
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (c.result.group.country != group.country || c.result.group.scheme != group.scheme) continue;
    if (c.result.valid == 0) continue;
    total.add(c.result.fraction());
    ++n;
  }
  if (n == 0) return std::nullopt;
  return Lag0Summary{total.value() / static_cast<double>(n), n};
}

CoverageCurve coverage_curve(std::span<const CellResult> cells, int max_offset,
                             std::optional<Lag0Summary> lag0) {
  CoverageCurve curve;
  if (cells.empty()) return curve;
  curve.country = cells.front().country;
  curve.scheme = cells.front().scheme;

  // journal -> year -> cell
  std::map<std::string, std::map<int, const CellResult*>> by_journal;
  int first_year = cells.front().year;
  int last_year = cells.front().year;
  for (const auto& c : cells) {
    if (c.country != curve.country || c.scheme != curve.scheme) {
      throw Error(ErrorCode::DomainError, "coverage_curve expects cells of a single country and scheme");
    }
    if (!by_journal[c.journal_id].emplace(c.year, &c).second) {
      throw Error(ErrorCode::DomainError, "duplicate cell",
                  c.journal_id + "/" + std::to_string(c.year));
    }
    first_year = std::min(first_year, c.year);
    last_year = std::max(last_year, c.year);
  }

  if (lag0 && lag0->n_cells > 0) {
    CurvePoint p;
    p.offset = 0;
    p.inside_fraction = lag0->mean_fraction;
    p.n_comparisons = lag0->n_cells;
    p.simulated = true;
    curve.points.push_back(p);
  }

  const YearRange years{first_year, last_year};
  for (int k = 1; k <= max_offset; ++k) {
    const auto pairs = enumerate_pairs(years, k);
    if (pairs.empty()) break;
    CurvePoint p;
    p.offset = k;
    std::size_t inside = 0;
    for (const auto& [journal, by_year] : by_journal) {
      for (const auto& [base_year, later_year] : pairs) {
        const auto base_it = by_year.find(base_year);
        const auto later_it = by_year.find(later_year);
        if (base_it == by_year.end() || later_it == by_year.end()) continue;
        const auto& base = base_it->second->estimate;
        const auto& later = later_it->second->estimate;
        if (base.valid == Validity::UnboundedFieller) {
          ++p.excluded_base_unbounded;
        } else if (!base.ok()) {
          ++p.excluded_base_insufficient;
        } else if (!later.has_value()) {
          ++p.excluded_later_missing;
        } else {
          ++p.n_comparisons;
          if (base.contains(later.value)) ++inside;
        }
      }
    }
    if (p.n_comparisons == 0) continue;
    p.inside_fraction = static_cast<double>(inside) / static_cast<double>(p.n_comparisons);
    curve.points.push_back(p);
  }
  return curve;
}

std::vector<SeriesPoint> series_report(std::span<const CellResult> cells) {
  std::map<int, const CellResult*> by_year;
  bool any_value = false;
  for (const auto& c : cells) {
    if (!cells.empty() && (c.journal_id != cells.front().journal_id ||
                           c.country != cells.front().country || c.scheme != cells.front().scheme)) {
      throw Error(ErrorCode::DomainError, "series_report expects one journal, country and scheme");
    }
    by_year[c.year] = &c;
    any_value = any_value || c.estimate.has_value();
  }
  if (!any_value) throw Error(ErrorCode::InsufficientData, "series has no usable value");

  std::vector<SeriesPoint> out;
  for (int year = by_year.begin()->first; year <= by_year.rbegin()->first; ++year) {
    SeriesPoint p;
    p.year = year;
    if (auto it = by_year.find(year); it != by_year.end()) {
      const auto& est = it->second->estimate;
      p.status = est.valid;
      p.value = est.value;
      if (est.ok()) {
        p.ci_low = est.ci_low;
        p.ci_high = est.ci_high;
      }
      p.gap = !est.has_value();
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace mnlcs
