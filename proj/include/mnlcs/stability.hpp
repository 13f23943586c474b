#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mnlcs/bootstrap.hpp"
#include "mnlcs/fieller.hpp"
#include "mnlcs/model.hpp"

namespace mnlcs {

struct CellResult {
  std::string journal_id;
  int year = 0;
  std::string country;
  CountingScheme scheme = CountingScheme::Inclusive;
  MnlcsEstimate estimate;
};

CellResult compute_cell(const Cohort& cohort, const std::string& country, CountingScheme scheme,
                        const FiellerOptions& options);

// One cell per (cohort, country, scheme), in cohort order, then country, then
// scheme. Cells without enough data are kept and flagged.
std::vector<CellResult> compute_cells(std::span<const Cohort> cohorts,
                                      std::span<const std::string> countries,
                                      std::span<const CountingScheme> schemes,
                                      const FiellerOptions& options, std::size_t threads = 1);

// All (base, later) year pairs with later - base = offset inside `years`.
std::vector<std::pair<int, int>> enumerate_pairs(const YearRange& years, int offset);

struct Lag0Cell {
  std::string journal_id;
  int year = 0;
  Lag0Result result;
};

// Split-half lag-0 estimates for every cohort and group.
std::vector<Lag0Cell> compute_lag0(std::span<const Cohort> cohorts, std::span<const GroupKey> groups,
                                   const Lag0Options& options, std::size_t threads = 1);

// Offset-0 level: mean of the per journal-year lag-0 fractions for one group,
// over journal-years with at least one valid replicate.
struct Lag0Summary {
  double mean_fraction = 0.0;
  std::size_t n_cells = 0;
};

std::optional<Lag0Summary> summarize_lag0(std::span<const Lag0Cell> cells, const GroupKey& group);

struct CurvePoint {
  int offset = 0;
  double inside_fraction = 0.0;
  std::size_t n_comparisons = 0;
  // Pairs dropped because the base-year cell had no bounded interval.
  std::size_t excluded_base_insufficient = 0;
  std::size_t excluded_base_unbounded = 0;
  // Pairs dropped because the later year had no MNLCS value.
  std::size_t excluded_later_missing = 0;
  // Offset 0 comes from split-half simulation, not from year pairs.
  bool simulated = false;
};

struct CoverageCurve {
  std::string country;
  CountingScheme scheme = CountingScheme::Inclusive;
  std::vector<CurvePoint> points;
};

// Fraction of later-year values inside base-year intervals of the same journal,
// per year offset 1..max_offset. Every cell must belong to one country and
// scheme. Offsets with no usable pair are omitted.
CoverageCurve coverage_curve(std::span<const CellResult> cells, int max_offset,
                             std::optional<Lag0Summary> lag0 = std::nullopt);

struct SeriesPoint {
  int year = 0;
  double value = MnlcsEstimate::kNaN;
  double ci_low = MnlcsEstimate::kNaN;
  double ci_high = MnlcsEstimate::kNaN;
  Validity status = Validity::InsufficientData;
  // True for a year inside the series span with no usable value.
  bool gap = true;
};

// Year-ordered series for one journal, country and scheme. Years between the
// first and last cell that lack a value are emitted as gap points.
std::vector<SeriesPoint> series_report(std::span<const CellResult> cells);

}  // namespace mnlcs
