#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnlcs/bootstrap.hpp"
#include "mnlcs/error.hpp"
#include "mnlcs/model.hpp"
#include "mnlcs/stability.hpp"

namespace mnlcs {

// Input schema: journal_id,year,citations,countries (countries ';'-separated).
inline constexpr const char* kRecordHeader = "journal_id,year,citations,countries";

struct IngestOptions {
  // Empty means every journal.
  std::vector<std::string> journals;
  std::optional<YearRange> years;
  // Number of malformed rows tolerated before ingestion aborts.
  std::size_t max_bad_rows = 0;
};

struct RowError {
  std::size_t line = 0;
  ErrorCode code = ErrorCode::MalformedRows;
  std::string message;
};

struct IngestResult {
  // Ordered by (journal_id, year); records keep file order.
  std::vector<Cohort> cohorts;
  std::vector<RowError> row_errors;
  std::size_t rows_read = 0;
  std::size_t rows_filtered = 0;
};

IngestResult ingest(std::istream& in, const IngestOptions& options = {});
IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options = {});

void write_records(std::ostream& out, std::span<const Cohort> cohorts);
void write_records(const std::filesystem::path& path, std::span<const Cohort> cohorts);

// Nine significant digits; NaN becomes an empty field.
std::string format_number(double x);

void write_cells_csv(std::ostream& out, std::span<const CellResult> cells);
void write_curves_csv(std::ostream& out, std::span<const CoverageCurve> curves);
// Wide table for one scheme: offset, then one percentage column per country.
void write_figure_csv(std::ostream& out, std::span<const CoverageCurve> curves, CountingScheme scheme);

struct SeriesRow {
  std::string journal_id;
  std::string country;
  CountingScheme scheme = CountingScheme::Inclusive;
  SeriesPoint point;
};

void write_series_csv(std::ostream& out, std::span<const SeriesRow> rows);
void write_lag0_csv(std::ostream& out, std::span<const Lag0Cell> cells);
void write_exclusions_csv(std::ostream& out, std::span<const CoverageCurve> curves,
                          std::span<const Lag0Cell> lag0);

}  // namespace mnlcs
