#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mnlcs {

// Inclusive calendar-year range [first, last].
struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const noexcept { return year >= first && year <= last; }
  int count() const noexcept { return last - first + 1; }
  bool operator==(const YearRange&) const = default;
};

// One article. `countries` is the deduplicated set of ISO-3166 alpha-2 codes of
// the author affiliations, kept sorted so equality and serialisation are
// canonical. An empty set is legal: the article still counts towards its
// journal's field statistics.
struct CitationRecord {
  std::string journal_id;
  int year = 0;
  std::int64_t citations = 0;
  std::vector<std::string> countries;

  bool has_country(std::string_view code) const;
  bool operator==(const CitationRecord&) const = default;
};

// Unvalidated text fields of one input row.
struct RawRecord {
  std::string journal_id;
  std::string year;
  std::string citations;
  std::string countries;
};

// Parses and normalises a raw row. Country tokens are ';'-separated; each is
// either a two-letter code (any case) or a country name known to the bundled
// lookup table.
CitationRecord validate_record(const RawRecord& raw,
                               std::optional<YearRange> years = std::nullopt);

// Maps a free-text country name ("United States", "japan") to its alpha-2 code.
std::optional<std::string> lookup_country_code(std::string_view name);

// Parses a ';'-separated country list into a sorted, deduplicated code set.
std::vector<std::string> parse_countries(std::string_view field);
std::string join_countries(const std::vector<std::string>& countries);

// Strict weak order used wherever record order must not depend on input order:
// (journal, year, citations, countries).
bool canonical_less(const CitationRecord& a, const CitationRecord& b);

// All articles of one journal in one year; the normalisation universe for
// every indicator computed on it.
class Cohort {
 public:
  Cohort(std::string journal_id, int year, std::vector<CitationRecord> records);

  const std::string& journal_id() const noexcept { return journal_id_; }
  int year() const noexcept { return year_; }
  const std::vector<CitationRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  std::vector<std::int64_t> citations() const;

  bool operator==(const Cohort&) const = default;

 private:
  std::string journal_id_;
  int year_;
  std::vector<CitationRecord> records_;
};

enum class CountingScheme { Inclusive, Exclusive };

std::string_view to_string(CountingScheme scheme) noexcept;
std::optional<CountingScheme> parse_scheme(std::string_view text);

struct GroupSelection {
  std::string country;
  CountingScheme scheme = CountingScheme::Inclusive;
  std::vector<std::size_t> member_indices;

  bool operator==(const GroupSelection&) const = default;
};

// Sample size, mean and standard error of ln(1 + c). `se` is absent for n = 1.
struct LogStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> se;
};

enum class Validity { Ok, UnboundedFieller, InsufficientData };

std::string_view to_string(Validity v) noexcept;

struct MnlcsEstimate {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  double value = kNaN;
  // Reported bounds; the lower one is clamped at zero.
  double ci_low = kNaN;
  double ci_high = kNaN;
  // Lower bound before clamping. Coverage checks use this one.
  double ci_low_unclamped = kNaN;
  double h = kNaN;
  double se_mnlcs = kNaN;
  std::size_t n_group = 0;
  std::size_t n_field = 0;
  Validity valid = Validity::InsufficientData;

  bool has_value() const noexcept { return std::isfinite(value); }
  bool ok() const noexcept { return valid == Validity::Ok; }
  double center() const noexcept { return value / (1.0 - h); }
  // Closed-interval membership against the unclamped bounds.
  bool contains(double x) const noexcept {
    return ok() && x >= ci_low_unclamped && x <= ci_high;
  }
};

}  // namespace mnlcs
