#include "mnlcs/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "mnlcs/error.hpp"

namespace mnlcs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeCitations: return "NegativeCitations";
    case ErrorCode::UnparseableYear: return "UnparseableYear";
    case ErrorCode::UnparseableCitations: return "UnparseableCitations";
    case ErrorCode::MalformedCountry: return "MalformedCountry";
    case ErrorCode::YearOutOfRange: return "YearOutOfRange";
    case ErrorCode::InconsistentCohort: return "InconsistentCohort";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DegenerateField: return "DegenerateField";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoValidReplicates: return "NoValidReplicates";
    case ErrorCode::MissingColumns: return "MissingColumns";
    case ErrorCode::MalformedRows: return "MalformedRows";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(CountingScheme scheme) noexcept {
  return scheme == CountingScheme::Inclusive ? "inclusive" : "exclusive";
}

std::optional<CountingScheme> parse_scheme(std::string_view text) {
  if (text == "inclusive") return CountingScheme::Inclusive;
  if (text == "exclusive") return CountingScheme::Exclusive;
  return std::nullopt;
}

std::string_view to_string(Validity v) noexcept {
  switch (v) {
    case Validity::Ok: return "ok";
    case Validity::UnboundedFieller: return "unbounded_fieller";
    case Validity::InsufficientData: return "insufficient_data";
  }
  return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_alpha2(std::string_view s) {
  return s.size() == 2 && std::isalpha(static_cast<unsigned char>(s[0])) &&
         std::isalpha(static_cast<unsigned char>(s[1])) &&
         static_cast<unsigned char>(s[0]) < 0x80 && static_cast<unsigned char>(s[1]) < 0x80;
}

template <typename T>
std::optional<T> parse_integer(std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

}  // namespace

bool CitationRecord::has_country(std::string_view code) const {
  return std::binary_search(countries.begin(), countries.end(), code);
}

std::vector<std::string> parse_countries(std::string_view field) {
  std::vector<std::string> out;
  if (trim(field).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto end = field.find(';', start);
    const auto token = trim(field.substr(start, end == std::string_view::npos ? end : end - start));
    if (is_alpha2(token)) {
      std::string code(token);
      for (auto& ch : code) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      out.push_back(std::move(code));
    } else if (auto code = lookup_country_code(token)) {
      out.push_back(*code);
    } else {
      throw Error(ErrorCode::MalformedCountry,
                  "malformed country token '" + std::string(token) + "'");
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join_countries(const std::vector<std::string>& countries) {
  std::string out;
  for (std::size_t i = 0; i < countries.size(); ++i) {
    if (i) out += ';';
    out += countries[i];
  }
  return out;
}

CitationRecord validate_record(const RawRecord& raw, std::optional<YearRange> years) {
  CitationRecord rec;
  rec.journal_id = std::string(trim(raw.journal_id));
  if (rec.journal_id.empty()) {
    throw Error(ErrorCode::InconsistentCohort, "empty journal_id");
  }

  const auto year = parse_integer<int>(raw.year);
  if (!year) throw Error(ErrorCode::UnparseableYear, "unparseable year '" + raw.year + "'");
  if (years && !years->contains(*year)) {
    throw Error(ErrorCode::YearOutOfRange, "year " + std::to_string(*year) + " outside range");
  }
  rec.year = *year;

  const auto cites = parse_integer<std::int64_t>(raw.citations);
  if (!cites) {
    throw Error(ErrorCode::UnparseableCitations,
                "unparseable citation count '" + raw.citations + "'");
  }
  if (*cites < 0) {
    throw Error(ErrorCode::NegativeCitations,
                "negative citation count " + std::to_string(*cites));
  }
  rec.citations = *cites;
  rec.countries = parse_countries(raw.countries);
  return rec;
}

bool canonical_less(const CitationRecord& a, const CitationRecord& b) {
  if (a.journal_id != b.journal_id) return a.journal_id < b.journal_id;
  if (a.year != b.year) return a.year < b.year;
  if (a.citations != b.citations) return a.citations < b.citations;
  return a.countries < b.countries;
}

Cohort::Cohort(std::string journal_id, int year, std::vector<CitationRecord> records)
    : journal_id_(std::move(journal_id)), year_(year), records_(std::move(records)) {
  if (records_.empty()) {
    throw Error(ErrorCode::InsufficientData, "cohort must not be empty",
                journal_id_ + "/" + std::to_string(year_));
  }
  for (const auto& r : records_) {
    if (r.journal_id != journal_id_ || r.year != year_) {
      throw Error(ErrorCode::InconsistentCohort,
                  "record " + r.journal_id + "/" + std::to_string(r.year) +
                      " does not belong to cohort",
                  journal_id_ + "/" + std::to_string(year_));
    }
  }
}

std::vector<std::int64_t> Cohort::citations() const {
  std::vector<std::int64_t> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.citations);
  return out;
}

}  // namespace mnlcs
