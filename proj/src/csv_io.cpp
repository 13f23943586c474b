#include "mnlcs/csv_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace mnlcs {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

IngestResult ingest(std::istream& in, const IngestOptions& options) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MissingColumns, "input is empty; expected header '" +
                                               std::string(kRecordHeader) + "'");
  }
  strip_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_fields(line);
  constexpr std::array<const char*, 4> kColumns{"journal_id", "year", "citations", "countries"};
  std::array<std::size_t, 4> column{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw Error(ErrorCode::MissingColumns, std::string("missing column '") + kColumns[c] + "'",
                  "line 1");
    }
    column[c] = static_cast<std::size_t>(it - header.begin());
  }

  const std::set<std::string> journal_filter(options.journals.begin(), options.journals.end());
  std::map<std::pair<std::string, int>, std::vector<CitationRecord>> grouped;
  IngestResult result;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    ++result.rows_read;
    try {
      const auto fields = split_fields(line);
      if (fields.size() != header.size()) {
        throw Error(ErrorCode::MalformedRows, fmt::format("expected {} fields, found {}",
                                                          header.size(), fields.size()));
      }
      auto rec = validate_record(
          {fields[column[0]], fields[column[1]], fields[column[2]], fields[column[3]]});
      if ((!journal_filter.empty() && !journal_filter.count(rec.journal_id)) ||
          (options.years && !options.years->contains(rec.year))) {
        ++result.rows_filtered;
        continue;
      }
      grouped[{rec.journal_id, rec.year}].push_back(std::move(rec));
    } catch (const Error& e) {
      result.row_errors.push_back({line_no, e.code(), e.what()});
      if (result.row_errors.size() > options.max_bad_rows) {
        throw Error(ErrorCode::MalformedRows,
                    fmt::format("malformed row ({}: {}); {} bad row(s) exceed tolerance {}",
                                to_string(e.code()), e.what(), result.row_errors.size(),
                                options.max_bad_rows),
                    fmt::format("line {}", line_no));
      }
    }
  }

  result.cohorts.reserve(grouped.size());
  for (auto& [key, records] : grouped) result.cohorts.emplace_back(key.first, key.second, std::move(records));
  return result;
}

IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open input file", path.string());
  try {
    return ingest(in, options);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_records(std::ostream& out, std::span<const Cohort> cohorts) {
  out << kRecordHeader << '\n';
  for (const auto& cohort : cohorts) {
    for (const auto& r : cohort.records()) {
      out << r.journal_id << ',' << r.year << ',' << r.citations << ',' << join_countries(r.countries)
          << '\n';
    }
  }
}

void write_records(const std::filesystem::path& path, std::span<const Cohort> cohorts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file", path.string());
  write_records(out, cohorts);
  if (!out) throw Error(ErrorCode::Io, "write failed", path.string());
}

std::string format_number(double x) {
  if (std::isnan(x)) return {};
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  return fmt::format("{:.9g}", x);
}

void write_cells_csv(std::ostream& out, std::span<const CellResult> cells) {
  out << "journal_id,year,country,scheme,value,ci_low,ci_high,ci_low_unclamped,h,se_mnlcs,"
         "n_group,n_field,valid\n";
  for (const auto& c : cells) {
    const auto& e = c.estimate;
    out << c.journal_id << ',' << c.year << ',' << c.country << ',' << to_string(c.scheme) << ','
        << format_number(e.value) << ',' << format_number(e.ci_low) << ','
        << format_number(e.ci_high) << ',' << format_number(e.ci_low_unclamped) << ','
        << format_number(e.h) << ',' << format_number(e.se_mnlcs) << ',' << e.n_group << ','
        << e.n_field << ',' << to_string(e.valid) << '\n';
  }
}

void write_curves_csv(std::ostream& out, std::span<const CoverageCurve> curves) {
  out << "country,scheme,offset,inside_fraction,n_comparisons,excluded_base_insufficient,"
         "excluded_base_unbounded,excluded_later_missing,simulated\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << curve.country << ',' << to_string(curve.scheme) << ',' << p.offset << ','
          << format_number(p.inside_fraction) << ',' << p.n_comparisons << ','
          << p.excluded_base_insufficient << ',' << p.excluded_base_unbounded << ','
          << p.excluded_later_missing << ',' << (p.simulated ? 1 : 0) << '\n';
    }
  }
}

void write_figure_csv(std::ostream& out, std::span<const CoverageCurve> curves, CountingScheme scheme) {
  std::vector<const CoverageCurve*> selected;
  std::set<int> offsets;
  for (const auto& c : curves) {
    if (c.scheme != scheme) continue;
    selected.push_back(&c);
    for (const auto& p : c.points) offsets.insert(p.offset);
  }
  out << "offset,simulated";
  for (const auto* c : selected) out << ',' << c->country;
  out << '\n';
  for (int k : offsets) {
    out << k << ',' << (k == 0 ? 1 : 0);
    for (const auto* c : selected) {
      out << ',';
      for (const auto& p : c->points) {
        if (p.offset == k) out << format_number(100.0 * p.inside_fraction);
      }
    }
    out << '\n';
  }
}

void write_series_csv(std::ostream& out, std::span<const SeriesRow> rows) {
  out << "journal_id,country,scheme,year,value,ci_low,ci_high,status,gap\n";
  for (const auto& r : rows) {
    out << r.journal_id << ',' << r.country << ',' << to_string(r.scheme) << ',' << r.point.year
        << ',' << format_number(r.point.value) << ',' << format_number(r.point.ci_low) << ','
        << format_number(r.point.ci_high) << ',' << to_string(r.point.status) << ','
        << (r.point.gap ? 1 : 0) << '\n';
  }
}

void write_lag0_csv(std::ostream& out, std::span<const Lag0Cell> cells) {
  out << "journal_id,year,country,scheme,inside,valid,excluded_insufficient,excluded_unbounded,"
         "excluded_missing_second,fraction\n";
  for (const auto& c : cells) {
    const auto& r = c.result;
    out << c.journal_id << ',' << c.year << ',' << r.group.country << ',' << to_string(r.group.scheme)
        << ',' << r.inside << ',' << r.valid << ',' << r.excluded_insufficient << ','
        << r.excluded_unbounded << ',' << r.excluded_missing_second << ','
        << (r.valid ? format_number(r.fraction()) : std::string()) << '\n';
  }
}

void write_exclusions_csv(std::ostream& out, std::span<const CoverageCurve> curves,
                          std::span<const Lag0Cell> lag0) {
  out << "source,country,scheme,offset,reason,count\n";
  auto row = [&](std::string_view source, const std::string& country, CountingScheme scheme,
                 int offset, std::string_view reason, std::size_t count) {
    if (count == 0) return;
    out << source << ',' << country << ',' << to_string(scheme) << ',' << offset << ',' << reason
        << ',' << count << '\n';
  };
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (p.simulated) continue;
      row("pairs", c.country, c.scheme, p.offset, "base_insufficient_data", p.excluded_base_insufficient);
      row("pairs", c.country, c.scheme, p.offset, "base_unbounded_fieller", p.excluded_base_unbounded);
      row("pairs", c.country, c.scheme, p.offset, "later_value_missing", p.excluded_later_missing);
    }
  }
  // Split-half exclusions summed over journal-years, in first-seen group order.
  std::vector<GroupKey> order;
  std::map<std::pair<std::string, CountingScheme>, std::array<std::size_t, 3>> totals;
  for (const auto& c : lag0) {
    const auto key = std::make_pair(c.result.group.country, c.result.group.scheme);
    auto [it, fresh] = totals.try_emplace(key, std::array<std::size_t, 3>{});
    if (fresh) order.push_back(c.result.group);
    it->second[0] += c.result.excluded_insufficient;
    it->second[1] += c.result.excluded_unbounded;
    it->second[2] += c.result.excluded_missing_second;
  }
  for (const auto& g : order) {
    const auto& t = totals.at({g.country, g.scheme});
    row("lag0", g.country, g.scheme, 0, "first_half_insufficient_data", t[0]);
    row("lag0", g.country, g.scheme, 0, "first_half_unbounded_fieller", t[1]);
    row("lag0", g.country, g.scheme, 0, "second_half_missing", t[2]);
  }
}

}  // namespace mnlcs
