#include "mnlcs/counting.hpp"

#include <algorithm>
#include <map>

#include "mnlcs/error.hpp"

namespace mnlcs {

bool is_member(const CitationRecord& record, std::string_view country, CountingScheme scheme) {
  switch (scheme) {
    case CountingScheme::Inclusive:
      return record.has_country(country);
    case CountingScheme::Exclusive:
      return record.countries.size() == 1 && record.countries.front() == country;
  }
  return false;
}

GroupSelection select_group(const Cohort& cohort, std::string_view country, CountingScheme scheme) {
  GroupSelection sel{std::string(country), scheme, {}};
  const auto& records = cohort.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (is_member(records[i], country, scheme)) sel.member_indices.push_back(i);
  }
  return sel;
}

std::vector<std::int64_t> group_citations(const Cohort& cohort, const GroupSelection& selection) {
  std::vector<std::int64_t> out;
  out.reserve(selection.member_indices.size());
  const auto& records = cohort.records();
  for (auto idx : selection.member_indices) {
    if (idx >= records.size()) {
      throw Error(ErrorCode::InconsistentCohort, "selection index out of range");
    }
    out.push_back(records[idx].citations);
  }
  return out;
}

bool selection_consistent(const Cohort& cohort, const GroupSelection& selection) {
  return select_group(cohort, selection.country, selection.scheme) == selection;
}

std::vector<std::string> RankedCountries::codes() const {
  std::vector<std::string> out;
  out.reserve(ranking.size());
  for (const auto& c : ranking) out.push_back(c.country);
  return out;
}

RankedCountries top_countries(std::span<const Cohort> cohorts, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::DomainError, "top_countries requires k >= 1");

  std::map<std::string, std::size_t> counts;
  for (const auto& cohort : cohorts) {
    for (const auto& rec : cohort.records()) {
      for (const auto& c : rec.countries) ++counts[c];
    }
  }

  RankedCountries out;
  out.ranking.reserve(counts.size());
  for (auto& [code, n] : counts) out.ranking.push_back({code, n});
  // std::map iteration is already lexicographic, so a stable sort on count
  // alone yields the tie-break.
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [](const CountryCount& a, const CountryCount& b) { return a.articles > b.articles; });
  if (out.ranking.size() < k) {
    out.short_of_k = true;
  } else {
    out.ranking.resize(k);
  }
  return out;
}

}  // namespace mnlcs
