#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mnlcs/model.hpp"

namespace mnlcs {

// Whole counting. Inclusive: any author from `country`. Exclusive: every author
// from `country` (the record's country set is exactly {country}). Records with
// no countries never join a group.
bool is_member(const CitationRecord& record, std::string_view country, CountingScheme scheme);

GroupSelection select_group(const Cohort& cohort, std::string_view country, CountingScheme scheme);

// Citation counts of the selected records, in selection order.
std::vector<std::int64_t> group_citations(const Cohort& cohort, const GroupSelection& selection);

// True when `selection` is exactly what select_group would rebuild.
bool selection_consistent(const Cohort& cohort, const GroupSelection& selection);

struct CountryCount {
  std::string country;
  std::size_t articles = 0;
};

struct RankedCountries {
  std::vector<CountryCount> ranking;
  // Set when fewer than k distinct countries exist.
  bool short_of_k = false;

  std::vector<std::string> codes() const;
};

// Countries ranked by inclusive article count over all cohorts, ties broken
// lexicographically by code.
RankedCountries top_countries(std::span<const Cohort> cohorts, std::size_t k);

}  // namespace mnlcs
