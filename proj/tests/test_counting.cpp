#include <doctest.h>

#include <algorithm>
#include <map>

#include "mnlcs/counting.hpp"
#include "mnlcs/error.hpp"
#include "test_support.hpp"

using namespace mnlcs;
using mnlcs::testing::make_cohort;

TEST_CASE("membership under the two whole-counting schemes") {
  const CitationRecord collab{"J1", 2000, 1, {"JP", "US"}};
  const CitationRecord solo{"J1", 2000, 1, {"US"}};
  const CitationRecord other{"J1", 2000, 1, {"JP"}};
  const CitationRecord none{"J1", 2000, 1, {}};

  CHECK(is_member(collab, "US", CountingScheme::Inclusive));
  CHECK_FALSE(is_member(collab, "US", CountingScheme::Exclusive));
  CHECK(is_member(solo, "US", CountingScheme::Inclusive));
  CHECK(is_member(solo, "US", CountingScheme::Exclusive));
  CHECK_FALSE(is_member(other, "US", CountingScheme::Inclusive));
  CHECK_FALSE(is_member(other, "US", CountingScheme::Exclusive));
  CHECK_FALSE(is_member(none, "US", CountingScheme::Inclusive));
  CHECK_FALSE(is_member(none, "US", CountingScheme::Exclusive));
}

TEST_CASE("select_group returns indices into the cohort") {
  const auto cohort = make_cohort({1, 2, 3, 4}, {{"US"}, {"JP", "US"}, {"JP"}, {}});
  CHECK(select_group(cohort, "US", CountingScheme::Inclusive).member_indices ==
        std::vector<std::size_t>{0, 1});
  CHECK(select_group(cohort, "US", CountingScheme::Exclusive).member_indices ==
        std::vector<std::size_t>{0});
  CHECK(select_group(cohort, "FR", CountingScheme::Inclusive).member_indices.empty());
  const auto sel = select_group(cohort, "JP", CountingScheme::Inclusive);
  CHECK(group_citations(cohort, sel) == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("property: exclusive selections are subsets of inclusive ones and rebuild exactly") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cohort = testing::random_cohort(rng, 1 + rng.below(60));
    std::size_t exclusive_total = 0;
    for (auto code : {"CN", "DE", "FR", "GB", "JP", "US"}) {
      const auto inc = select_group(cohort, code, CountingScheme::Inclusive);
      const auto exc = select_group(cohort, code, CountingScheme::Exclusive);
      CHECK(std::includes(inc.member_indices.begin(), inc.member_indices.end(),
                          exc.member_indices.begin(), exc.member_indices.end()));
      CHECK(selection_consistent(cohort, inc));
      CHECK(selection_consistent(cohort, exc));
      exclusive_total += exc.member_indices.size();
    }
    CHECK(exclusive_total <= cohort.size());
  }
}

TEST_CASE("selection_consistent detects tampering") {
  const auto cohort = make_cohort({1, 2}, {{"US"}, {"US"}});
  auto sel = select_group(cohort, "US", CountingScheme::Exclusive);
  sel.member_indices.pop_back();
  CHECK_FALSE(selection_consistent(cohort, sel));
}

TEST_CASE("top_countries ranks by inclusive count with lexicographic ties") {
  // US:5 JP:3 DE:3 across two cohorts.
  std::vector<Cohort> cohorts{
      make_cohort({0, 0, 0, 0}, {{"US"}, {"US", "JP"}, {"DE"}, {"DE", "US"}}, "J1", 2000),
      make_cohort({0, 0, 0}, {{"US", "JP", "DE"}, {"US"}, {"JP"}}, "J2", 2000),
  };

  // Brute-force oracle.
  std::map<std::string, std::size_t> counts;
  for (const auto& c : cohorts)
    for (const auto& r : c.records())
      for (const auto& code : r.countries) ++counts[code];
  REQUIRE(counts["US"] == 5);
  REQUIRE(counts["JP"] == 3);
  REQUIRE(counts["DE"] == 3);

  const auto top = top_countries(cohorts, 2);
  CHECK(top.codes() == std::vector<std::string>{"US", "DE"});
  CHECK_FALSE(top.short_of_k);
  CHECK(top.ranking[0].articles == 5);
}

TEST_CASE("top_countries degenerate inputs") {
  std::vector<Cohort> single{make_cohort({1, 2}, {{"JP"}, {"JP"}})};
  CHECK(top_countries(single, 1).codes() == std::vector<std::string>{"JP"});

  std::vector<Cohort> empty{make_cohort({1, 2})};
  const auto none = top_countries(empty, 3);
  CHECK(none.ranking.empty());
  CHECK(none.short_of_k);

  const auto few = top_countries(single, 4);
  CHECK(few.short_of_k);
  CHECK(few.codes() == std::vector<std::string>{"JP"});
  CHECK_THROWS_AS(top_countries(single, 0), Error);
}
