#include <doctest.h>

#include <sstream>

#include "mnlcs/csv_io.hpp"
#include "mnlcs/error.hpp"
#include "mnlcs/synth.hpp"

using namespace mnlcs;

namespace {

IngestResult ingest_text(const std::string& text, const IngestOptions& opts = {}) {
  std::istringstream in(text);
  return ingest(in, opts);
}

}  // namespace

TEST_CASE("header only means no cohorts") {
  const auto r = ingest_text("journal_id,year,citations,countries\n");
  CHECK(r.cohorts.empty());
  CHECK(r.rows_read == 0);
}

TEST_CASE("columns may come in any order") {
  const auto r = ingest_text("countries,citations,year,journal_id\r\nUS;JP,4,2001,J2\r\n,0,2001,J2\r\n");
  REQUIRE(r.cohorts.size() == 1);
  CHECK(r.cohorts[0].size() == 2);
  CHECK(r.cohorts[0].records()[0].countries == std::vector<std::string>{"JP", "US"});
  CHECK(r.cohorts[0].records()[1].countries.empty());
}

TEST_CASE("missing columns and empty input") {
  try {
    ingest_text("journal_id,year,countries\nJ1,2000,US\n");
    FAIL("expected MissingColumns");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingColumns);
  }
  CHECK_THROWS_AS(ingest_text(""), Error);
}

TEST_CASE("a bad row beyond tolerance aborts with its line number") {
  const std::string text =
      "journal_id,year,citations,countries\n"
      "J1,2000,3,US\n"
      "J1,2000,-2,US\n"
      "J1,2000,1,JP\n";
  try {
    ingest_text(text);
    FAIL("expected MalformedRows");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedRows);
    CHECK(e.context() == "line 3");
  }
  const auto tolerated = ingest_text(text, {{}, std::nullopt, 1});
  REQUIRE(tolerated.row_errors.size() == 1);
  CHECK(tolerated.row_errors[0].line == 3);
  CHECK(tolerated.row_errors[0].code == ErrorCode::NegativeCitations);
  CHECK(tolerated.cohorts[0].size() == 2);

  CHECK_THROWS_AS(ingest_text("journal_id,year,citations,countries\nJ1,2000,3\n"), Error);
}

TEST_CASE("filters by journal and year") {
  const std::string text =
      "journal_id,year,citations,countries\n"
      "J1,2000,3,US\nJ2,2000,1,US\nJ1,2005,2,US\n";
  const auto r = ingest_text(text, {{"J1"}, YearRange{1999, 2001}, 0});
  REQUIRE(r.cohorts.size() == 1);
  CHECK(r.cohorts[0].journal_id() == "J1");
  CHECK(r.rows_filtered == 2);
}

TEST_CASE("generate, write and ingest round trip") {
  ScenarioSpec spec;
  spec.n_journals = 4;
  spec.years = {2000, 2003};
  spec.field_size_per_year = 80;
  spec.groups = {{"US", 0.3, 1.0, 1.0}, {"CN", 0.2, 0.7, 1.2}};
  spec.collaboration_fraction = 0.3;
  const auto cohorts = generate(spec);

  std::ostringstream out;
  write_records(out, cohorts);
  const auto back = ingest_text(out.str());
  CHECK(back.cohorts == cohorts);

  std::ostringstream again;
  write_records(again, back.cohorts);
  CHECK(again.str() == out.str());
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(MnlcsEstimate::kNaN).empty());
  CHECK(format_number(1234567890123.0) == "1.23456789e+12");
}
