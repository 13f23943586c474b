#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include "mnlcs/error.hpp"
#include "mnlcs/fieller.hpp"
#include "mnlcs/indicator.hpp"
#include "mnlcs/synth.hpp"

using namespace mnlcs;

// Frozen from tests/oracles/golden_values.py (mpmath, 50 digits).
TEST_CASE("t quantiles against the arbitrary-precision oracle") {
  CHECK(t_quantile({1, 0.025}) == doctest::Approx(12.706204736174704646).epsilon(1e-12));
  CHECK(t_quantile({8, 0.025}) == doctest::Approx(2.3060041352041666833).epsilon(1e-13));
  CHECK(t_quantile({30, 0.05}) == doctest::Approx(1.6972608865939578486).epsilon(1e-13));
  CHECK(t_quantile({2.5, 0.01}) == doctest::Approx(5.3531111730308743158).epsilon(1e-12));
  CHECK(std::abs(t_quantile({1e6, 0.025}) - 1.9599663568141070353) < 1e-10);
  CHECK(std::abs(t_quantile({1e6, 0.025}) - 1.959964) < 1e-4);
  CHECK(t_quantile({7, 0.5}) == 0.0);
}

TEST_CASE("t quantile domain errors") {
  for (TQuantileSpec bad : {TQuantileSpec{0, 0.025}, TQuantileSpec{-3, 0.025}, TQuantileSpec{5, 0.0},
                            TQuantileSpec{5, 0.6}, TQuantileSpec{std::nan(""), 0.025}}) {
    try {
      t_quantile(bad);
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainError);
    }
  }
}

TEST_CASE("h examples") {
  CHECK(fieller_h(2.0, LogStats{10, 1.0, 0.0}) == 0.0);
  CHECK(fieller_h(2.0, LogStats{10, 1.0, 0.05}) == doctest::Approx(0.01).epsilon(1e-14));
  // Threshold SE_j = mean_j / t.
  CHECK(fieller_h(2.0, LogStats{10, 1.0, 0.5}) == doctest::Approx(1.0));
  // Printed form: t * (SE_j / mean_s)^2.
  CHECK(fieller_h(2.0, LogStats{10, 0.5, 0.1}, LogStats{10, 1.0, 0.05}, FiellerForm::Printed) ==
        doctest::Approx(2.0 * 0.01));
}

TEST_CASE("zero field variance reduces to the delta-method interval") {
  const LogStats group{20, 1.2, 0.1};
  const LogStats field{200, 1.5, 0.0};
  const double t = 2.1;
  const double value = mnlcs::mnlcs(group, field);
  const auto ci = fieller_ci(value, group, field, t);
  REQUIRE(ci.ok());
  CHECK(ci.h == 0.0);
  const double half = t * value * 0.1 / 1.2;
  CHECK(ci.ci_high == doctest::Approx(value + half).epsilon(1e-14));
  CHECK(ci.ci_low_unclamped == doctest::Approx(value - half).epsilon(1e-14));
}

TEST_CASE("limit at SE_j = 1e-12") {
  const LogStats group{20, 1.2, 0.1};
  const LogStats field{200, 1.5, 1e-12};
  const double t = 2.1;
  const double value = mnlcs::mnlcs(group, field);
  const auto ci = fieller_ci(value, group, field, t);
  const double half = t * value * 0.1 / 1.2;
  CHECK(std::abs(ci.ci_high - (value + half)) < 1e-10);
  CHECK(std::abs(ci.ci_low_unclamped - (value - half)) < 1e-10);
}

TEST_CASE("golden Fieller interval") {
  const std::vector<std::int64_t> field_counts{0, 1, 3, 7, 2, 2, 5, 1};
  const std::vector<std::int64_t> group_counts{1, 7};
  const auto field = log_stats(field_counts);
  const auto group = log_stats(group_counts);
  const auto est = estimate_mnlcs(group, field, {0.025, FiellerForm::Standard, 2});
  REQUIRE(est.ok());
  CHECK(est.value == doctest::Approx(1.2544210991501178988).epsilon(1e-13));
  CHECK(est.h == doctest::Approx(0.23796992325235759533).epsilon(1e-12));
  CHECK(est.se_mnlcs == doctest::Approx(0.79844285170631898104).epsilon(1e-12));
  CHECK(est.ci_low_unclamped == doctest::Approx(-0.19505557799092014106).epsilon(1e-11));
  CHECK(est.ci_high == doctest::Approx(3.4873694575270374684).epsilon(1e-12));
  CHECK(est.ci_low == 0.0);
  CHECK(est.ci_low_unclamped < est.center());
  CHECK(est.center() < est.ci_high);
}

TEST_CASE("unbounded and insufficient cases") {
  const LogStats field{2, 3.45, 3.45};
  const LogStats group{6, 3.0, 0.5};
  const auto est = fieller_ci(mnlcs::mnlcs(group, field), group, field, 2.0);
  CHECK(est.valid == Validity::UnboundedFieller);
  CHECK(est.has_value());
  CHECK_FALSE(est.contains(est.value));

  const auto small = fieller_ci(1.0, LogStats{1, 1.0, std::nullopt}, LogStats{50, 1.0, 0.1}, 2.0);
  CHECK(small.valid == Validity::InsufficientData);

  const auto below_min = estimate_mnlcs(LogStats{4, 1.0, 0.1}, LogStats{50, 1.0, 0.1});
  CHECK(below_min.valid == Validity::InsufficientData);
  CHECK(below_min.value == doctest::Approx(1.0));

  const auto empty = estimate_mnlcs(LogStats{}, LogStats{50, 1.0, 0.1});
  CHECK_FALSE(empty.has_value());

  CHECK_THROWS_AS(fieller_interval(1.0, LogStats{5, 1.0, 0.1}, LogStats{5, 0.0, 0.0}, 2.0), Error);
}

TEST_CASE("zero group mean gives a finite interval at zero") {
  const LogStats group{10, 0.0, 0.0};
  const LogStats field{100, 1.0, 0.05};
  const auto est = estimate_mnlcs(group, field);
  REQUIRE(est.ok());
  CHECK(est.value == 0.0);
  CHECK(est.ci_low == 0.0);
  CHECK(est.ci_high == 0.0);
  CHECK(est.contains(0.0));
}

TEST_CASE("property: interval brackets the centre and narrows as the group grows") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const double sd_g = 0.2 + rng.uniform();
    const double mean_g = 0.1 + 2.0 * rng.uniform();
    const LogStats field{1000, 0.5 + rng.uniform(), 0.01 + 0.05 * rng.uniform()};
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n : {5u, 10u, 40u, 160u, 640u}) {
      const LogStats group{n, mean_g, sd_g / std::sqrt(static_cast<double>(n))};
      const auto est = estimate_mnlcs(group, field);
      REQUIRE(est.ok());
      CHECK(est.ci_low_unclamped < est.center());
      CHECK(est.center() < est.ci_high);
      CHECK(est.h < 1.0);
      const double width = est.ci_high - est.ci_low_unclamped;
      CHECK(width <= previous);
      previous = width;
    }
  }
}

TEST_CASE("Monte Carlo coverage of the true ratio, group inside its field") {
  // Smaller cousin of the acceptance check: n = 80, 4000 replicates.
  const std::size_t n_group = 80, n_field = 800, reps = 4000;
  std::size_t inside = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Rng rng(derive_stream(99, {rep}));
    auto field = sample_citations(1.0, 1.0, n_field, rng);
    const std::vector<std::int64_t> group(field.begin(), field.begin() + n_group);
    const auto est = estimate_mnlcs(log_stats(group), log_stats(field));
    REQUIRE(est.ok());
    inside += est.contains(1.0);
  }
  const double coverage = static_cast<double>(inside) / reps;
  CHECK(coverage == doctest::Approx(0.95).epsilon(0.025 / 0.95));
}

TEST_CASE("t quantile cache is safe under concurrent use") {
  std::vector<std::jthread> threads;
  std::atomic<int> mismatches{0};
  const double expected = t_quantile({8, 0.025});
  for (int k = 0; k < 4; ++k) {
    threads.emplace_back([&, k] {
      for (int i = 0; i < 2000; ++i) {
        if (t_quantile({8, 0.025}) != expected) ++mismatches;
        t_quantile({static_cast<double>(10 + (i + k) % 300), 0.025});
      }
    });
  }
  threads.clear();
  CHECK(mismatches.load() == 0);
}
