#pragma once

#include <cstdint>
#include <span>

#include "mnlcs/model.hpp"

namespace mnlcs {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// ln(1 + c), the transform applied to every citation count.
double log_citation(std::int64_t citations) noexcept;

// Mean and standard error of ln(1 + c). Throws InsufficientData for an empty
// sample; for n = 1 the mean is returned and `se` is left empty.
LogStats log_stats(std::span<const std::int64_t> citations);

// Same statistics for values that are already log-transformed.
LogStats log_stats_of_logs(std::span<const double> log_values);

// Mean normalised log-transformed citation score: group mean over field mean.
// Throws DegenerateField when the field mean is zero.
double mnlcs(const LogStats& group, const LogStats& field);

}  // namespace mnlcs
