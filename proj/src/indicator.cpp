#include "mnlcs/indicator.hpp"

#include <cmath>
#include <vector>

#include "mnlcs/error.hpp"

namespace mnlcs {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

double log_citation(std::int64_t citations) noexcept {
  return std::log1p(static_cast<double>(citations));
}

LogStats log_stats_of_logs(std::span<const double> log_values) {
  if (log_values.empty()) {
    throw Error(ErrorCode::InsufficientData, "log_stats needs at least one value");
  }
  LogStats out;
  out.n = log_values.size();

  CompensatedSum total;
  bool constant = true;
  for (double x : log_values) {
    total.add(x);
    constant = constant && x == log_values.front();
  }
  if (constant) {
    out.mean = log_values.front();
    if (out.n >= 2) out.se = 0.0;
    return out;
  }
  out.mean = total.value() / static_cast<double>(out.n);
  if (out.n < 2) return out;

  // Two-pass variance; the residual sum corrects for rounding in the mean.
  CompensatedSum sq;
  CompensatedSum resid;
  for (double x : log_values) {
    const double d = x - out.mean;
    sq.add(d * d);
    resid.add(d);
  }
  const double n = static_cast<double>(out.n);
  const double r = resid.value();
  const double var = std::max(0.0, (sq.value() - r * r / n) / (n - 1.0));
  out.se = std::sqrt(var / n);
  return out;
}

LogStats log_stats(std::span<const std::int64_t> citations) {
  std::vector<double> logs;
  logs.reserve(citations.size());
  for (auto c : citations) {
    if (c < 0) throw Error(ErrorCode::NegativeCitations, "negative citation count");
    logs.push_back(log_citation(c));
  }
  return log_stats_of_logs(logs);
}

double mnlcs(const LogStats& group, const LogStats& field) {
  if (!(field.mean > 0.0)) {
    throw Error(ErrorCode::DegenerateField, "field mean of ln(1+c) is zero");
  }
  if (group.n == 0) {
    throw Error(ErrorCode::InsufficientData, "empty group");
  }
  return group.mean / field.mean;
}

}  // namespace mnlcs
