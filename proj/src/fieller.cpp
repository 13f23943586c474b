#include "mnlcs/fieller.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "mnlcs/error.hpp"
#include "mnlcs/indicator.hpp"

namespace mnlcs {

std::string_view to_string(FiellerForm form) noexcept {
  return form == FiellerForm::Standard ? "standard" : "printed";
}

std::optional<FiellerForm> parse_fieller_form(std::string_view text) {
  if (text == "standard") return FiellerForm::Standard;
  if (text == "printed") return FiellerForm::Printed;
  return std::nullopt;
}

namespace {

double compute_t_quantile(double df, double alpha) {
  if (alpha == 0.5) return 0.0;
  const boost::math::students_t_distribution<double> dist(df);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace

double t_quantile(const TQuantileSpec& spec) {
  if (!(spec.df > 0.0) || !std::isfinite(spec.df)) {
    throw Error(ErrorCode::DomainError, "t_quantile: degrees of freedom must be positive");
  }
  if (!(spec.alpha > 0.0 && spec.alpha <= 0.5)) {
    throw Error(ErrorCode::DomainError, "t_quantile: alpha must lie in (0, 0.5]");
  }

  static std::mutex mutex;
  static std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(spec.df, spec.alpha);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double t = compute_t_quantile(spec.df, spec.alpha);
  std::lock_guard lock(mutex);
  if (cache.size() > 65536) cache.clear();
  cache.emplace(key, t);
  return t;
}

double fieller_h(double t, const LogStats& field) {
  if (!(field.mean > 0.0)) {
    throw Error(ErrorCode::DegenerateField, "fieller_h: field mean is zero");
  }
  if (!field.se) {
    throw Error(ErrorCode::InsufficientData, "fieller_h: field standard error undefined");
  }
  const double rel = *field.se / field.mean;
  return t * t * rel * rel;
}

double fieller_h(double t, const LogStats& group, const LogStats& field, FiellerForm form) {
  if (form == FiellerForm::Standard) return fieller_h(t, field);
  if (!(field.mean > 0.0)) {
    throw Error(ErrorCode::DegenerateField, "fieller_h: field mean is zero");
  }
  if (!field.se) {
    throw Error(ErrorCode::InsufficientData, "fieller_h: field standard error undefined");
  }
  if (!(group.mean > 0.0)) return std::numeric_limits<double>::infinity();
  const double rel = *field.se / group.mean;
  return t * rel * rel;
}

FiellerInterval fieller_interval(double value, const LogStats& group, const LogStats& field,
                                 double t, FiellerForm form) {
  if (!(field.mean > 0.0)) {
    throw Error(ErrorCode::DegenerateField, "fieller_interval: field mean is zero");
  }
  if (group.n < 2 || field.n < 2 || !group.se || !field.se) {
    throw Error(ErrorCode::InsufficientData, "fieller_interval: need n >= 2 in group and field");
  }

  FiellerInterval out;
  out.h = fieller_h(t, group, field, form);
  if (!(out.h < 1.0)) return out;

  // value/(1-h) * sqrt((1-h) SE_s^2/mean_s^2 + SE_j^2/mean_j^2), multiplied
  // through by mean_s/mean_j = value so that a zero group mean stays finite.
  const double one_minus_h = 1.0 - out.h;
  const double se_s = *group.se;
  const double se_j = *field.se;
  out.se = std::sqrt(one_minus_h * se_s * se_s + value * value * se_j * se_j) /
           (field.mean * one_minus_h);
  out.center = value / one_minus_h;
  out.half_width = t * out.se;
  out.bounded = true;
  return out;
}

MnlcsEstimate fieller_ci(double value, const LogStats& group, const LogStats& field, double t,
                         FiellerForm form) {
  MnlcsEstimate est;
  est.value = value;
  est.n_group = group.n;
  est.n_field = field.n;
  if (group.n < 2 || field.n < 2) {
    est.valid = Validity::InsufficientData;
    return est;
  }

  const auto iv = fieller_interval(value, group, field, t, form);
  est.h = iv.h;
  if (!iv.bounded) {
    est.valid = Validity::UnboundedFieller;
    return est;
  }
  est.se_mnlcs = iv.se;
  est.ci_low_unclamped = iv.low();
  est.ci_low = std::max(0.0, iv.low());
  est.ci_high = iv.high();
  est.valid = Validity::Ok;
  return est;
}

MnlcsEstimate estimate_mnlcs(const LogStats& group, const LogStats& field,
                             const FiellerOptions& options) {
  MnlcsEstimate est;
  est.n_group = group.n;
  est.n_field = field.n;
  if (group.n == 0 || field.n == 0 || !(field.mean > 0.0)) return est;

  est.value = mnlcs(group, field);
  if (group.n < std::max<std::size_t>(options.min_group_n, 2) || field.n < 2) return est;

  const double df = static_cast<double>(group.n + field.n) - 2.0;
  const double t = t_quantile({df, options.alpha});
  return fieller_ci(est.value, group, field, t, options.form);
}

}  // namespace mnlcs
