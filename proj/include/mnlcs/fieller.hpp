#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "mnlcs/model.hpp"

namespace mnlcs {

// Student-t upper critical value request: P(T_df > t) = alpha.
struct TQuantileSpec {
  double df = 1.0;
  double alpha = 0.025;
};

// Memoised; safe to call from several threads. Throws DomainError when
// df <= 0 or alpha is outside (0, 0.5].
double t_quantile(const TQuantileSpec& spec);

// Which curvature term to use.
//   Standard: h = t^2 (SE_j / mean_j)^2, Fieller's construction.
//   Printed:  h = t (SE_j / mean_s)^2, kept for side-by-side comparison.
enum class FiellerForm { Standard, Printed };

std::string_view to_string(FiellerForm form) noexcept;
std::optional<FiellerForm> parse_fieller_form(std::string_view text);

double fieller_h(double t, const LogStats& field);
double fieller_h(double t, const LogStats& group, const LogStats& field, FiellerForm form);

struct FiellerInterval {
  double center = 0.0;      // value / (1 - h)
  double half_width = 0.0;  // t * SE
  double se = 0.0;
  double h = 0.0;
  bool bounded = false;

  double low() const noexcept { return center - half_width; }
  double high() const noexcept { return center + half_width; }
};

// Interval for the ratio group.mean / field.mean with critical value t.
// Requires group.n >= 2 and field.n >= 2; throws DegenerateField when the
// field mean is zero. `bounded` is false when h >= 1.
FiellerInterval fieller_interval(double value, const LogStats& group, const LogStats& field,
                                 double t, FiellerForm form = FiellerForm::Standard);

// Wraps fieller_interval into an MnlcsEstimate. Small samples and h >= 1 are
// reported through `valid` rather than thrown.
MnlcsEstimate fieller_ci(double value, const LogStats& group, const LogStats& field, double t,
                         FiellerForm form = FiellerForm::Standard);

struct FiellerOptions {
  double alpha = 0.025;
  FiellerForm form = FiellerForm::Standard;
  // Smallest group for which an interval is attempted.
  std::size_t min_group_n = 5;
};

// Point value plus interval with t taken at df = n_group + n_field - 2.
// Never throws for data-shaped problems: an empty group or an all-zero field
// yields InsufficientData with no value.
MnlcsEstimate estimate_mnlcs(const LogStats& group, const LogStats& field,
                             const FiellerOptions& options = {});

}  // namespace mnlcs
