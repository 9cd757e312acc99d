#pragma once

#include <algorithm>
#include <vector>

#include "mrc/error.hpp"
#include "mrc/round_model.hpp"
#include "mrc/throughput.hpp"
#include "mrc/timing.hpp"

namespace mrc {

/// Stop the contention phase once the cumulative winner count reaches `theta`.
struct StoppingPolicy {
  int theta = 1;
  double rate_of_return = 0;  // mu, packets per microsecond
};

struct LookAheadDiagnostics {
  int v = 0;
  // per_u_margin[u] = u - E[(u - X)^+] - mu (T_RTS + m_I sigma), u = 0..M
  std::vector<double> per_u_margin;
};

struct LookAheadResult {
  StoppingPolicy policy;
  LookAheadDiagnostics diagnostics;
};

namespace detail {

// u - E[(u-X)^+] == E[min(u, X)]; the right-hand form never touches x_pmf[0].
inline std::vector<double> lookahead_margins(const RoundModel& model, const DerivedTimings& t, double mu) {
  const int m = model.mpr_capability;
  const double cost = mu * round_overhead_us(model, t);
  std::vector<double> margins(static_cast<std::size_t>(m) + 1);
  for (int u = 0; u <= m; ++u) {
    double gain = 0;
    for (int x = 1; x <= m; ++x) gain += model.x_pmf[x] * std::min(u, x);
    margins[u] = gain - cost;
  }
  return margins;
}

}  // namespace detail

/// One-stage look-ahead: with u winner slots still free, one more round is
/// worth E[min(u, X)] packets and costs mu (T_RTS + m_I sigma). The rule stops
/// while that gain does not exceed the cost, i.e. once M - sum X <= v.
inline LookAheadResult one_stage_lookahead_threshold(const RoundModel& model, const DerivedTimings& t, double mu) {
  validate(model);
  if (!(mu > 0.0)) throw ParameterError("mu", "must be positive");
  LookAheadResult r;
  r.diagnostics.per_u_margin = detail::lookahead_margins(model, t, mu);
  const auto& margins = r.diagnostics.per_u_margin;
  if (!(margins[0] <= 0.0)) throw std::logic_error("look-ahead margin at u = 0 must be non-positive");
  int v = 0;
  for (int u = 0; u <= model.mpr_capability; ++u)
    if (margins[u] <= 0.0) v = u;
  r.diagnostics.v = v;
  r.policy.theta = std::clamp(model.mpr_capability - v, 1, model.mpr_capability);
  r.policy.rate_of_return = mu;
  return r;
}

/// Structural precondition for the look-ahead rule being optimal: margins
/// nondecreasing in u, and the stop set {sum X >= theta} absorbing.
inline bool verify_monotone_case(const RoundModel& model, const DerivedTimings& t, double mu) {
  validate(model);
  const auto margins = detail::lookahead_margins(model, t, mu);
  for (std::size_t u = 1; u < margins.size(); ++u)
    if (margins[u] < margins[u - 1]) return false;

  const int m = model.mpr_capability;
  const int theta = one_stage_lookahead_threshold(model, t, mu).policy.theta;
  for (int s = theta; s <= theta - 1 + m; ++s)
    for (int x = 0; x <= m; ++x)
      if (model.x_pmf[x] > 0.0 && s + x < theta) return false;
  return true;
}

/// Exhaustive line search over theta in 1..M.
inline StoppingPolicy optimal_threshold_by_search(const RoundModel& model, const DerivedTimings& t) {
  validate(model);
  const auto best = best_theta(model, t);
  return {best.theta, best.throughput_pps * 1e-6};
}

/// True when the sequence rises (weakly) to a single peak and then falls (weakly).
inline bool is_unimodal(const std::vector<double>& values) {
  std::size_t i = 1;
  while (i < values.size() && values[i] >= values[i - 1]) ++i;
  while (i < values.size() && values[i] <= values[i - 1]) ++i;
  return i >= values.size();
}

}  // namespace mrc
