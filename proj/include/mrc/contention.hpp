#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "mrc/error.hpp"
#include "mrc/round_model.hpp"

namespace mrc {

/// Distributions of the contention phase when the AP stops as soon as the
/// cumulative number of winners reaches `theta`.
struct ContentionAnalysis {
  int theta = 0;
  // visit_weights[t]: expected number of rounds that start with running sum t.
  std::vector<double> visit_weights;
  // stop_time_pmf[n-1] = Pr{N* = n}; empty when not requested.
  std::vector<double> stop_time_pmf;
  double stop_time_residual = 0;  // Pr{N* > stop_time_pmf.size()}
  double expected_rounds = 0;
  // stopped_sum_pmf[i] = Pr{sum X = theta + i}, i = 0..M-1.
  std::vector<double> stopped_sum_pmf;
  double expected_payload = 0;  // E[min(sum X, M)]

  int stopped_sum_first() const noexcept { return theta; }
  int stopped_sum_last() const noexcept { return theta + static_cast<int>(stopped_sum_pmf.size()) - 1; }
  double stopped_sum_at(int s) const noexcept {
    if (s < stopped_sum_first() || s > stopped_sum_last()) return 0.0;
    return stopped_sum_pmf[static_cast<std::size_t>(s - theta)];
  }
};

struct AnalysisOptions {
  bool with_stop_time_pmf = true;
  double residual_tolerance = 1e-12;
  std::size_t max_rounds = std::size_t{1} << 20;
};

inline void check_theta(const RoundModel& model, int theta) {
  if (theta < 1 || theta > model.mpr_capability)
    throw ParameterError("theta", "must lie in 1..M (M = " + std::to_string(model.mpr_capability) + ")");
}

namespace detail {

// Pr{running sum at the start of round n = t, N* >= n} for t < theta,
// iterated one round at a time. Returns the stop-time pmf and the residual.
inline void stop_time_distribution(const RoundModel& model, int theta, const AnalysisOptions& opt,
                                   ContentionAnalysis& out) {
  const auto& p = model.x_pmf;
  const int m = model.mpr_capability;
  // tail[d] = Pr{X >= d}, d = 1..theta, summed from the winner side.
  std::vector<double> tail(static_cast<std::size_t>(theta) + 1, 0.0);
  for (int d = 1; d <= theta; ++d) {
    double acc = 0;
    for (int x = d; x <= m; ++x) acc += p[x];
    tail[d] = acc;
  }

  std::vector<double> state(static_cast<std::size_t>(theta), 0.0), next(state.size());
  state[0] = 1.0;
  double alive = 1.0;
  out.stop_time_pmf.clear();
  while (alive >= opt.residual_tolerance && out.stop_time_pmf.size() < opt.max_rounds) {
    double stop = 0;
    std::fill(next.begin(), next.end(), 0.0);
    for (int t = 0; t < theta; ++t) {
      const double w = state[t];
      if (w == 0.0) continue;
      stop += w * tail[theta - t];
      next[t] += w * p[0];
      for (int x = 1; x <= m && t + x < theta; ++x) next[t + x] += w * p[x];
    }
    out.stop_time_pmf.push_back(stop);
    state.swap(next);
    alive = std::accumulate(state.begin(), state.end(), 0.0);
  }
  out.stop_time_residual = alive;
}

}  // namespace detail

/// Exact analysis of the threshold-stopped contention process by renewal
/// recursion on the running winner count.
inline ContentionAnalysis analyze_stopped_process(const RoundModel& model, int theta,
                                                  const AnalysisOptions& opt = {}) {
  check_theta(model, theta);
  const auto& p = model.x_pmf;
  const int m = model.mpr_capability;
  const double q = model.success_prob;

  ContentionAnalysis a;
  a.theta = theta;
  a.visit_weights.assign(static_cast<std::size_t>(theta), 0.0);
  // A round that starts at sum t repeats on a collision, so each level is
  // visited a geometric number of times with mean 1/q per entry.
  a.visit_weights[0] = 1.0 / q;
  for (int t = 1; t < theta; ++t) {
    double in = 0;
    for (int x = 1; x <= std::min(t, m); ++x) in += a.visit_weights[t - x] * p[x];
    a.visit_weights[t] = in / q;
  }
  a.expected_rounds = std::accumulate(a.visit_weights.begin(), a.visit_weights.end(), 0.0);

  a.stopped_sum_pmf.assign(static_cast<std::size_t>(m), 0.0);
  for (int s = theta; s <= theta - 1 + m; ++s) {
    double mass = 0;
    for (int t = std::max(0, s - m); t <= std::min(theta - 1, s - 1); ++t) mass += a.visit_weights[t] * p[s - t];
    a.stopped_sum_pmf[s - theta] = mass;
    a.expected_payload += std::min(s, m) * mass;
  }

  if (opt.with_stop_time_pmf) detail::stop_time_distribution(model, theta, opt, a);
  return a;
}

}  // namespace mrc
