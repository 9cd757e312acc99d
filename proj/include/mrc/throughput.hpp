#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "mrc/contention.hpp"
#include "mrc/error.hpp"
#include "mrc/round_model.hpp"
#include "mrc/timing.hpp"

namespace mrc {

struct ThroughputPoint {
  double lambda = 0;
  int theta = 0;
  double expected_payload_packets = 0;
  double expected_rounds = 0;
  double throughput_pps = 0;
  double throughput_mbps = 0;
};

/// Expected duration of one non-final contention round: RTS + DIFS plus the idle slots before it.
inline double round_overhead_us(const RoundModel& model, const DerivedTimings& t) {
  return t.t_rts_us + model.mean_idle_slots * t.slot_us;
}

inline ThroughputPoint make_point(double lambda, int theta, double payload, double rounds, double duration_us,
                                  const DerivedTimings& t) {
  ThroughputPoint pt;
  pt.lambda = lambda;
  pt.theta = theta;
  pt.expected_payload_packets = payload;
  pt.expected_rounds = rounds;
  pt.throughput_pps = payload / duration_us * 1e6;
  pt.throughput_mbps = pt.throughput_pps * t.payload_bits * 1e-6;
  return pt;
}

/// Renewal-reward throughput E[min(sum X, M)] / (E[N*] (T_RTS + m_I sigma) + B).
inline ThroughputPoint evaluate_throughput(const RoundModel& model, int theta, const DerivedTimings& t) {
  const auto a = analyze_stopped_process(model, theta, {.with_stop_time_pmf = false});
  const double duration = a.expected_rounds * round_overhead_us(model, t) + t.b_us;
  return make_point(model.lambda, theta, a.expected_payload, a.expected_rounds, duration, t);
}

/// B_L(lambda) = S(lambda, M).
inline ThroughputPoint lower_bound(const RoundModel& model, const DerivedTimings& t) {
  return evaluate_throughput(model, model.mpr_capability, t);
}

/// S_c(lambda) when unselected winners carry over: every round's winners are
/// eventually served, so a super round of M packets costs M / E[X] rounds.
inline ThroughputPoint carryover_upper_bound(const RoundModel& model, const DerivedTimings& t) {
  const int m = model.mpr_capability;
  const double rounds = m / expected_winners(model);
  return make_point(model.lambda, m, m, rounds, rounds * round_overhead_us(model, t) + t.b_us, t);
}

/// max over theta in 1..M of S(lambda, theta); ties go to the smaller theta.
inline ThroughputPoint best_theta(const RoundModel& model, const DerivedTimings& t) {
  ThroughputPoint best = evaluate_throughput(model, 1, t);
  for (int theta = 2; theta <= model.mpr_capability; ++theta) {
    auto pt = evaluate_throughput(model, theta, t);
    if (pt.throughput_pps > best.throughput_pps) best = pt;
  }
  return best;
}

/// Throughput for every theta in 1..M at a fixed lambda.
inline std::vector<ThroughputPoint> theta_profile(const RoundModel& model, const DerivedTimings& t) {
  std::vector<ThroughputPoint> out;
  out.reserve(static_cast<std::size_t>(model.mpr_capability));
  for (int theta = 1; theta <= model.mpr_capability; ++theta) out.push_back(evaluate_throughput(model, theta, t));
  return out;
}

// ---------------------------------------------------------------------------
// Search over the attempt rate.

inline constexpr double kMaxLambda = 200.0;

struct LambdaRange {
  double lo = 0.05;
  double hi = 30.0;
};

/// Default search range: the optimum attempt rate grows roughly like 0.85 M,
/// so the upper end scales with M.
inline LambdaRange default_lambda_range(int mpr_capability) {
  return {0.05, std::min(kMaxLambda, std::max(30.0, 1.5 * mpr_capability))};
}

struct LambdaSearchInfo {
  LambdaRange range;
  double resolution = 0;
  double tolerance = 0;
  std::size_t grid_points = 0;
  double grid_incumbent = 0;
  std::vector<std::pair<double, double>> refinement_trace;  // (lambda, S_pps) of each golden probe
};

struct LambdaSearchResult {
  ThroughputPoint best;
  LambdaSearchInfo info;
};

inline void check_lambda_search(const LambdaRange& range, double resolution, double tolerance) {
  if (!(range.lo > 0.0)) throw ParameterError("lambda_range", "lower end must be positive");
  if (!(range.hi <= kMaxLambda)) throw ParameterError("lambda_range", "upper end must not exceed 200");
  if (!(range.lo <= range.hi)) throw ParameterError("lambda_range", "empty range");
  if (!(resolution > 0.0)) throw ParameterError("lambda_resolution", "must be positive");
  if (!(tolerance > 0.0)) throw ParameterError("lambda_tolerance", "must be positive");
}

/// Coarse grid over lambda, then golden-section refinement inside the grid
/// cells adjacent to the incumbent. Ties prefer the smaller lambda.
inline LambdaSearchResult maximize_over_lambda(const std::function<ThroughputPoint(double)>& objective,
                                               LambdaRange range, double resolution, double tolerance = 1e-4) {
  check_lambda_search(range, resolution, tolerance);
  LambdaSearchResult r;
  r.info.range = range;
  r.info.resolution = resolution;
  r.info.tolerance = tolerance;

  const auto steps = static_cast<std::size_t>(std::floor((range.hi - range.lo) / resolution + 1e-9));
  r.best = objective(range.lo);
  for (std::size_t i = 1; i <= steps; ++i) {
    auto pt = objective(range.lo + static_cast<double>(i) * resolution);
    if (pt.throughput_pps > r.best.throughput_pps) r.best = pt;
  }
  r.info.grid_points = steps + 1;
  r.info.grid_incumbent = r.best.lambda;

  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::max(range.lo, r.best.lambda - resolution);
  double b = std::min(range.hi, r.best.lambda + resolution);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  auto fc = objective(c), fd = objective(d);
  r.info.refinement_trace = {{c, fc.throughput_pps}, {d, fd.throughput_pps}};
  while (b - a > tolerance) {
    if (fc.throughput_pps >= fd.throughput_pps) {
      b = d, d = c, fd = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
      r.info.refinement_trace.emplace_back(c, fc.throughput_pps);
    } else {
      a = c, c = d, fc = fd;
      d = a + kInvPhi * (b - a);
      fd = objective(d);
      r.info.refinement_trace.emplace_back(d, fd.throughput_pps);
    }
  }
  for (const auto& cand : {fc, fd}) {
    if (cand.throughput_pps > r.best.throughput_pps) r.best = cand;
  }
  return r;
}

struct OptimizationResult {
  ThroughputPoint best;           // (lambda*, theta*) jointly optimal
  LambdaSearchInfo lambda_grid_info;
  int theta_star = 0;
  double s_star = 0;              // packets/s
  ThroughputPoint b_l_star;       // max over lambda of S(lambda, M)
  ThroughputPoint s_c_star;       // carry-over bound at its own lambda_c*
  ThroughputPoint single_round_star;  // max over lambda of S(lambda, 1)
};

inline OptimizationResult optimize(int mpr_capability, const DerivedTimings& t, LambdaRange range,
                                   double resolution = 0.05, double tolerance = 1e-4) {
  if (mpr_capability < 1) throw ParameterError("mpr_capability", "must be at least 1");
  check_lambda_search(range, resolution, tolerance);

  auto joint = maximize_over_lambda(
      [&](double lambda) { return best_theta(build_round_model(lambda, mpr_capability), t); }, range, resolution,
      tolerance);
  auto bl = maximize_over_lambda(
      [&](double lambda) { return lower_bound(build_round_model(lambda, mpr_capability), t); }, range, resolution,
      tolerance);
  auto sc = maximize_over_lambda(
      [&](double lambda) { return carryover_upper_bound(build_round_model(lambda, mpr_capability), t); }, range,
      resolution, tolerance);
  auto single = maximize_over_lambda(
      [&](double lambda) { return evaluate_throughput(build_round_model(lambda, mpr_capability), 1, t); }, range,
      resolution, tolerance);

  OptimizationResult r;
  r.best = joint.best;
  r.lambda_grid_info = std::move(joint.info);
  r.theta_star = r.best.theta;
  r.s_star = r.best.throughput_pps;
  r.b_l_star = bl.best;
  r.s_c_star = sc.best;
  r.single_round_star = single.best;
  return r;
}

inline OptimizationResult optimize(int mpr_capability, const DerivedTimings& t) {
  return optimize(mpr_capability, t, default_lambda_range(mpr_capability));
}

}  // namespace mrc
