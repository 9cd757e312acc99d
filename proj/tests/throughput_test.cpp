#include <gtest/gtest.h>

#include <cmath>

#include "mrc/throughput.hpp"

namespace mrc {
namespace {

const DerivedTimings kTable54 = derive_timings(PhyMacParams{});

DerivedTimings table_at(double data_rate) {
  PhyMacParams p;
  p.data_rate_bps = data_rate;
  return derive_timings(p);
}

// Independent single-round evaluator: stop at the first round with a winner.
// Payload is E[X | X >= 1]; rounds are geometric with success Pr{X >= 1}.
double single_round_pps(double lambda, int m, const DerivedTimings& t) {
  double weighted = 0, mass = 0;
  for (int k = 1; k <= m; ++k) {
    const double w = std::exp(k * std::log(lambda) - std::lgamma(k + 1.0));
    weighted += k * w;
    mass += w;
  }
  const double success = mass / std::expm1(lambda);
  const double idle = std::exp(-lambda) / (1 - std::exp(-lambda));
  return weighted / mass / ((1 / success) * (t.t_rts_us + idle * t.slot_us) + t.b_us) * 1e6;
}

// Classic single-packet reception: one success per busy slot w.p. lambda / (e^lambda - 1).
double spr_pps(double lambda, const DerivedTimings& t) {
  const double success = lambda / (std::exp(lambda) - 1);
  const double idle = std::exp(-lambda) / (1 - std::exp(-lambda));
  return 1.0 / ((t.t_rts_us + idle * t.slot_us) / success + t.b_us) * 1e6;
}

TEST(Throughput, ThetaOneIsSingleRound) {
  for (double lambda : {0.3, 1.0, 3.0, 6.0, 12.0})
    for (int m : {1, 2, 5, 10, 30}) {
      const double s = evaluate_throughput(build_round_model(lambda, m), 1, kTable54).throughput_pps;
      EXPECT_NEAR(s, single_round_pps(lambda, m, kTable54), 1e-9 * s) << lambda << " " << m;
    }
}

TEST(Throughput, SinglePacketReception) {
  for (double lambda : {0.1, 0.4, 1.0, 2.5}) {
    const double s = evaluate_throughput(build_round_model(lambda, 1), 1, kTable54).throughput_pps;
    EXPECT_NEAR(s, spr_pps(lambda, kTable54), 1e-9 * s);
  }
}

TEST(Throughput, MultiRoundGainAtLambdaSix) {
  const auto model = build_round_model(6.0, 10);
  const double ratio = evaluate_throughput(model, 1, kTable54).throughput_pps / evaluate_throughput(model, 9, kTable54).throughput_pps;
  EXPECT_NEAR(ratio, 0.72, 0.03);
}

TEST(Throughput, PointInvariants) {
  for (double lambda : {0.2, 1.0, 6.0, 25.0})
    for (int m : {1, 3, 10}) {
      const auto model = build_round_model(lambda, m);
      for (int theta = 1; theta <= m; ++theta) {
        const auto pt = evaluate_throughput(model, theta, kTable54);
        const double duration = pt.expected_rounds * (kTable54.t_rts_us + model.mean_idle_slots * kTable54.slot_us) + kTable54.b_us;
        EXPECT_NEAR(pt.throughput_pps, pt.expected_payload_packets / duration * 1e6, 1e-12 * pt.throughput_pps);
        EXPECT_GT(pt.throughput_pps, 0.0);
        EXPECT_LE(pt.throughput_pps, m / kTable54.b_us * 1e6);
        EXPECT_EQ(pt.throughput_mbps, pt.throughput_pps * kTable54.payload_bits * 1e-6);
      }
    }
}

TEST(LowerBound, IsThetaEqualsM) {
  for (double lambda : {0.5, 6.0})
    for (int m : {1, 4, 10}) {
      const auto model = build_round_model(lambda, m);
      const auto bl = lower_bound(model, kTable54);
      const auto direct = evaluate_throughput(model, m, kTable54);
      EXPECT_EQ(bl.throughput_pps, direct.throughput_pps);
      EXPECT_NEAR(bl.expected_payload_packets, m, 1e-9);
      EXPECT_LE(bl.throughput_pps, best_theta(model, kTable54).throughput_pps);
    }
}

TEST(LowerBound, CoincidesWithMaximumAtSixMbps) {
  const auto model = build_round_model(6.0, 10);
  const auto t = table_at(6e6);
  EXPECT_EQ(lower_bound(model, t).throughput_pps, best_theta(model, t).throughput_pps);
}

TEST(LowerBound, SinglePacketChannel) {
  const auto model = build_round_model(0.8, 1);
  EXPECT_EQ(lower_bound(model, kTable54).throughput_pps, evaluate_throughput(model, 1, kTable54).throughput_pps);
}

TEST(CarryOver, DominatesEveryThreshold) {
  for (double lambda : {0.5, 1.0, 3.0, 6.0, 12.0})
    for (int m : {1, 2, 4, 10, 20}) {
      const auto model = build_round_model(lambda, m);
      const double sc = carryover_upper_bound(model, kTable54).throughput_pps;
      for (const auto& pt : theta_profile(model, kTable54)) EXPECT_GE(sc * (1 + 1e-12), pt.throughput_pps);
    }
}

TEST(CarryOver, SinglePacketChannel) {
  const double lambda = 0.9;
  const double ex = lambda / std::expm1(lambda);
  const double overhead = kTable54.t_rts_us + kTable54.slot_us / std::expm1(lambda);
  EXPECT_NEAR(carryover_upper_bound(build_round_model(lambda, 1), kTable54).throughput_pps,
              1.0 / ((1 / ex) * overhead + kTable54.b_us) * 1e6, 1e-9);
}

TEST(Optimize, SinglePacketChannelMatchesSprOptimum) {
  const auto r = optimize(1, kTable54);
  EXPECT_EQ(r.theta_star, 1);
  // Dense scan of the independent SPR evaluator.
  double best = 0;
  for (double lambda = 0.01; lambda <= 3.0; lambda += 1e-4) best = std::max(best, spr_pps(lambda, kTable54));
  EXPECT_NEAR(r.s_star, best, 1e-7 * best);
  EXPECT_NEAR(r.s_star, r.single_round_star.throughput_pps, 1e-12 * best);
}

TEST(Optimize, TenPacketsLowerBoundGap) {
  const auto r = optimize(10, kTable54);
  EXPECT_GE(r.s_star, r.b_l_star.throughput_pps);
  EXPECT_LT(1 - r.b_l_star.throughput_pps / r.s_star, 0.02);
  EXPECT_LE(r.theta_star, 10);
  RecordProperty("lambda_star", std::to_string(r.best.lambda));
  RecordProperty("theta_star", r.theta_star);
  RecordProperty("b_l_gap", std::to_string(1 - r.b_l_star.throughput_pps / r.s_star));
}

TEST(Optimize, LargeMStopsWellBelowM) {
  const auto r = optimize(40, kTable54);
  EXPECT_LT(r.theta_star, 36);
}

TEST(Optimize, OrderingChain) {
  for (int m : {1, 2, 3, 5, 8, 12}) {
    const auto r = optimize(m, kTable54);
    EXPECT_LE(r.b_l_star.throughput_pps, r.s_star * (1 + 1e-9));
    EXPECT_LE(r.s_star, r.s_c_star.throughput_pps * (1 + 1e-9));
    EXPECT_LE(r.single_round_star.throughput_pps, r.s_star * (1 + 1e-9));
    for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
      const auto model = build_round_model(lambda, m);
      EXPECT_LE(lower_bound(model, kTable54).throughput_pps, best_theta(model, kTable54).throughput_pps);
      EXPECT_LE(best_theta(model, kTable54).throughput_pps, r.s_star * (1 + 1e-12));
    }
  }
}

TEST(Optimize, RefinementOnlyImprovesOnGrid) {
  const auto r = optimize(6, kTable54);
  const auto grid = best_theta(build_round_model(r.lambda_grid_info.grid_incumbent, 6), kTable54);
  EXPECT_GE(r.s_star, grid.throughput_pps);
  EXPECT_LT(std::abs(r.best.lambda - r.lambda_grid_info.grid_incumbent), r.lambda_grid_info.resolution + 1e-12);
  EXPECT_FALSE(r.lambda_grid_info.refinement_trace.empty());
}

TEST(Optimize, Deterministic) {
  const auto a = optimize(7, kTable54), b = optimize(7, kTable54);
  EXPECT_EQ(a.s_star, b.s_star);
  EXPECT_EQ(a.best.lambda, b.best.lambda);
  EXPECT_EQ(a.s_c_star.lambda, b.s_c_star.lambda);
}

TEST(Optimize, RejectsBadRanges) {
  EXPECT_THROW(optimize(4, kTable54, {0.0, 10.0}), ParameterError);
  EXPECT_THROW(optimize(4, kTable54, {5.0, 1.0}), ParameterError);
  EXPECT_THROW(optimize(4, kTable54, {1.0, 250.0}), ParameterError);
  EXPECT_THROW(optimize(4, kTable54, {1.0, 2.0}, 0.0), ParameterError);
  EXPECT_THROW(optimize(0, kTable54), ParameterError);
}

TEST(Optimize, DefaultRangeGrowsWithM) {
  EXPECT_EQ(default_lambda_range(10).hi, 30.0);
  EXPECT_EQ(default_lambda_range(80).hi, 120.0);
  EXPECT_EQ(default_lambda_range(1000).hi, kMaxLambda);
}

}  // namespace
}  // namespace mrc
