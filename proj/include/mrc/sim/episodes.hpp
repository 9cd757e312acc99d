#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "mrc/contention.hpp"
#include "mrc/error.hpp"
#include "mrc/round_model.hpp"
#include "mrc/sim/report.hpp"
#include "mrc/timing.hpp"

namespace mrc::sim {

namespace detail {

// Number of attempts in a busy slot: Poisson(lambda) conditioned on >= 1.
// Draws from the attempt process itself rather than from x_pmf so the sampler
// stays independent of the analytic code it validates.
class BusySlotAttempts {
 public:
  explicit BusySlotAttempts(double lambda) : lambda_(lambda), poisson_(lambda), first_(1.0 / std::expm1(lambda)) {}

  template <class Urbg>
  std::int64_t operator()(Urbg& rng) {
    if (lambda_ >= 1.0) {
      for (;;) {
        const auto k = poisson_(rng);
        if (k > 0) return k;
      }
    }
    // Small lambda: sequential inversion, avoids many rejected zeros.
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double term = first_ * lambda_;  // Pr{k = 1}
    std::int64_t k = 1;
    while (u > term && term > 0.0) {
      u -= term;
      ++k;
      term *= lambda_ / static_cast<double>(k);
    }
    return k;
  }

 private:
  double lambda_;
  std::poisson_distribution<std::int64_t> poisson_;
  double first_;
};

}  // namespace detail

/// Monte Carlo of the abstract stopping process: per round, a geometric number
/// of idle slots and one busy slot whose attempts decode iff there are at most
/// M of them. Throughput is the ratio of mean payload to mean duration.
inline SimReport sample_stopping_episodes(const RoundModel& model, int theta, std::int64_t episodes,
                                          std::uint64_t seed, const DerivedTimings& t) {
  check_theta(model, theta);
  if (episodes < 1) throw ParameterError("episodes", "must be at least 1");

  const int m = model.mpr_capability;
  std::mt19937_64 rng(seed);
  std::geometric_distribution<std::int64_t> idle(-std::expm1(-model.lambda));
  detail::BusySlotAttempts attempts(model.lambda);

  IidRatio ratio;
  RunningStats rounds_stats, payload_stats;
  std::int64_t total_attempts = 0, total_slots = 0;

  for (std::int64_t e = 0; e < episodes; ++e) {
    std::int64_t rounds = 0, idle_slots = 0, winners = 0;
    while (winners < theta) {
      ++rounds;
      idle_slots += idle(rng);
      const auto k = attempts(rng);
      total_attempts += k;
      if (k <= m) winners += k;
    }
    total_slots += idle_slots + rounds;
    const double payload = static_cast<double>(std::min<std::int64_t>(winners, m));
    const double duration = static_cast<double>(rounds) * t.t_rts_us + static_cast<double>(idle_slots) * t.slot_us + t.b_us;
    ratio.add(payload, duration);
    rounds_stats.add(static_cast<double>(rounds));
    payload_stats.add(payload);
  }

  SimReport r;
  r.throughput_pps = ratio.ratio() * 1e6;
  r.throughput_mbps = r.throughput_pps * t.payload_bits * 1e-6;
  r.standard_error_pps = ratio.standard_error() * 1e6;
  r.measured_lambda = static_cast<double>(total_attempts) / static_cast<double>(total_slots);
  r.mean_rounds_per_super_round = rounds_stats.mean();
  r.standard_error_rounds = rounds_stats.standard_error();
  r.mean_payload_per_super_round = payload_stats.mean();
  r.standard_error_payload = payload_stats.standard_error();
  r.num_super_rounds = static_cast<std::uint64_t>(episodes);
  return r;
}

}  // namespace mrc::sim
