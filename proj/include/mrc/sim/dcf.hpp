#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "mrc/error.hpp"
#include "mrc/sim/report.hpp"
#include "mrc/timing.hpp"

namespace mrc::sim {

struct DcfConfig {
  int num_stations = 100;
  int mpr_capability = 10;
  int theta = 10;
  std::int64_t min_window = 16;
  std::int64_t backoff_factor = 2;
  std::optional<int> max_backoff_stage;  // unbounded when empty
  std::int64_t warmup_slots = 5000;
  std::int64_t measured_slots = 100000;
  std::uint64_t rng_seed = 1;
};

inline void validate(const DcfConfig& c) {
  if (c.num_stations < 1) throw ParameterError("num_stations", "must be at least 1");
  if (c.mpr_capability < 1) throw ParameterError("mpr_capability", "must be at least 1");
  if (c.theta < 1 || c.theta > c.mpr_capability) throw ParameterError("theta", "must lie in 1..M");
  if (c.theta > c.num_stations) throw ParameterError("theta", "must not exceed num_stations");
  if (c.min_window < 1) throw ParameterError("min_window", "must be at least 1");
  if (c.backoff_factor < 1) throw ParameterError("backoff_factor", "must be at least 1");
  if (c.max_backoff_stage && *c.max_backoff_stage < 0) throw ParameterError("max_backoff_stage", "must be non-negative");
  if (c.warmup_slots < 0) throw ParameterError("warmup_slots", "must be non-negative");
  if (c.measured_slots < 1) throw ParameterError("measured_slots", "must be at least 1");
}

struct StationState {
  int stage = 0;
  std::int64_t window = 0;   // contention window the current counter was drawn from
  std::int64_t counter = 0;  // transmit when zero
  bool winner = false;       // won a round in the current super round; frozen until it ends
};

/// What happened in one generic slot.
struct SlotEvent {
  int attempts = 0;
  bool collision = false;           // more than M simultaneous RTS
  int new_winners = 0;
  bool super_round_ended = false;
  double duration_us = 0;
  std::vector<int> winners;         // accumulated winners, in arrival order, when the super round ends
  std::vector<int> selected;        // subset chosen for data transmission
};

/// Slot-by-slot saturated DCF with multi-round contention. Every backlogged,
/// non-winning station counts down once per generic slot (idle or busy) and
/// sends an RTS when its counter is zero.
class DcfSimulator {
 public:
  DcfSimulator(const DcfConfig& config, const DerivedTimings& timings)
      : config_(config), timings_(timings), rng_(config.rng_seed), stations_(static_cast<std::size_t>(config.num_stations)) {
    validate(config_);
    for (auto& s : stations_) redraw(s, 0);
  }

  const std::vector<StationState>& stations() const noexcept { return stations_; }
  const std::vector<int>& pending_winners() const noexcept { return winners_; }
  const DcfConfig& config() const noexcept { return config_; }

  std::int64_t window_for_stage(int stage) const {
    std::int64_t w = config_.min_window;
    for (int j = 0; j < stage; ++j) {
      if (w > std::numeric_limits<std::int64_t>::max() / config_.backoff_factor) return std::numeric_limits<std::int64_t>::max();
      w *= config_.backoff_factor;
    }
    return w;
  }

  SlotEvent step() {
    SlotEvent ev;
    transmitters_.clear();
    for (int i = 0; i < config_.num_stations; ++i) {
      const auto& s = stations_[i];
      if (!s.winner && s.counter == 0) transmitters_.push_back(i);
    }
    ev.attempts = static_cast<int>(transmitters_.size());

    for (auto& s : stations_)
      if (!s.winner && s.counter > 0) --s.counter;

    if (transmitters_.empty()) {
      ev.duration_us = timings_.slot_us;
      return ev;
    }

    ev.duration_us = timings_.t_rts_us;
    if (ev.attempts > config_.mpr_capability) {
      ev.collision = true;
      for (int i : transmitters_) backoff_after_failure(stations_[i]);
    } else {
      ev.new_winners = ev.attempts;
      for (int i : transmitters_) {
        stations_[i].winner = true;
        winners_.push_back(i);
      }
    }

    if (static_cast<int>(winners_.size()) >= config_.theta) end_super_round(ev);
    return ev;
  }

 private:
  void redraw(StationState& s, int stage) {
    if (config_.max_backoff_stage) stage = std::min(stage, *config_.max_backoff_stage);
    s.stage = stage;
    s.window = window_for_stage(stage);
    s.counter = std::uniform_int_distribution<std::int64_t>(0, s.window - 1)(rng_);
  }

  void backoff_after_failure(StationState& s) { redraw(s, s.stage + 1); }

  void end_super_round(SlotEvent& ev) {
    ev.super_round_ended = true;
    ev.duration_us += timings_.b_us;
    ev.winners = winners_;

    // Uniform choice of min(count, M) winners: partial Fisher-Yates.
    auto pool = winners_;
    const auto take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(config_.mpr_capability));
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = std::uniform_int_distribution<std::size_t>(i, pool.size() - 1)(rng_);
      std::swap(pool[i], pool[j]);
    }
    ev.selected.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));

    for (std::size_t i = 0; i < pool.size(); ++i) {
      auto& s = stations_[pool[i]];
      s.winner = false;
      if (i < take) {
        redraw(s, 0);
      } else {
        backoff_after_failure(s);  // virtual collision
      }
    }
    winners_.clear();
  }

  DcfConfig config_;
  DerivedTimings timings_;
  std::mt19937_64 rng_;
  std::vector<StationState> stations_;
  std::vector<int> winners_;
  std::vector<int> transmitters_;
};

/// Runs warmup_slots + measured_slots generic slots and reports statistics
/// over the measured part. A super round counts toward the measurement when
/// its final slot does.
inline SimReport run_dcf(const DcfConfig& config, const DerivedTimings& timings) {
  DcfSimulator sim(config, timings);
  BatchRatio ratio;
  RunningStats rounds_stats, payload_stats;
  std::int64_t attempts = 0;
  std::int64_t rounds_in_progress = 0;

  const std::int64_t total = config.warmup_slots + config.measured_slots;
  for (std::int64_t slot = 0; slot < total; ++slot) {
    const auto ev = sim.step();
    if (ev.attempts > 0) ++rounds_in_progress;
    if (slot < config.warmup_slots) {
      if (ev.super_round_ended) rounds_in_progress = 0;
      continue;
    }
    const std::int64_t measured = slot - config.warmup_slots;
    const int batch = static_cast<int>(measured * kBatches / config.measured_slots);
    attempts += ev.attempts;
    const double payload = ev.super_round_ended ? static_cast<double>(ev.selected.size()) : 0.0;
    ratio.add(batch, payload, ev.duration_us);
    if (ev.super_round_ended) {
      rounds_stats.add(static_cast<double>(rounds_in_progress));
      payload_stats.add(payload);
      rounds_in_progress = 0;
    }
  }

  SimReport r;
  r.throughput_pps = ratio.ratio() * 1e6;
  r.throughput_mbps = r.throughput_pps * timings.payload_bits * 1e-6;
  r.standard_error_pps = ratio.standard_error() * 1e6;
  r.measured_lambda = static_cast<double>(attempts) / static_cast<double>(config.measured_slots);
  r.mean_rounds_per_super_round = rounds_stats.mean();
  r.standard_error_rounds = rounds_stats.standard_error();
  r.mean_payload_per_super_round = payload_stats.mean();
  r.standard_error_payload = payload_stats.standard_error();
  r.num_super_rounds = rounds_stats.count();
  return r;
}

}  // namespace mrc::sim
