// Prints S(6, theta) for theta = 1..10 at 54 Mbps and 6 Mbps, next to the
// threshold the one-stage look-ahead rule picks at the optimal rate of return.

#include <cstdio>

#include "mrc/mrc.hpp"

int main() {
  for (double rate : {54e6, 6e6}) {
    mrc::PhyMacParams params;
    params.data_rate_bps = rate;
    const auto timings = mrc::derive_timings(params);
    const auto model = mrc::build_round_model(6.0, 10);

    std::printf("data rate %.0f Mbps\n", rate / 1e6);
    for (const auto& pt : mrc::theta_profile(model, timings))
      std::printf("  theta=%2d  S=%8.3f Mbps  E[N*]=%.4f\n", pt.theta, pt.throughput_mbps, pt.expected_rounds);

    const auto policy = mrc::optimal_threshold_by_search(model, timings);
    const auto sla = mrc::one_stage_lookahead_threshold(model, timings, policy.rate_of_return);
    std::printf("  line search theta*=%d, look-ahead theta=%d\n", policy.theta, sla.policy.theta);
  }
}
