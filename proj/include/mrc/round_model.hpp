#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mrc/error.hpp"

namespace mrc {

/// One contention round under Poisson(lambda) attempts per generic slot,
/// conditioned on the slot being busy, with an AP that decodes up to M
/// simultaneous RTS frames.
struct RoundModel {
  double lambda = 0;
  int mpr_capability = 0;
  // x_pmf[k] = Pr{k winners}, k = 0..M. x_pmf[0] is the collision mass.
  std::vector<double> x_pmf;
  // Sum of x_pmf[1..M], carried separately because 1 - x_pmf[0] cancels
  // catastrophically once collisions dominate (large lambda, small M).
  double success_prob = 0;
  double p_idle = 0;
  double mean_idle_slots = 0;

  int m() const noexcept { return mpr_capability; }
};

inline void validate(const RoundModel& model) {
  if (!(model.lambda > 0.0)) throw ParameterError("lambda", "must be positive");
  if (model.mpr_capability < 1) throw ParameterError("mpr_capability", "must be at least 1");
  if (model.x_pmf.size() != static_cast<std::size_t>(model.mpr_capability) + 1)
    throw ParameterError("x_pmf", "must have M+1 entries");
  double total = 0;
  for (double p : model.x_pmf) {
    if (!(p >= 0.0)) throw ParameterError("x_pmf", "negative or NaN probability mass");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("x_pmf", "does not sum to one");
  if (!(model.success_prob > 0.0)) throw ParameterError("x_pmf", "no winner mass");
}

inline RoundModel build_round_model(double lambda, int mpr_capability) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda", "must be positive and finite");
  if (mpr_capability < 1) throw ParameterError("mpr_capability", "must be at least 1");

  RoundModel model;
  model.lambda = lambda;
  model.mpr_capability = mpr_capability;
  model.x_pmf.assign(static_cast<std::size_t>(mpr_capability) + 1, 0.0);

  // lambda^k / (k! (e^lambda - 1)) by multiplicative recurrence.
  double term = 1.0 / std::expm1(lambda);
  double success = 0;
  for (int k = 1; k <= mpr_capability; ++k) {
    term *= lambda / k;
    model.x_pmf[k] = term;
    success += term;
  }
  model.success_prob = success;
  model.x_pmf[0] = std::max(0.0, 1.0 - success);
  model.p_idle = std::exp(-lambda);
  model.mean_idle_slots = 1.0 / std::expm1(lambda);  // e^-l / (1 - e^-l)
  return model;
}

inline double expected_winners(const RoundModel& model) {
  double mean = 0;
  for (int k = 1; k <= model.mpr_capability; ++k) mean += k * model.x_pmf[k];
  return mean;
}

/// lambda / (1 - e^-lambda) * sum_{k<M} lambda^k e^-lambda / k!, reading the
/// printed "x^-lambda" as e^-lambda. Independent of x_pmf; kept as a cross-check.
inline double expected_winners_closed_form(double lambda, int mpr_capability) {
  double term = std::exp(-lambda);
  double cdf = 0;
  for (int k = 0; k < mpr_capability; ++k) {
    cdf += term;
    term *= lambda / (k + 1);
  }
  return lambda / -std::expm1(-lambda) * cdf;
}

}  // namespace mrc
