#pragma once

// Literal evaluations of the published closed forms for the partial-sum,
// stop-time and stopped-sum distributions. They are cross-checks only; the
// renewal recursion in contention.hpp is the reference. Known deviations:
//  - sum_pmf_closed_form treats each round's winner count as an untruncated
//    zero-truncated Poisson, so it is exact only for s <= M.
//  - stopped_sum_pmf_closed_form inherits the same defect for s > M and has
//    unbounded support.

#include <cmath>
#include <vector>

#include "mrc/contention.hpp"
#include "mrc/error.hpp"
#include "mrc/round_model.hpp"

namespace mrc::closed_form {

using real = long double;

/// sum_{j > M} lambda^j / j!, evaluated as the complement e^lambda - sum_{j<=M}.
inline real poisson_tail(double lambda, int m) {
  real term = 1, partial = 0;
  for (int j = 0; j <= m; ++j) {
    partial += term;
    term *= static_cast<real>(lambda) / (j + 1);
  }
  return std::exp(static_cast<real>(lambda)) - partial;
}

inline real binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return std::exp(std::lgamma(static_cast<real>(n) + 1) - std::lgamma(static_cast<real>(k) + 1) -
                  std::lgamma(static_cast<real>(n - k) + 1));
}

// lambda^s l^s / s!
inline real scaled_power(double lambda, int l, int s) {
  if (s == 0) return 1;
  return std::exp(s * std::log(static_cast<real>(lambda) * l) - std::lgamma(static_cast<real>(s) + 1));
}

// sum_{l=1}^{n} C(n,l) (T-1)^{n-l} l^s lambda^s / s!
inline real binomial_moment(double lambda, real tail, int n, int s) {
  real acc = 0;
  for (int l = 1; l <= n; ++l) acc += binomial(n, l) * std::pow(tail - 1, static_cast<real>(n - l)) * scaled_power(lambda, l, s);
  return acc;
}

// sum_{l=1}^{n} C(n,l) base^{n-l} w[l], walking l downward so each
// coefficient follows from the previous one by a multiply.
inline real binomial_mix(int n, real base, const std::vector<real>& w) {
  real coeff = 1, acc = 0;
  for (int l = n; l >= 1; --l) {
    acc += coeff * w[static_cast<std::size_t>(l)];
    coeff *= base * l / (n - l + 1);
  }
  return acc;
}

/// Pr{X_1 + ... + X_n = s}.
inline double sum_pmf_closed_form(const RoundModel& model, int n, int s) {
  if (n < 1) throw ParameterError("n", "must be at least 1");
  if (s < 0) throw ParameterError("s", "must be non-negative");
  const real tail = poisson_tail(model.lambda, model.mpr_capability);
  const real denom = std::expm1(static_cast<real>(model.lambda));
  if (s == 0) return static_cast<double>(std::pow(tail / denom, static_cast<real>(n)));
  return static_cast<double>(binomial_moment(model.lambda, tail, n, s) / std::pow(denom, static_cast<real>(n)));
}

/// Pr{N* = n} for the threshold rule.
inline double stop_time_pmf_closed_form(const RoundModel& model, int theta, int n) {
  check_theta(model, theta);
  if (n < 1) throw ParameterError("n", "must be at least 1");
  const int m = model.mpr_capability;
  const auto lambda = static_cast<real>(model.lambda);
  const real denom = std::expm1(lambda);
  const real tail = poisson_tail(model.lambda, m);

  // poisson_terms[i] = lambda^i / i!
  std::vector<real> terms(static_cast<std::size_t>(m) + 1);
  terms[0] = 1;
  for (int i = 1; i <= m; ++i) terms[i] = terms[i - 1] * lambda / i;
  auto upper = [&](int from) {
    real acc = 0;
    for (int i = std::max(from, 0); i <= m; ++i) acc += terms[i];
    return acc;
  };

  if (n == 1) return static_cast<double>(upper(theta) / denom);
  const real dn = std::pow(denom, static_cast<real>(n));
  real value = upper(theta) / dn * std::pow(tail, static_cast<real>(n - 1));
  real rest = 0;
  for (int s = 1; s <= theta - 1; ++s) rest += upper(theta - s) * binomial_moment(model.lambda, tail, n - 1, s);
  return static_cast<double>(value + rest / dn);
}

/// E[N*] via the published series, truncated after `terms` outer terms.
inline double expected_rounds_series(const RoundModel& model, int theta, int terms) {
  check_theta(model, theta);
  const int m = model.mpr_capability;
  const auto lambda = static_cast<real>(model.lambda);
  const real denom = std::expm1(lambda);
  const real tail = poisson_tail(model.lambda, m);

  real stop_first = 0;
  for (int k = theta; k <= m; ++k) stop_first += model.x_pmf[k];
  const real first = stop_first / std::pow(1 - tail / denom, static_cast<real>(2));

  // k_sum[l] = sum_k lambda^k/k! sum_s (l lambda)^s/s!, independent of n.
  std::vector<real> k_sum(static_cast<std::size_t>(terms) + 1, 0);
  for (int l = 1; l <= terms; ++l) {
    real lk = 1;
    for (int k = 1; k <= m; ++k) {
      lk *= lambda / k;
      real s_sum = 0;
      for (int s = std::max(theta - k, 1); s <= theta - 1; ++s) s_sum += scaled_power(model.lambda, l, s);
      k_sum[l] += lk * s_sum;
    }
  }

  real series = 0;
  for (int n = 1; n <= terms; ++n) {
    series += (n + 1) / std::pow(denom, static_cast<real>(n + 1)) * binomial_mix(n, tail - 1, k_sum);
  }
  return static_cast<double>(first + series);
}

/// Pr{sum_{i<=N*} X_i = s}, outer series truncated after `terms` terms.
inline double stopped_sum_pmf_closed_form(const RoundModel& model, int theta, int s, int terms) {
  check_theta(model, theta);
  if (s < theta) return 0.0;
  const auto lambda = static_cast<real>(model.lambda);
  const real denom = std::expm1(lambda);
  const real tail = poisson_tail(model.lambda, model.mpr_capability);

  // t_sum[l] = sum_{t<theta} C(s,t) l^t, independent of n.
  std::vector<real> t_sum(static_cast<std::size_t>(terms) + 1, 0);
  for (int l = 1; l <= terms; ++l)
    for (int t = 1; t <= theta - 1; ++t) t_sum[l] += binomial(s, t) * std::pow(static_cast<real>(l), static_cast<real>(t));

  real series = 0;
  for (int n = 1; n <= terms; ++n) {
    series += binomial_mix(n, tail - 1, t_sum) / std::pow(denom, static_cast<real>(n));
  }
  const real lead = std::exp(s * std::log(lambda) - std::lgamma(static_cast<real>(s) + 1)) / denom;
  return static_cast<double>(lead * (1 / static_cast<real>(model.success_prob) + series));
}

}  // namespace mrc::closed_form
