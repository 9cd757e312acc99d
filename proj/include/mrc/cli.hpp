#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mrc/config.hpp"
#include "mrc/contention.hpp"
#include "mrc/csv.hpp"
#include "mrc/error.hpp"
#include "mrc/round_model.hpp"
#include "mrc/sim/dcf.hpp"
#include "mrc/throughput.hpp"
#include "mrc/timing.hpp"

namespace mrc::cli {

enum class Mode { pmf, throughput_surface, optimize, scaling, simulate, compare, bounds };

inline constexpr std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::pmf: return "pmf";
    case Mode::throughput_surface: return "throughput-surface";
    case Mode::optimize: return "optimize";
    case Mode::scaling: return "scaling";
    case Mode::simulate: return "simulate";
    case Mode::compare: return "compare";
    case Mode::bounds: return "bounds";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  for (auto m : {Mode::pmf, Mode::throughput_surface, Mode::optimize, Mode::scaling, Mode::simulate, Mode::compare,
                 Mode::bounds})
    if (mode_name(m) == s) return m;
  throw ParameterError("mode", "unknown mode '" + std::string(s) + "'");
}

/// lo:step:hi, inclusive of hi up to rounding.
struct RealRange {
  double lo = 0, step = 0, hi = 0;

  std::vector<double> values() const {
    std::vector<double> out;
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
};

struct SweepSpec {
  Mode mode = Mode::optimize;
  std::vector<int> m_list{10};
  RealRange lambda{0.05, 0.05, 30.0};
  bool lambda_given = false;      // otherwise the per-M default search range applies
  int theta_lo = 0, theta_hi = 0;  // 0 means "1" and "M" respectively
  double lambda_resolution = 0.05;
  double lambda_tolerance = 1e-4;
  int seeds = 1;
  sim::DcfConfig dcf{};           // num_stations, backoff and slot counts; M/theta filled per run
  std::string output;             // empty: write to the supplied stream
};

inline std::vector<double> split_numbers(std::string_view field, std::string_view text, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    const auto piece = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    out.push_back(parse_double(field, detail::trim(piece)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

inline int to_int(std::string_view field, double v) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ParameterError(std::string(field), "expected an integer");
  return static_cast<int>(v);
}

inline RealRange parse_real_range(std::string_view field, std::string_view text) {
  const auto parts = split_numbers(field, text, ':');
  RealRange r;
  if (parts.size() == 1) {
    r = {parts[0], 1.0, parts[0]};
  } else if (parts.size() == 3) {
    r = {parts[0], parts[1], parts[2]};
  } else {
    throw ParameterError(std::string(field), "expected VALUE or LO:STEP:HI");
  }
  if (!(r.step > 0) || !(r.lo <= r.hi)) throw ParameterError(std::string(field), "empty or malformed range");
  return r;
}

/// "a:b" (inclusive), "a,b,c" or a single value.
inline std::vector<int> parse_int_list(std::string_view field, std::string_view text) {
  std::vector<int> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split_numbers(field, text, ':');
    if (parts.size() != 2) throw ParameterError(std::string(field), "expected LO:HI");
    const int lo = to_int(field, parts[0]), hi = to_int(field, parts[1]);
    if (lo > hi) throw ParameterError(std::string(field), "empty range");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    for (double v : split_numbers(field, text, ',')) out.push_back(to_int(field, v));
  }
  return out;
}

/// Splits a key = value config into PHY parameters and simulator settings.
/// Unknown keys are rejected.
inline void apply_config(const KeyValues& kv, PhyMacParams& params, sim::DcfConfig& dcf) {
  KeyValues phy;
  for (const auto& [key, value] : kv) {
    if (is_phy_param_key(key)) {
      phy.emplace(key, value);
    } else if (key == "num_stations") {
      dcf.num_stations = to_int(key, parse_double(key, value));
    } else if (key == "min_window") {
      dcf.min_window = to_int(key, parse_double(key, value));
    } else if (key == "backoff_factor") {
      dcf.backoff_factor = to_int(key, parse_double(key, value));
    } else if (key == "max_backoff_stage") {
      dcf.max_backoff_stage = to_int(key, parse_double(key, value));
    } else if (key == "warmup_slots") {
      dcf.warmup_slots = to_int(key, parse_double(key, value));
    } else if (key == "measured_slots") {
      dcf.measured_slots = to_int(key, parse_double(key, value));
    } else if (key == "rng_seed") {
      dcf.rng_seed = static_cast<std::uint64_t>(to_int(key, parse_double(key, value)));
    } else {
      throw ParameterError(key, "unknown configuration key");
    }
  }
  params = apply_phy_params(phy, params);
}

namespace detail {

inline void validate_spec(const SweepSpec& spec) {
  if (spec.m_list.empty()) throw ParameterError("m", "no MPR capability given");
  for (int m : spec.m_list)
    if (m < 1) throw ParameterError("m", "must be at least 1");
  if (spec.lambda_given) {
    if (!(spec.lambda.lo > 0.0) || spec.lambda.hi > kMaxLambda)
      throw ParameterError("lambda", "must lie in (0, 200]");
  }
  if (spec.seeds < 1) throw ParameterError("seeds", "must be at least 1");
  if (spec.theta_lo < 0 || spec.theta_hi < 0 || (spec.theta_hi && spec.theta_lo > spec.theta_hi))
    throw ParameterError("theta", "malformed range");
}

inline int theta_or(int requested, int fallback, int m) {
  const int theta = requested ? requested : fallback;
  if (theta < 1 || theta > m) throw ParameterError("theta", "must lie in 1..M (M = " + std::to_string(m) + ")");
  return theta;
}

inline void write_audit(CsvWriter& csv, const SweepSpec& spec, const PhyMacParams& params) {
  csv.meta("mode", mode_name(spec.mode));
  std::string ms;
  for (int m : spec.m_list) ms += (ms.empty() ? "" : ",") + std::to_string(m);
  csv.meta("m", ms);
  if (spec.lambda_given) {
    csv.meta("lambda", CsvWriter::format(spec.lambda.lo) + ":" + CsvWriter::format(spec.lambda.step) + ":" +
                           CsvWriter::format(spec.lambda.hi));
  } else {
    csv.meta("lambda", "default");
  }
  csv.meta("theta", std::to_string(spec.theta_lo) + ":" + std::to_string(spec.theta_hi));
  csv.meta("lambda_resolution", spec.lambda_resolution);
  csv.meta("lambda_tolerance", spec.lambda_tolerance);
  csv.meta("seeds", std::to_string(spec.seeds));
  csv.meta("num_stations", std::to_string(spec.dcf.num_stations));
  csv.meta("min_window", std::to_string(spec.dcf.min_window));
  csv.meta("backoff_factor", std::to_string(spec.dcf.backoff_factor));
  csv.meta("max_backoff_stage",
           spec.dcf.max_backoff_stage ? std::to_string(*spec.dcf.max_backoff_stage) : std::string("unbounded"));
  csv.meta("warmup_slots", std::to_string(spec.dcf.warmup_slots));
  csv.meta("measured_slots", std::to_string(spec.dcf.measured_slots));
  csv.meta("rng_seed", std::to_string(spec.dcf.rng_seed));
  for (const auto& [key, value] : to_key_values(params)) csv.meta(key, value);
}

inline LambdaRange search_range(const SweepSpec& spec, int m) {
  return spec.lambda_given ? LambdaRange{spec.lambda.lo, spec.lambda.hi} : default_lambda_range(m);
}

inline void run_pmf(const SweepSpec& spec, const DerivedTimings&, CsvWriter& csv) {
  const int m = spec.m_list.front();
  const auto model = build_round_model(spec.lambda.lo, m);
  const int theta = theta_or(spec.theta_lo, m, m);
  const auto a = analyze_stopped_process(model, theta);
  csv.meta("expected_winners", expected_winners(model));
  csv.meta("expected_rounds", a.expected_rounds);
  csv.meta("expected_payload", a.expected_payload);
  csv.meta("stop_time_residual", a.stop_time_residual);
  csv.header({"distribution", "value", "probability"});
  for (int k = 0; k <= m; ++k) csv.row({std::string("winners"), std::int64_t{k}, model.x_pmf[k]});
  for (std::size_t n = 0; n < a.stop_time_pmf.size(); ++n)
    csv.row({std::string("stop_time"), static_cast<std::int64_t>(n + 1), a.stop_time_pmf[n]});
  for (int s = a.stopped_sum_first(); s <= a.stopped_sum_last(); ++s)
    csv.row({std::string("stopped_sum"), std::int64_t{s}, a.stopped_sum_at(s)});
}

inline void run_surface(const SweepSpec& spec, const DerivedTimings& t, CsvWriter& csv) {
  csv.header({"M", "lambda", "theta", "S_pps", "S_mbps"});
  for (int m : spec.m_list) {
    const int lo = theta_or(spec.theta_lo, 1, m), hi = theta_or(spec.theta_hi, m, m);
    for (double lambda : spec.lambda.values()) {
      const auto model = build_round_model(lambda, m);
      for (int theta = lo; theta <= hi; ++theta) {
        const auto pt = evaluate_throughput(model, theta, t);
        csv.row({std::int64_t{m}, lambda, std::int64_t{theta}, pt.throughput_pps, pt.throughput_mbps});
      }
    }
  }
}

inline void run_optimize(const SweepSpec& spec, const DerivedTimings& t, CsvWriter& csv, bool scaling) {
  if (scaling) {
    csv.meta("units", "packets/s");
    csv.header({"M", "S_star", "B_L_star", "S_c_star", "S_single_round_star", "theta_star", "lambda_star"});
  } else {
    csv.header({"M", "lambda_star", "theta_star", "S_star_pps", "S_star_mbps", "B_L_star_pps", "lambda_B_L",
                "S_c_star_pps", "lambda_c_star", "S_single_round_star_pps", "ordering_ok"});
  }
  for (int m : spec.m_list) {
    const auto r = optimize(m, t, search_range(spec, m), spec.lambda_resolution, spec.lambda_tolerance);
    if (scaling) {
      csv.row({std::int64_t{m}, r.s_star, r.b_l_star.throughput_pps, r.s_c_star.throughput_pps,
               r.single_round_star.throughput_pps, std::int64_t{r.theta_star}, r.best.lambda});
    } else {
      const bool ordered = r.b_l_star.throughput_pps <= r.s_star * (1 + 1e-9) &&
                           r.s_star <= r.s_c_star.throughput_pps * (1 + 1e-9);
      csv.row({std::int64_t{m}, r.best.lambda, std::int64_t{r.theta_star}, r.s_star, r.best.throughput_mbps,
               r.b_l_star.throughput_pps, r.b_l_star.lambda, r.s_c_star.throughput_pps, r.s_c_star.lambda,
               r.single_round_star.throughput_pps, std::string(ordered ? "true" : "false")});
    }
  }
}

inline void run_bounds(const SweepSpec& spec, const DerivedTimings& t, CsvWriter& csv) {
  csv.header({"M", "lambda", "theta_star", "S_theta_star_pps", "B_L_pps", "S_c_pps"});
  for (int m : spec.m_list) {
    for (double lambda : spec.lambda.values()) {
      const auto model = build_round_model(lambda, m);
      const auto best = best_theta(model, t);
      csv.row({std::int64_t{m}, lambda, std::int64_t{best.theta}, best.throughput_pps,
               lower_bound(model, t).throughput_pps, carryover_upper_bound(model, t).throughput_pps});
    }
  }
}

inline sim::DcfConfig dcf_for(const SweepSpec& spec, int m, int seed_index) {
  auto cfg = spec.dcf;
  cfg.mpr_capability = m;
  cfg.theta = theta_or(spec.theta_lo, m, m);
  cfg.rng_seed = spec.dcf.rng_seed + static_cast<std::uint64_t>(seed_index);
  return cfg;
}

inline void run_simulate(const SweepSpec& spec, const DerivedTimings& t, CsvWriter& csv) {
  csv.header({"M", "theta", "seed", "lambda_hat", "S_pps", "S_mbps", "se_pps", "mean_rounds", "mean_payload",
              "super_rounds"});
  for (int m : spec.m_list) {
    for (int i = 0; i < spec.seeds; ++i) {
      const auto cfg = dcf_for(spec, m, i);
      const auto r = sim::run_dcf(cfg, t);
      csv.row({std::int64_t{m}, std::int64_t{cfg.theta}, static_cast<std::int64_t>(cfg.rng_seed), r.measured_lambda,
               r.throughput_pps, r.throughput_mbps, r.standard_error_pps, r.mean_rounds_per_super_round,
               r.mean_payload_per_super_round, static_cast<std::int64_t>(r.num_super_rounds)});
    }
  }
}

inline void run_compare(const SweepSpec& spec, const DerivedTimings& t, CsvWriter& csv) {
  csv.header({"M", "theta", "seed", "lambda_hat", "S_sim_pps", "se_sim_pps", "S_analytic_pps", "rel_error"});
  for (int m : spec.m_list) {
    double sum_sim = 0, sum_ana = 0, sum_lambda = 0, sum_var = 0;
    int theta = 0;
    for (int i = 0; i < spec.seeds; ++i) {
      const auto cfg = dcf_for(spec, m, i);
      theta = cfg.theta;
      const auto r = sim::run_dcf(cfg, t);
      const auto ana = evaluate_throughput(build_round_model(r.measured_lambda, m), cfg.theta, t);
      const double rel = (r.throughput_pps - ana.throughput_pps) / ana.throughput_pps;
      csv.row({std::int64_t{m}, std::int64_t{cfg.theta}, static_cast<std::int64_t>(cfg.rng_seed), r.measured_lambda,
               r.throughput_pps, r.standard_error_pps, ana.throughput_pps, rel});
      sum_sim += r.throughput_pps;
      sum_ana += ana.throughput_pps;
      sum_lambda += r.measured_lambda;
      sum_var += r.standard_error_pps * r.standard_error_pps;
    }
    const double n = spec.seeds;
    csv.row({std::int64_t{m}, std::int64_t{theta}, std::string("mean"), sum_lambda / n, sum_sim / n,
             std::sqrt(sum_var) / n, sum_ana / n, (sum_sim - sum_ana) / sum_ana});
  }
}

}  // namespace detail

/// Runs one sweep and writes its CSV to `out` (or to spec.output when set).
/// Returns 0 on success and 2 on a parameter error, reported on `err`.
inline int run_command(const SweepSpec& spec, const PhyMacParams& params, std::ostream& out, std::ostream& err) {
  try {
    detail::validate_spec(spec);
    const auto timings = derive_timings(params);
    std::ofstream file;
    if (!spec.output.empty()) {
      file.open(spec.output);
      if (!file) throw ParameterError("out", "cannot open '" + spec.output + "' for writing");
    }
    std::ostream& sink = spec.output.empty() ? out : file;
    CsvWriter csv(sink);
    detail::write_audit(csv, spec, params);
    switch (spec.mode) {
      case Mode::pmf: detail::run_pmf(spec, timings, csv); break;
      case Mode::throughput_surface: detail::run_surface(spec, timings, csv); break;
      case Mode::optimize: detail::run_optimize(spec, timings, csv, false); break;
      case Mode::scaling: detail::run_optimize(spec, timings, csv, true); break;
      case Mode::simulate: detail::run_simulate(spec, timings, csv); break;
      case Mode::compare: detail::run_compare(spec, timings, csv); break;
      case Mode::bounds: detail::run_bounds(spec, timings, csv); break;
    }
    return 0;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace mrc::cli
