// Command-line front end: loads parameters, runs one sweep, writes CSV.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrc/cli.hpp"
#include "mrc/config.hpp"

namespace {

struct Flags {
  std::string m = "10";
  std::string lambda;
  std::string theta;
  std::string config;
  std::string out;
  std::vector<std::string> params;
  double resolution = 0.05;
  double tolerance = 1e-4;
  int seeds = 1;
  int k = -1;
  long long seed = -1, w0 = -1, r = -1, max_stage = -1, warmup = -1, slots = -1;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--m", f.m, "MPR capability: N, A,B,C or LO:HI")->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "attempt rate: VALUE or LO:STEP:HI");
  cmd->add_option("--theta", f.theta, "threshold: VALUE or LO:HI (default 1:M, M for simulations)");
  cmd->add_option("--config", f.config, "key = value parameter file");
  cmd->add_option("--param", f.params, "override one parameter, KEY=VALUE (repeatable)");
  cmd->add_option("--out", f.out, "output CSV path (default stdout)");
  cmd->add_option("--resolution", f.resolution, "lambda grid step for optimization")->capture_default_str();
  cmd->add_option("--tolerance", f.tolerance, "golden-section lambda tolerance")->capture_default_str();
  cmd->add_option("--k", f.k, "number of stations");
  cmd->add_option("--seeds", f.seeds, "independent simulation runs per M")->capture_default_str();
  cmd->add_option("--seed", f.seed, "base RNG seed");
  cmd->add_option("--w0", f.w0, "minimum contention window");
  cmd->add_option("--r", f.r, "backoff factor");
  cmd->add_option("--max-stage", f.max_stage, "cap on the backoff stage");
  cmd->add_option("--warmup", f.warmup, "warm-up slots");
  cmd->add_option("--slots", f.slots, "measured slots");
}

mrc::cli::SweepSpec resolve(mrc::cli::Mode mode, const Flags& f, mrc::PhyMacParams& params) {
  using namespace mrc;
  cli::SweepSpec spec;
  spec.mode = mode;

  // Precedence: built-in defaults < config file < flags.
  if (!f.config.empty()) cli::apply_config(read_key_values_file(f.config), params, spec.dcf);
  KeyValues overrides;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParameterError("param", "expected KEY=VALUE, got '" + kv + "'");
    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  cli::apply_config(overrides, params, spec.dcf);

  spec.m_list = cli::parse_int_list("m", f.m);
  if (!f.lambda.empty()) {
    spec.lambda = cli::parse_real_range("lambda", f.lambda);
    spec.lambda_given = true;
  } else if (mode == cli::Mode::pmf) {
    throw ParameterError("lambda", "required for pmf");
  } else if (mode == cli::Mode::throughput_surface || mode == cli::Mode::bounds) {
    spec.lambda = {0.5, 0.5, 12.0};
    spec.lambda_given = true;
  }
  if (!f.theta.empty()) {
    const auto t = cli::parse_int_list("theta", f.theta);
    spec.theta_lo = t.front();
    spec.theta_hi = t.back();
  }
  spec.lambda_resolution = f.resolution;
  spec.lambda_tolerance = f.tolerance;
  spec.seeds = f.seeds;
  if (f.k >= 0) spec.dcf.num_stations = f.k;
  if (f.seed >= 0) spec.dcf.rng_seed = static_cast<std::uint64_t>(f.seed);
  if (f.w0 >= 0) spec.dcf.min_window = f.w0;
  if (f.r >= 0) spec.dcf.backoff_factor = f.r;
  if (f.max_stage >= 0) spec.dcf.max_backoff_stage = static_cast<int>(f.max_stage);
  if (f.warmup >= 0) spec.dcf.warmup_slots = f.warmup;
  if (f.slots >= 0) spec.dcf.measured_slots = f.slots;
  spec.output = f.out;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-round contention analysis and simulation for MPR WLANs"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<std::pair<CLI::App*, mrc::cli::Mode>> commands;
  const std::vector<std::pair<mrc::cli::Mode, std::string>> help = {
      {mrc::cli::Mode::pmf, "winner, stop-time and stopped-sum distributions"},
      {mrc::cli::Mode::throughput_surface, "S(lambda, theta) over a grid"},
      {mrc::cli::Mode::optimize, "joint lambda/theta optimum with both bounds"},
      {mrc::cli::Mode::scaling, "optimum, bounds and single-round optimum per M"},
      {mrc::cli::Mode::simulate, "slotted DCF simulation"},
      {mrc::cli::Mode::compare, "DCF simulation against the analysis at the measured attempt rate"},
      {mrc::cli::Mode::bounds, "S at theta*(lambda), B_L and S_c over lambda"},
  };
  for (const auto& [mode, text] : help) {
    auto* cmd = app.add_subcommand(std::string(mrc::cli::mode_name(mode)), text);
    add_common(cmd, flags);
    commands.emplace_back(cmd, mode);
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [cmd, mode] : commands) {
    if (!cmd->parsed()) continue;
    mrc::PhyMacParams params;
    try {
      const auto spec = resolve(mode, flags, params);
      return mrc::cli::run_command(spec, params, std::cout, std::cerr);
    } catch (const mrc::ParameterError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 1;
}
