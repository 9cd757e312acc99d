#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mrc/cli.hpp"
#include "mrc/csv.hpp"

namespace mrc {
namespace {

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string run(const cli::SweepSpec& spec, int* status = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run_command(spec, PhyMacParams{}, out, err);
  if (status) *status = rc;
  return out.str();
}

TEST(Csv, NineSignificantDigits) {
  EXPECT_EQ(CsvWriter::format(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(CsvWriter::format(12345678912.0), "1.23456789e+10");
  EXPECT_EQ(CsvWriter::format(6), "6");
}

TEST(Csv, RowsAndMetadata) {
  std::ostringstream s;
  CsvWriter w(s);
  w.meta("mode", "bounds");
  w.meta("x", 0.5);
  w.header({"a", "b", "c"});
  w.row({std::int64_t{3}, 2.5, std::string("t")});
  EXPECT_EQ(s.str(), "# mode=bounds\n# x=0.5\na,b,c\n3,2.5,t\n");
  EXPECT_EQ(w.rows(), 1u);
}

TEST(CliParsing, Ranges) {
  const auto r = cli::parse_real_range("lambda", "0.5:0.5:12");
  EXPECT_EQ(r.values().size(), 24u);
  EXPECT_DOUBLE_EQ(r.values().back(), 12.0);
  EXPECT_EQ(cli::parse_real_range("lambda", "6").values(), std::vector<double>{6.0});
  EXPECT_EQ(cli::parse_int_list("m", "2:4"), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(cli::parse_int_list("m", "1,5,10"), (std::vector<int>{1, 5, 10}));
  EXPECT_THROW(cli::parse_int_list("m", "4:2"), ParameterError);
  EXPECT_THROW(cli::parse_int_list("m", "2.5"), ParameterError);
  EXPECT_THROW(cli::parse_real_range("lambda", "1:x:3"), ParameterError);
  EXPECT_EQ(cli::parse_mode("throughput-surface"), cli::Mode::throughput_surface);
  EXPECT_THROW(cli::parse_mode("plot"), ParameterError);
}

TEST(CliConfig, SplitsPhyAndSimulatorKeys) {
  KeyValues kv{{"data_rate_bps", "6e6"}, {"num_stations", "40"}, {"min_window", "32"}};
  PhyMacParams p;
  sim::DcfConfig d;
  cli::apply_config(kv, p, d);
  EXPECT_EQ(p.data_rate_bps, 6e6);
  EXPECT_EQ(d.num_stations, 40);
  EXPECT_EQ(d.min_window, 32);
  kv.emplace("bogus", "1");
  try {
    cli::apply_config(kv, p, d);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_EQ(e.field(), "bogus");
  }
}

TEST(CliCommand, SurfaceHas240RowsAndTheGainRatio) {
  cli::SweepSpec spec;
  spec.mode = cli::Mode::throughput_surface;
  spec.m_list = {10};
  spec.lambda = {0.5, 0.5, 12.0};
  spec.lambda_given = true;
  spec.theta_lo = 1;
  spec.theta_hi = 10;
  const auto lines = data_lines(run(spec));
  ASSERT_EQ(lines.size(), 241u);
  EXPECT_EQ(lines[0], "M,lambda,theta,S_pps,S_mbps");
  std::map<int, double> at6;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = fields(lines[i]);
    if (std::stod(f[1]) == 6.0) at6[std::stoi(f[2])] = std::stod(f[3]);
  }
  ASSERT_EQ(at6.size(), 10u);
  double best = 0;
  for (const auto& [theta, s] : at6) best = std::max(best, s);
  EXPECT_NEAR(at6[1] / best, 0.72, 0.03);
}

TEST(CliCommand, OptimizeReportsOrdering) {
  cli::SweepSpec spec;
  spec.mode = cli::Mode::optimize;
  spec.m_list = {10};
  const auto lines = data_lines(run(spec));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(fields(lines[1]).back(), "true");
}

TEST(CliCommand, ByteStableWithAuditTrail) {
  cli::SweepSpec spec;
  spec.mode = cli::Mode::simulate;
  spec.m_list = {3};
  spec.dcf.num_stations = 20;
  spec.dcf.warmup_slots = 100;
  spec.dcf.measured_slots = 3000;
  const auto a = run(spec), b = run(spec);
  EXPECT_EQ(a, b);
  for (const char* key : {"# mode=simulate", "# num_stations=20", "# data_rate_bps=", "# rng_seed=1", "# slot_us="})
    EXPECT_NE(a.find(key), std::string::npos) << key;
}

TEST(CliCommand, CompareWithinTwoPercent) {
  cli::SweepSpec spec;
  spec.mode = cli::Mode::compare;
  spec.m_list = {10};
  spec.seeds = 5;
  const auto lines = data_lines(run(spec));
  ASSERT_EQ(lines.size(), 7u);
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_LT(std::abs(std::stod(fields(lines[i]).back())), 0.02);
}

TEST(CliCommand, ParameterErrorsExitNonzero) {
  cli::SweepSpec spec;
  spec.mode = cli::Mode::throughput_surface;
  spec.m_list = {4};
  spec.lambda = {0.5, 0.5, 2.0};
  spec.lambda_given = true;
  spec.theta_lo = 5;
  int rc = 0;
  run(spec, &rc);
  EXPECT_EQ(rc, 2);
  spec.theta_lo = 0;
  spec.lambda = {0.5, 0.5, 300.0};
  run(spec, &rc);
  EXPECT_EQ(rc, 2);
}

std::string shell(const std::string& cmd, int* status) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  *status = pclose(pipe);
  return out;
}

TEST(CliBinary, RunsSubcommandsAndRejectsBadInput) {
  int status = 0;
  const std::string exe = MRC_CLI_PATH;
  auto out = shell(exe + " throughput-surface --m 10 --lambda 0.5:0.5:12 --theta 1:10", &status);
  EXPECT_EQ(status, 0);
  EXPECT_EQ(data_lines(out).size(), 241u);

  out = shell(exe + " pmf --m 3 --lambda 1 --theta 2 --param data_rate_bps=6e6", &status);
  EXPECT_EQ(status, 0);
  EXPECT_NE(out.find("# data_rate_bps=6e+06"), std::string::npos);
  EXPECT_NE(out.find("stopped_sum,2,"), std::string::npos);

  out = shell(exe + " bounds --m 2 --param no_such_key=1", &status);
  EXPECT_NE(status, 0);
  EXPECT_NE(out.find("no_such_key"), std::string::npos);

  out = shell(exe + " pmf --m 3", &status);
  EXPECT_NE(status, 0);
  EXPECT_NE(out.find("lambda"), std::string::npos);
}

}  // namespace
}  // namespace mrc
