#include "swnet/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace swnet {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "swnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, AnalyticWritesCurve) {
  const auto r = run({"analytic", "--R", "102", "--out", path("curve.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k_max=50"), std::string::npos);
  EXPECT_NE(r.out.find("plateau="), std::string::npos);
  std::istringstream in(slurp(path("curve.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 53);  // header + k = 0..51
  EXPECT_FALSE(fs::exists(path("curve.csv.tmp")));
}

TEST_F(CliTest, AnalyticRejectsRatioTwo) {
  const auto r = run({"analytic", "--R", "2", "--out", path("curve.csv")});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_FALSE(fs::exists(path("curve.csv")));
}

TEST_F(CliTest, AnalyticLargeDomainIsFast) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run({"analytic", "--R", "502", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
  EXPECT_NE(r.err.find("k_max=250"), std::string::npos);
}

TEST_F(CliTest, UnwritablePathFails) {
  const auto r = run({"analytic", "--out", path("missing/dir/curve.csv")});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST_F(CliTest, SweepIsReproducible) {
  const std::vector<std::string> base = {"sweep", "--n", "400", "--d-grid", "0:3:1", "--trials",
                                         "20",    "--seed", "42"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1", "--out", path("a.csv")});
  b.insert(b.end(), {"--threads", "3", "--out", path("b.csv")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  const std::string a_csv = slurp(path("a.csv"));
  EXPECT_EQ(a_csv, slurp(path("b.csv")));
  EXPECT_EQ(std::count(a_csv.begin(), a_csv.end(), '\n'), 5);
}

TEST_F(CliTest, SweepAnalyticOnly) {
  const auto r = run({"sweep", "--R", "502", "--d-grid", "0:250:0.25", "--analytic-only"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "d,d_over_r,analytic_g");
}

TEST_F(CliTest, SimulateRejectsEdgeEffects) {
  const auto r = run({"simulate", "--d", "9.5", "--n", "100", "--trials", "2"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("edge-effect"), std::string::npos);
}

TEST_F(CliTest, SimulateWithDump) {
  const auto r = run({"simulate", "--d", "3", "--n", "500", "--trials", "4", "--format", "json",
                      "--out", path("row.json"), "--dump", path("dump.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(path("row.json")).find("\"mean_indicator\""), std::string::npos);
  EXPECT_NE(slurp(path("dump.json")).find("\"trajectory\""), std::string::npos);
}

TEST_F(CliTest, TailRejectsDeltaAtRange) {
  const auto r = run({"tail", "--delta", "1", "--d", "3", "--n", "100"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("delta"), std::string::npos);
}

TEST_F(CliTest, TailAndConvergenceRun) {
  auto t = run({"tail", "--d", "4", "--n", "300,600", "--trials", "10"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.out.substr(0, t.out.find('\n')), "n,B,trials,exceed_probability,delivered_over_bound");
  auto c = run({"convergence", "--d", "4", "--n", "300,600,900", "--trials", "10", "--seeds", "3"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.err.find("median_abs_error"), std::string::npos);
  EXPECT_EQ(std::count(c.out.begin(), c.out.end(), '\n'), 10);
}

TEST_F(CliTest, ValidateLrcDefaultsAndCustomRegion) {
  const auto r = run({"validate-lrc", "--n", "300", "--draws", "200", "--region", "0,0,20,20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",1,1,0\n"), std::string::npos);  // observed 1, predicted 1, z 0
  EXPECT_EQ(run({"validate-lrc", "--region", "0,0,30"}).code, kExitValidation);
}

TEST_F(CliTest, ConfigFileWithOverrides) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "R=102\nformat=json\n";
  }
  auto r = run({"analytic", "--config", path("run.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.front(), '[');
  EXPECT_NE(r.err.find("k_max=50"), std::string::npos);
  r = run({"analytic", "--config", path("run.cfg"), "--R", "20", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 1), "k");
  EXPECT_NE(r.err.find("k_max=9"), std::string::npos);
}

TEST_F(CliTest, AbsoluteLengths) {
  const auto a = run({"analytic", "--r", "0.5", "--R", "51", "--absolute"});
  const auto b = run({"analytic", "--R", "102"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.err, b.err);
}

TEST_F(CliTest, HelpListsFlagsWithUnits) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--R", "--r", "--delta", "--n", "--d", "--d-grid", "--trials", "--seeds", "--seed",
                           "--no-lrc", "--tie-break", "--out", "--format", "--threads", "--absolute"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(r.out.find("[units of r]"), std::string::npos);
}

TEST_F(CliTest, UnknownCommandIsValidationError) {
  EXPECT_EQ(run({"bogus"}).code, kExitValidation);
  EXPECT_EQ(run({}).code, kExitValidation);
  EXPECT_EQ(run({"sweep", "--tie-break", "best"}).code, kExitValidation);
}

}  // namespace
}  // namespace swnet
