// Copyright 2026 The ctcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctc/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = ctc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    ::unsetenv(ctc::cli::kOutputDirEnv);
    dir_ = fs::temp_directory_path() /
           ("ctcsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    ::unsetenv(ctc::cli::kOutputDirEnv);
    fs::remove_all(dir_);
  }

  fs::path write_config(const std::string& text) const {
    const fs::path p = dir_ / "run.cfg";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(Cli, PctcTwoModesGolden) {
  // Weights 1, 2, 1 squared and normalized.
  const auto r = run({"pctc", "--M", "2", "--N", "3", "--output", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "# model=pctc\n"
            "# M=2\n"
            "# N=3\n"
            "# dt_over_tperp=1\n"
            "# c=0.5;0.5\n"
            "# variant=standard\n"
            "# version=ctcsim 0.1.0\n"
            "k,probability\n"
            "0,1.666666666667e-01\n"
            "1,6.666666666667e-01\n"
            "2,1.666666666667e-01\n");
}

TEST_F(Cli, ContinuumAtUnitQIsAPointMass) {
  const auto r = run({"continuum", "--family", "dctc", "--q", "1.0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k,probability\n0,1.000000000000e+00\n"), std::string::npos);
  EXPECT_EQ(r.out.substr(r.out.size() - 21), "0,1.000000000000e+00\n");
}

TEST_F(Cli, DctcEcpMatchesProductLaw) {
  // g = 1/2 on two modes: binomial (1/4, 1/2, 1/4).
  const auto r = run({"dctc", "--ecp", "--g", "0.5", "--M", "2", "--N", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0,2.500000000000e-01\n1,5.000000000000e-01\n2,2.500000000000e-01\n"),
            std::string::npos);
}

TEST_F(Cli, IncompleteVariantMatchesSquaredWeights) {
  const double h = 0.3, n = 3.0;
  const double w[] = {h * h, 2 * h * (1 - h) / n, (1 - h) * (1 - h) / (n * n)};
  const double z = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  const auto r = run({"pctc", "--variant", "incomplete", "--h", "0.3", "--M", "2", "--N", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int k = 0; k < 3; ++k) {
    const std::string row = std::to_string(k) + "," + ctc::cli::fmt_value(w[k] * w[k] / z);
    EXPECT_NE(r.out.find(row), std::string::npos) << row;
  }
}

TEST_F(Cli, RepeatRunsAreByteIdentical) {
  const std::vector<std::string> args{"pctc", "--variant", "probabilistic", "--p", "0.37",
                                      "--M", "3", "--N", "4"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, ConvergeIsIndependentOfJobs) {
  const std::vector<std::string> base{"converge", "--family", "pctc_h", "--h", "0.6",
                                      "--M-list", "4,8,16,32,64"};
  auto serial = base;
  serial.insert(serial.end(), {"--jobs", "1"});
  auto parallel = base;
  parallel.insert(parallel.end(), {"--jobs", "4"});
  const auto a = run(serial);
  const auto b = run(parallel);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("# monotone=true"), std::string::npos);
}

TEST_F(Cli, AliasedClockIsRefused) {
  const auto r = run({"pctc", "--M", "2", "--N", "2"});
  EXPECT_EQ(r.code, ctc::cli::kConfigError);
  EXPECT_NE(r.err.find("N > M"), std::string::npos);
}

TEST_F(Cli, BadArgumentsExitOne) {
  EXPECT_EQ(run({"pctc", "--M", "0"}).code, 1);
  EXPECT_EQ(run({"pctc", "--nope"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"continuum", "--family", "dctc"}).code, 1);
  EXPECT_EQ(run({"continuum", "--family", "dctc", "--q", "0"}).code, 1);
  EXPECT_EQ(run({"dctc", "--ecp", "--g-alpha", "1,0,0,0", "--M", "2"}).code, 1);
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("dispersion-check"), std::string::npos);
}

TEST_F(Cli, SizeCapExitsTwo) {
  const auto r = run({"pctc", "--M", "6", "--N", "7"});
  EXPECT_EQ(r.code, ctc::cli::kSizeCap);
}

TEST_F(Cli, NonConvergenceExitsFour) {
  const auto r = run({"dctc", "--ecp", "--g", "0.5", "--M", "2", "--N", "3", "--tol", "1e-300",
                      "--max-iter", "3"});
  EXPECT_EQ(r.code, ctc::cli::kNotConverged);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, DispersionFailureExitsThree) {
  const auto r = run({"dispersion-check", "--M", "2", "--p", "0.37", "--prescription", "pctc"});
  EXPECT_EQ(r.code, ctc::cli::kVerificationFailed);
  EXPECT_NE(r.out.find(",pctc,"), std::string::npos);
  EXPECT_NE(r.out.find(",fail\n"), std::string::npos);
}

TEST_F(Cli, DispersionAtEvenPowerPasses) {
  const auto r = run({"dispersion-check", "--M", "2", "--p", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(Cli, ConfigFillsUnsetKeysAndFlagsWin) {
  const fs::path cfg =
      write_config("# two modes\nM = 2\nN=3\nvariant=incomplete\nh=0.3\noutput=-\n");
  const auto from_cfg = run({"pctc", "--config", cfg.string()});
  const auto direct =
      run({"pctc", "--M", "2", "--N", "3", "--variant", "incomplete", "--h", "0.3"});
  ASSERT_EQ(from_cfg.code, 0) << from_cfg.err;
  EXPECT_EQ(from_cfg.out, direct.out);

  const auto overridden = run({"pctc", "--config", cfg.string(), "--h", "0.5"});
  EXPECT_NE(overridden.out.find("# h=0.5\n"), std::string::npos);
}

TEST_F(Cli, ConfigFlagsTakeBooleans) {
  const auto yes = run({"dctc", "--config", write_config("M=2\nN=3\necp=true\n").string()});
  EXPECT_EQ(yes.code, 0) << yes.err;
  const auto bad = run({"dctc", "--config", write_config("M=2\necp=maybe\n").string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find(":2:"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsNameTheLine) {
  const auto unknown = run({"pctc", "--config", write_config("M=2\n\nbogus=1\n").string()});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("run.cfg:3: unknown key 'bogus'"), std::string::npos) << unknown.err;

  const auto garbled = run({"pctc", "--config", write_config("M=2\nN\n").string()});
  EXPECT_EQ(garbled.code, 1);
  EXPECT_NE(garbled.err.find("run.cfg:2:"), std::string::npos);

  const auto badval = run({"pctc", "--config", write_config("N=abc\n").string()});
  EXPECT_EQ(badval.code, 1);
  EXPECT_NE(badval.err.find("run.cfg:1:"), std::string::npos);

  EXPECT_EQ(run({"pctc", "--config", (dir_ / "missing.cfg").string()}).code, 1);
}

TEST_F(Cli, ParseConfigSkipsCommentsAndBlanks) {
  std::istringstream in("  # header\n\nM = 3 # trailing\n  tol=1e-9\n");
  const auto entries = ctc::cli::parse_config(in, "x");
  ASSERT_EQ(entries.size(), 2U);
  EXPECT_EQ(entries[0].key, "M");
  EXPECT_EQ(entries[0].value, "3");
  EXPECT_EQ(entries[0].line, 3U);
  EXPECT_EQ(entries[1].key, "tol");
  EXPECT_EQ(entries[1].line, 4U);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ::setenv(ctc::cli::kOutputDirEnv, (dir_ / "out").c_str(), 1);
  const auto r = run({"continuum", "--family", "pctc_beta", "--r", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string file = slurp(dir_ / "out" / "continuum.csv");
  EXPECT_NE(file.find("# family=pctc_beta\n"), std::string::npos);

  // An explicit --output beats the environment.
  const auto s = run({"continuum", "--family", "pctc_beta", "--r", "0.5", "--output", "-"});
  EXPECT_EQ(s.out, file);
}

TEST_F(Cli, ExplicitOutputFile) {
  const fs::path target = dir_ / "d.csv";
  const auto r = run({"dctc", "--g-alpha", "0,0,0,1", "--M", "2", "--output", target.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(target).find("2,1.000000000000e+00\n"), std::string::npos);
  EXPECT_EQ(run({"pctc", "--output", (dir_ / "no" / "such" / "f.csv").string()}).code, 1);
}

TEST_F(Cli, FiniteContinuumRowsSumToOne) {
  const auto r = run({"continuum", "--family", "dctc", "--q", "0.3", "--M", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  double total = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
    total += std::stod(line.substr(line.find(',') + 1));
    ++rows;
  }
  EXPECT_EQ(rows, 41U);
  EXPECT_NEAR(total, 1.0, 1e-11);
}

TEST_F(Cli, VerifySubsetReportsEachCriterion) {
  const auto r = run({"verify", "--only", "1,11"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("[PASS]  1 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("[PASS] 11 "), std::string::npos) << r.out;
}

}  // namespace
