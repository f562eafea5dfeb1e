// Copyright 2026 The tacforce Authors
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

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace
{

namespace fs = std::filesystem;

struct CliRun
{
  int code{-1};
  std::string out;
};

CliRun cli(const std::string & args)
{
  const std::string cmd = std::string(TACFORCE_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE * pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string & name)
{
  const fs::path p = fs::temp_directory_path() / ("tacforce_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path & p)
{
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string first_line(const std::string & s)
{
  return s.substr(0, s.find('\n'));
}

TEST(Cli, HelpAndUnknownOptions)
{
  EXPECT_EQ(cli("--help").code, 0);
  EXPECT_EQ(cli("synth --no-such-flag").code, 2);
  EXPECT_EQ(cli("").code, 2);
}

TEST(Cli, SynthIsDeterministic)
{
  const auto a = scratch("synth_a");
  const auto b = scratch("synth_b");
  const std::string flags = " --objects 2 --per-object 3 --nx 8 --ny 8 --seed 4 --noise 0.001";
  const CliRun ra = cli("synth -o " + a.string() + flags);
  const CliRun rb = cli("synth -o " + b.string() + flags);
  ASSERT_EQ(ra.code, 0);
  ASSERT_EQ(rb.code, 0);
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(ra.out.size(), 17u);
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  EXPECT_TRUE(fs::exists(a / "run.json"));
  const auto rc = cli("synth -o " + scratch("synth_c").string() + flags + " --seed 5");
  EXPECT_NE(rc.out, ra.out);
}

TEST(Cli, ThreeHundredSampleDatasetCalibratesDeterministically)
{
  const auto data = scratch("calib_data");
  ASSERT_EQ(cli("synth -o " + data.string() + " --objects 6 --per-object 50 --nx 12 --ny 12").code, 0);
  const auto manifest = nlohmann::json::parse(slurp(data / "manifest.json"));
  EXPECT_EQ(manifest.at("samples").size(), 300u);

  const auto o1 = scratch("calib_1");
  const auto o2 = scratch("calib_2");
  const std::string flags = " --model ransac --model mlp --max-iter 50";
  const CliRun r1 = cli("calibrate " + data.string() + " -o " + o1.string() + flags);
  const CliRun r2 = cli("calibrate " + data.string() + " -o " + o2.string() + flags);
  ASSERT_EQ(r1.code, 0);
  ASSERT_EQ(r2.code, 0);
  EXPECT_EQ(slurp(o1 / "report.csv"), slurp(o2 / "report.csv"));
  EXPECT_EQ(first_line(slurp(o1 / "report.csv")),
    "axis,statistic,decomposition+ransac,decomposition+mlp");
  ASSERT_TRUE(fs::exists(o1 / "model_ransac.json"));

  const auto ev = scratch("evaluate");
  const CliRun re = cli("evaluate " + data.string() + " --model-file " +
      (o1 / "model_ransac.json").string() + " -o " + ev.string());
  ASSERT_EQ(re.code, 0);
  const auto summary = nlohmann::json::parse(re.out);
  EXPECT_TRUE(summary.contains("normal"));
  EXPECT_TRUE(fs::exists(ev / "predictions.csv"));
}

TEST(Cli, DecomposeZeroField)
{
  const auto dir = scratch("zero");
  fs::create_directories(dir);
  std::ofstream os(dir / "zero.csv");
  os << "4,4,0.5,0,0\n";
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      os << i << ',' << j << ",0,0\n";
    }
  }
  os.close();
  const auto out = dir / "out";
  const CliRun r = cli("decompose " + (dir / "zero.csv").string() + " -o " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("s_n").get<double>(), 0.0);
  EXPECT_EQ(j.at("s_tau").get<double>(), 0.0);
  for (const char * c : {"zero_d.csv", "zero_r.csv", "zero_h.csv", "zero_D.csv", "zero_R.csv"}) {
    EXPECT_TRUE(fs::exists(out / c)) << c;
  }

  const auto feat = dir / "feat";
  ASSERT_EQ(cli("features " + (dir / "zero.csv").string() + " -o " + feat.string()).code, 0);
  EXPECT_EQ(first_line(slurp(feat / "features.csv")), "path,s_n,s_t,dir_x,dir_y,s_tau");
}

TEST(Cli, ErrorExitCodes)
{
  const auto dir = scratch("errors");
  fs::create_directories(dir);
  EXPECT_EQ(cli("decompose " + (dir / "missing.csv").string()).code, 1);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_EQ(cli("grasp " + (dir / "bad.json").string() + " -o " + dir.string()).code, 2);
  std::ofstream(dir / "bad.csv") << "2,2,0.5,0,0\n0,0,1,1\n";
  EXPECT_EQ(cli("decompose " + (dir / "bad.csv").string() + " -o " + dir.string()).code, 2);
}

TEST(Cli, GraspOutcomesAndExpectations)
{
  const std::string ramp = std::string(TACFORCE_SCENARIO_DIR) + "/ramp.json";
  const auto on = scratch("grasp_on");
  const CliRun held = cli("grasp " + ramp + " --plant-truth -o " + on.string());
  ASSERT_EQ(held.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(held.out).at("held").get<bool>());
  EXPECT_EQ(first_line(slurp(on / "trace.csv")),
    "t,d_g,f_n_l,f_t_l,f_n_r,f_t_r,ratio_l,ratio_r,phase_l,phase_r,slip_flag");
  EXPECT_TRUE(fs::exists(on / "ratio.svg"));
  const auto run = nlohmann::json::parse(slurp(on / "run.json"));
  EXPECT_EQ(run.at("subcommand"), "grasp");

  const auto off = scratch("grasp_off");
  EXPECT_EQ(cli("grasp " + ramp + " --controller off -o " + off.string()).code, 3);
  EXPECT_EQ(cli("grasp " + ramp + " --controller off --expect fail -o " + off.string()).code, 0);
  EXPECT_EQ(cli("grasp " + ramp + " --plant-truth --pipeline").code, 2);

  const auto plot = scratch("plot");
  ASSERT_EQ(cli("plot " + (on / "trace.csv").string() + " -o " + plot.string()).code, 0);
  EXPECT_TRUE(fs::exists(plot / "trace.svg"));
}

TEST(Cli, OutputRootFromEnvironment)
{
  const auto root = scratch("root");
  const std::string ramp = std::string(TACFORCE_SCENARIO_DIR) + "/ramp.json";
  const std::string cmd = "TACFORCE_OUTPUT_ROOT=" + root.string() + " " + TACFORCE_CLI_PATH +
    " grasp " + ramp + " > /dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(root / "grasp" / "trace.csv"));
}

TEST(Cli, SingleSampleSynth)
{
  const auto dir = scratch("synth_one");
  ASSERT_EQ(cli("synth --objects 1 --per-object 1 --nx 6 --ny 6 -o " + dir.string()).code, 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("samples").size(), 1u);
}

TEST(Cli, RawBaselineRowAndNoiselessRansac)
{
  const auto data = scratch("raw_data");
  ASSERT_EQ(cli("synth --objects 3 --per-object 8 --nx 8 --ny 8 --falloff 1e6 -o " + data.string())
    .code, 0);
  const auto out = scratch("raw_out");
  const CliRun r = cli("calibrate " + data.string() + " --folds 3 --model ransac --model mlp-raw"
      " --hidden 16,8 --raw-max-iter 20 -o " + out.string());
  ASSERT_EQ(r.code, 0);
  const std::string report = slurp(out / "report.csv");
  EXPECT_EQ(first_line(report), "axis,statistic,decomposition+ransac,raw+mlp");
  std::istringstream rows(report);
  std::string row;
  std::getline(rows, row);
  while (std::getline(rows, row)) {
    if (row.rfind("tangential,mean,", 0) == 0 || row.rfind("torsion,mean,", 0) == 0) {
      const double ransac = std::stod(row.substr(row.find(",mean,") + 6));
      EXPECT_LT(ransac, 1e-3) << row;
    }
  }
}

TEST(Cli, RotationalFieldIsTorsionDominant)
{
  const auto data = scratch("rot_data");
  ASSERT_EQ(cli("synth --objects 1 --per-object 1 --fn-max 0 --ft-max 0 --tau-max 20 --seed 3"
    " -o " + data.string()).code, 0);
  const auto manifest = nlohmann::json::parse(slurp(data / "manifest.json"));
  const fs::path field = data / manifest.at("samples")[0].at("path").get<std::string>();
  const CliRun r = cli("decompose " + field.string() + " -o " + (data / "dec").string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto n = j.at("normalized");
  EXPECT_DOUBLE_EQ(std::abs(n[2].get<double>()), 1.0);
  EXPECT_LT(std::abs(n[1].get<double>()), 0.05);
}

}  // namespace
