// Copyright 2026 The difflim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "difflim/cli.hpp"

namespace difflim {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("difflim_test_" + name);
}

const std::vector<std::string> kFastGrid{"--geometric-count", "8", "--dt", "0.0078125"};

std::vector<std::string> with_grid(std::vector<std::string> args) {
  args.insert(args.end(), kFastGrid.begin(), kFastGrid.end());
  return args;
}

TEST(Cli, BoundsRow) {
  const auto r = run({"bounds", "--delta", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.front(), (std::vector<std::string>{"algorithm", "delta", "scaled_bound"}));
  bool found = false;
  for (const auto& row : rows) {
    if (row[0] == "moss") {
      found = true;
      EXPECT_EQ(row[1], "4");
      EXPECT_EQ(row[2].substr(0, 7), "55.1543");
    }
    if (row[0] == "ucb") {
      EXPECT_EQ(row[2], "inf");
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, ProfileGapGrid) {
  const auto r = run(with_grid({"profile", "--family", "ts1", "--gaps", "-10:10:1", "--cs", "0,0.25,1", "--reps",
                                "4"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u + 63u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"family", "gap", "c", "mean_regret", "stderr", "mean_q1", "reps"}));
  EXPECT_EQ(rows[1][1], "-10");
  EXPECT_EQ(rows[63][1], "10");
}

TEST(Cli, MissingPolicyNamesFlag) {
  const auto r = run({"simulate", "--mu", "-2", "--reps", "10"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--policy"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(run({"simulate", "--policy", "nope"}).code, 1);
  EXPECT_EQ(run({"profile", "--gaps", "1:0:1"}).code, 1);
  EXPECT_EQ(run({"bounds", "--delta", "0"}).code, 1);
  EXPECT_EQ(run({"nosuchcommand"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  const auto bad = run({"simulate", "--policy", "ts2", "--mu", "1"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("K = 2"), std::string::npos);
}

TEST(Cli, RuntimeFailureExitsTwo) {
  // Luce's rule without a floor fails once every arm's reward sum is negative.
  const auto r = run(with_grid({"simulate", "--policy", "luce", "--alpha", "0", "--mu", "-50,-50", "--reps", "10"}));
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, HelpListsDefaults) {
  for (const char* sub : {"simulate", "profile", "histogram", "superdiffusive", "instability", "convergence"}) {
    const auto r = run({sub, "--help"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("[1e-06]"), std::string::npos) << sub;
    EXPECT_NE(r.out.find("[0.0001220703125]"), std::string::npos) << sub;
    EXPECT_NE(r.out.find("--reps"), std::string::npos) << sub;
  }
  const auto sim = run({"simulate", "--help"});
  EXPECT_NE(sim.out.find("1e-8 for ts2 with c = 0"), std::string::npos);
}

TEST(Cli, SimulateSummaryLine) {
  const auto r = run(with_grid({"simulate", "--policy", "ts1", "--mu", "-2", "--reps", "50"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("mean_regret=", 0), 0u);
  EXPECT_NE(r.out.find("stderr="), std::string::npos);
  EXPECT_NE(r.out.find("reps=50"), std::string::npos);
  EXPECT_NE(r.out.find("wall_time_s="), std::string::npos);
}

TEST(Cli, PrelimitBandCsv) {
  const auto path = temp_file("band.csv");
  const auto r = run({"simulate", "--mode", "prelimit", "--n", "150", "--reps", "20", "--policy", "ts1", "--mu", "10",
                      "--nu-mode", "undersmoothed", "--times", "0:1:0.25", "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const auto rows = parse_csv(text.str());
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "arm", "mean_q", "sd_q", "mean_s", "sd_s", "reps"}));
  EXPECT_EQ(rows[1][2], "0");
  std::filesystem::remove(path);
}

TEST(Cli, ConfigRoundTripAndUnknownKeys) {
  ExperimentConfig cfg;
  cfg.instance = {{3.0, 0.0}, {1.0, 2.0}, RewardFamily::shifted_uniform};
  cfg.policy.kind = PolicyKind::ts_two_arm;
  cfg.policy.c = 0.125;
  cfg.policy.d = 1e-8;
  cfg.policy.nu = 0.7;
  cfg.grid.t0 = 1e-7;
  cfg.reps = 12345;
  cfg.master_seed = 0xfeedfacecafebeefULL;
  cfg.workers = 3;
  cfg.output = {"x.csv", "json"};
  cfg.study.gaps = {0.1, 1.0 / 3.0};
  cfg.study.n = {250, 1000};
  EXPECT_TRUE(parse_config(dump_config(cfg)) == cfg);
  EXPECT_TRUE(parse_config(dump_config(ExperimentConfig{})) == ExperimentConfig{});
  EXPECT_THROW(parse_config(R"({"policy": {"kind": "ts1", "cc": 1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"reps": "many"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"instance": {"K": 2, "mu": [1]}})"), ConfigError);
  try {
    parse_config("{\n  \"reps\": 5,\n  oops\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Cli, CommandLineOverridesConfig) {
  const auto path = temp_file("cfg.json");
  {
    std::ofstream f(path);
    f << R"({"study": {"delta": [2, 8]}, "output": {"format": "csv"}})";
  }
  const auto from_file = parse_csv(run({"bounds", "--config", path.string()}).out);
  EXPECT_EQ(from_file.size(), 1u + 10u);
  const auto overridden = parse_csv(run({"bounds", "--config", path.string(), "--delta", "3"}).out);
  EXPECT_EQ(overridden.size(), 1u + 5u);
  EXPECT_EQ(overridden[1][1], "3");
  std::filesystem::remove(path);
}

TEST(Cli, ByteIdenticalOutputForSameConfig) {
  const auto path = temp_file("det.json");
  {
    std::ofstream f(path);
    f << R"({"reps": 30, "master_seed": 77, "grid": {"geometric_count": 8, "dt": 0.0078125},
             "study": {"family": "ts2", "gaps": [1, 4], "cs": [0, 0.5]}})";
  }
  const auto a = run({"profile", "--config", path.string(), "--workers", "1"});
  const auto b = run({"profile", "--config", path.string(), "--workers", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::filesystem::remove(path);
}

TEST(Cli, EveryValueFiniteOrInf) {
  const std::vector<std::vector<std::string>> commands{
      {"bounds", "--delta", "0.5:16:0.5"},
      with_grid({"histogram", "--delta", "5", "--reps", "40", "--bins", "7"}),
      with_grid({"instability", "--mu", "3", "--reps", "20"}),
      with_grid({"superdiffusive", "--gaps", "2,4", "--reps", "20"}),
      with_grid({"convergence", "--n", "20,40", "--policy", "ts2", "--delta", "3", "--reps", "20"}),
  };
  for (const auto& cmd : commands) {
    const auto r = run(cmd);
    ASSERT_EQ(r.code, 0) << cmd[0] << ": " << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_GE(rows.size(), 2u) << cmd[0];
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ASSERT_EQ(rows[i].size(), rows[0].size());
      for (const auto& cell : rows[i]) {
        if (cell == "inf" || std::isalpha(static_cast<unsigned char>(cell[0]))) continue;
        const double v = std::stod(cell);
        EXPECT_TRUE(std::isfinite(v)) << cmd[0] << ": " << cell;
      }
    }
  }
}

TEST(Cli, JsonFormat) {
  const auto r = run({"bounds", "--delta", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 5u);
  EXPECT_EQ(j[0]["scaled_bound"], "inf");
  EXPECT_EQ(j[4]["algorithm"], "oracle-etc");
  EXPECT_EQ(j[4]["scaled_bound"], 2.0);
}

TEST(Cli, ListParsing) {
  EXPECT_EQ(parse_real_list("1,2.5", "x"), (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(parse_real_list("-1:1:0.5", "x"), (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_real_list("8:2:-2,1", "x"), (std::vector<double>{8, 6, 4, 2, 1}));
  EXPECT_THROW(parse_real_list("1,,2", "x"), ConfigError);
  EXPECT_THROW(parse_real_list("1:2:0", "x"), ConfigError);
  EXPECT_THROW(parse_real_list("abc", "x"), ConfigError);
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

}  // namespace
}  // namespace difflim
