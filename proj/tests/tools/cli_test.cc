// Copyright 2026 The Flowfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowfire/io.h"

namespace flowfire::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flowfire_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, PulseRunEndsAtPyramid) {
  const auto complex = write("c.json", R"j({"kind":"grid","distinguished":"F(0,0)"})j");
  const auto config = write("s.json", R"j({"representation":"face","entries":[["F(0,0)",4]]})j");
  const auto report = (dir_ / "r.json").string();
  ASSERT_EQ(call({"run", "--complex", complex, "--config", config, "--rules",
                  "hole", "--seed", "7", "--monitors", "all", "--audit", "--out",
                  report}),
            kExitOk)
      << err_.str();
  const auto j = io::read_json_file(report);
  EXPECT_EQ(j.at("stopReason"), "terminal");
  const auto final_state = io::state_from_json(j.at("final"));
  const auto grid = Complex::grid(CellId::grid_face(0, 0));
  EXPECT_EQ(std::get<FaceRep>(final_state),
            predict_pyramid(grid, CellId::grid_face(0, 0), 4));
}

TEST_F(CliTest, FiveUnitsHitStepCap) {
  const auto config = write("s.json", R"j({"representation":"edge","entries":[["V(0,0)",5]]})j");
  EXPECT_EQ(call({"run", "--config", config, "--step-cap", "1000", "--out",
                  (dir_ / "r.json").string()}),
            kExitStepCap);
}

TEST_F(CliTest, DeterministicCycleIsARevisit) {
  const auto config = write("s.json", R"j({"representation":"edge","entries":[["V(0,0)",5]]})j");
  EXPECT_EQ(call({"run", "--config", config, "--strategy", "lex", "--step-cap",
                  "1000"}),
            kExitRevisit);
}

TEST_F(CliTest, MalformedInputIsExitOne) {
  const auto bad = write("bad.json", "{not json");
  EXPECT_EQ(call({"run", "--config", bad}), kExitInvalidInput);
  EXPECT_EQ(call({"run", "--config", (dir_ / "missing.json").string()}),
            kExitInvalidInput);
  EXPECT_EQ(call({"run"}), kExitInvalidInput);
  EXPECT_EQ(call({"bogus"}), kExitInvalidInput);
  EXPECT_EQ(call({"--help"}), kExitOk);
}

TEST_F(CliTest, NonConservativeFaceRequestIsExitTwo) {
  const auto config = write("s.json", R"j({"representation":"edge","entries":[["V(0,0)",2]]})j");
  EXPECT_EQ(call({"run", "--config", config, "--representation", "face"}),
            kExitIllegalConfiguration);
  EXPECT_NE(err_.str().find("witness"), std::string::npos);
  EXPECT_EQ(call({"convert", "--config", config, "--to", "face"}),
            kExitIllegalConfiguration);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const auto complex = write("c.json", R"j({"kind":"grid","distinguished":"F(0,0)"})j");
  const auto config = write("s.json", R"j({"representation":"face","entries":[["F(0,0)",3]]})j");
  auto once = [&](const char* seed_flag) {
    std::vector<std::string> args{"run", "--complex", complex, "--config",
                                  config, "--rules", "hole"};
    if (seed_flag) {
      args.push_back("--seed");
      args.push_back(seed_flag);
    }
    call(args);
    return out_.str();
  };
  ::setenv("FLOWFIRE_SEED", "12", 1);
  const auto from_env = once(nullptr);
  ::unsetenv("FLOWFIRE_SEED");
  EXPECT_EQ(from_env, once("12"));
  EXPECT_NE(from_env, once("13"));
}

TEST_F(CliTest, VerifyPyramid) {
  EXPECT_EQ(call({"verify-pyramid", "--hole", "F(0,0)", "--k", "3", "--trials",
                  "100"}),
            kExitOk);
  EXPECT_NE(out_.str().find("PASS"), std::string::npos);
  EXPECT_EQ(call({"verify-pyramid", "--hole", "F(0,0)", "--k", "2", "--trials",
                  "5", "--workers", "2"}),
            kExitOk);
  EXPECT_NE(out_.str().find("exhaustive: 1 terminal state(s)"), std::string::npos)
      << out_.str();
}

TEST_F(CliTest, VerifyPyramidCatchesSabotage) {
  for (const char* rule : {"off-by-one", "literal"}) {
    const auto failure = (dir_ / (std::string(rule) + ".json")).string();
    EXPECT_EQ(call({"verify-pyramid", "--hole", "F(0,0)", "--k", "2", "--trials",
                    "2", "--hole-rule", rule, "--step-cap", "2000",
                    "--max-states", "20000", "--failure-out", failure}),
              kExitVerificationFailed)
        << rule;
    EXPECT_NE(out_.str().find("FAIL"), std::string::npos);
    const auto report = io::report_from_json(io::read_json_file(failure));
    EXPECT_FALSE(report.moves.empty());
  }
}

TEST_F(CliTest, VerifyNeedsHole) {
  EXPECT_EQ(call({"verify-pyramid", "--k", "2"}), kExitInvalidInput);
}

TEST_F(CliTest, EnumerateTwoChips) {
  const auto config = write("s.json", R"j({"representation":"face","entries":[["F(0,0)",2]]})j");
  ASSERT_EQ(call({"enumerate", "--config", config}), kExitOk);
  const auto j = io::json::parse(out_.str());
  EXPECT_EQ(j.at("count"), 4);
  EXPECT_EQ(j.at("truncated"), false);
  EXPECT_EQ(call({"enumerate", "--config", config, "--max-states", "2"}),
            kExitStepCap);
}

TEST_F(CliTest, ConvertRoundTrip) {
  const auto config = write("s.json", R"j({"representation":"face","entries":[["F(0,0)",1],["F(1,0)",1]]})j");
  const auto edges = (dir_ / "e.json").string();
  ASSERT_EQ(call({"convert", "--config", config, "--to", "edge", "--out", edges}),
            kExitOk);
  ASSERT_EQ(call({"convert", "--config", edges, "--to", "face"}), kExitOk);
  EXPECT_EQ(io::json::parse(out_.str()),
            io::read_json_file(config));
}

TEST_F(CliTest, CheckReportsCriterion) {
  const auto config = write("s.json", R"j({"representation":"edge","entries":[["V(0,0)",5]]})j");
  ASSERT_EQ(call({"check", "--config", config}), kExitOk);
  const auto j = io::json::parse(out_.str());
  EXPECT_EQ(j["state"]["conservative"], false);
  EXPECT_EQ(j["state"]["criterion"]["verdict"], "non-terminating");
  const auto open = write("open.json",
                          R"j({"kind":"planar","edges":[[0,1],[1,2],[2,0]],"faces":[[[0,1],[1,1],[2,1]]]})j");
  EXPECT_EQ(call({"check", "--complex", open}), kExitInvalidInput);
  EXPECT_NE(out_.str().find("only one incident face"), std::string::npos);
}

TEST_F(CliTest, RenderIsByteStable) {
  const auto complex = write("c.json", R"j({"kind":"grid","distinguished":"F(0,0)"})j");
  const auto config = write("s.json", R"j({"representation":"face","entries":[["F(0,0)",1],["F(1,0)",1]]})j");
  ASSERT_EQ(call({"render", "--complex", complex, "--config", config,
                  "--window", "-1,-1,2,1"}),
            kExitOk);
  const auto first = out_.str();
  call({"render", "--complex", complex, "--config", config, "--window",
        "-1,-1,2,1"});
  EXPECT_EQ(first, out_.str());
  EXPECT_EQ(call({"render", "--config", config}), kExitInvalidInput);
  EXPECT_EQ(call({"render", "--config", config, "--window", "1,2"}),
            kExitInvalidInput);
  ASSERT_EQ(call({"render", "--config", config, "--window", "0,0,1,0",
                  "--format", "svg"}),
            kExitOk);
  EXPECT_EQ(out_.str().rfind("<svg", 0), 0u);
}

}  // namespace
}  // namespace flowfire::cli
