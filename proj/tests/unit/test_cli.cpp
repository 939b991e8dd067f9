// Copyright 2026 The levinv Authors. All rights reserved.
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
#include <sstream>

#include "json.hpp"
#include "levinv/cli.hpp"
#include "levinv/generator.hpp"
#include "levinv/instance.hpp"
#include "levinv/parallel.hpp"
#include "levinv/text_document.hpp"
#include "support.hpp"

namespace levinv {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) break;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  std::string gen(const std::string& name, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"gen", "--n", "20", "--d", "4", "--seed", "7", "--margin", "0.5",
                                     "--out", dir_.file(name)};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return dir_.file(name);
  }

  testing::ScratchDir dir_;
};

TEST_F(CliTest, GenWritesInstanceAndTruth) {
  const std::string prefix = gen("a", {"--mode", "pure"});
  EXPECT_NO_THROW(load_instance(prefix + ".inst"));
  EXPECT_NO_THROW(load_ground_truth(prefix + ".truth"));
  const Result r = run({"gen", "--n", "20", "--d", "4", "--seed", "7", "--out", dir_.file("b")});
  const auto manifest = nlohmann::json::parse(r.out);
  EXPECT_EQ(manifest["command"], "gen");
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["config"]["n"], "20");
  EXPECT_EQ(manifest["outputs"].size(), 2u);
  EXPECT_EQ(read_file(prefix + ".inst"), read_file(dir_.file("b") + ".inst"));
}

TEST_F(CliTest, GenUsageErrors) {
  EXPECT_EQ(run({"gen", "--d", "4"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"gen", "--n", "3", "--d", "4", "--out", dir_.file("x")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"gen", "--n", "5", "--d", "2", "--mode", "odd", "--out", dir_.file("x")}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, GenRegularizedRecordsReg) {
  const Result r = run({"gen", "--n", "20", "--d", "4", "--mode", "regularized", "--l", "1e-3",
                        "--beta", "0.01", "--out", dir_.file("reg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = nlohmann::json::parse(r.out);
  EXPECT_EQ(manifest["reg"]["l"], 1e-3);
  const GroundTruth t = load_ground_truth(dir_.file("reg") + ".truth");
  EXPECT_EQ(t.mode, GenMode::Regularized);
  EXPECT_FALSE(t.reg.is_zero());
}

TEST_F(CliTest, NewtonSolveConverges) {
  const std::string p = gen("n");
  const Result r = run({"solve", "--instance", p + ".inst", "--truth", p + ".truth", "--method", "newton"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"iter", "loss_exp", "loss_reg", "loss_total", "grad_norm",
                                               "step_size", "halvings", "r_t", "time_ms", "note"}));
  EXPECT_LE(std::stod(rows.back()[7]), 1e-10);
  EXPECT_EQ(rows.back()[9], "converged");
}

TEST_F(CliTest, SolveExitCodes) {
  const std::string p = gen("g");
  const Result cap = run({"solve", "--instance", p + ".inst", "--truth", p + ".truth", "--method", "gd",
                          "--eta", "0", "--max-iters", "10"});
  EXPECT_EQ(cap.code, cli::kExitIterationCap);
  EXPECT_EQ(run({"solve", "--instance", dir_.file("missing.inst")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"solve", "--instance", p + ".inst", "--method", "bfgs"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"solve", "--instance", p + ".inst", "--x0", "1,2"}).code, cli::kExitUsage);

  // Two rows, one column; the first gradient step from x = 1 with eta = 100 crosses s_1 = 0.
  write_file(dir_.file("tiny.inst"), "n=2\nd=1\nA:\n1\n1\nb:\n0 -1\nc:\n1 0\n");
  const Result trapped = run({"solve", "--instance", dir_.file("tiny.inst"), "--method", "gd", "--x0", "1",
                              "--eta", "100", "--max-halvings", "0"});
  EXPECT_EQ(trapped.code, cli::kExitStepTrapped);
  const auto rows = csv_rows(trapped.out);
  EXPECT_NE(rows.back()[9].find("step-trapped"), std::string::npos) << rows.back()[9];
}

TEST_F(CliTest, SolveIsReproducible) {
  const std::string p = gen("rep");
  auto body = [&](const std::string& out) {
    std::vector<std::string> args = {"solve", "--instance", p + ".inst", "--truth", p + ".truth", "--method",
                                     "gd", "--eta", "0.5", "--max-iters", "30", "--out", out,
                                     "--manifest", out + ".json"};
    EXPECT_EQ(run(args).code, cli::kExitIterationCap);
    auto rows = csv_rows(read_file(out));
    for (auto& row : rows) row[8].clear();  // time_ms
    return rows;
  };
  EXPECT_EQ(body(dir_.file("r1.csv")), body(dir_.file("r2.csv")));
  const auto manifest = nlohmann::json::parse(read_file(dir_.file("r1.csv") + ".json"));
  EXPECT_EQ(manifest["outputs"].size(), 2u);
  EXPECT_EQ(manifest["exit_code"], 4);
}

TEST_F(CliTest, VerifyRandom) {
  const Result r = run({"verify", "--random", "40", "8", "10", "1"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(csv_rows(r.out).size(), 1u + 10u * 3u);
}

TEST_F(CliTest, VerifyLiteralAgainstFdBreaches) {
  const Result r = run({"verify", "--random", "20", "4", "5", "2", "--mode", "paper-literal", "--against", "fd"});
  EXPECT_EQ(r.code, cli::kExitBreach);
  EXPECT_NE(r.err.find("hessian_literal"), std::string::npos) << r.err;
  EXPECT_EQ(run({"verify", "--random", "20", "4", "5", "2", "--against", "identity"}).code, cli::kExitOk);
}

TEST_F(CliTest, VerifySquareInstance) {
  write_file(dir_.file("sq.inst"), "n=2\nd=2\nA:\n2 1\n-1 1\nb:\n-3 -4\nc:\n1 1\n");
  const Result r = run({"verify", "--instance", dir_.file("sq.inst")});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err << r.out;
  EXPECT_EQ(run({"verify"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--random", "3", "4", "1", "0"}).code, cli::kExitUsage);
}

TEST_F(CliTest, Diag) {
  const std::string p = gen("d");
  const Result r = run({"diag", "--instance", p + ".inst", "--truth", p + ".truth", "--samples", "40"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const auto rows = csv_rows(r.out);
  EXPECT_EQ(rows[0][0], "report");
  EXPECT_GT(rows.size(), 20u);
  EXPECT_EQ(run({"diag", "--instance", p + ".inst"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"diag", "--instance", p + ".inst", "--truth", p + ".truth", "--report", "nope"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, Bench) {
  EXPECT_EQ(run({"bench"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bench", "--grid", ""}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bench", "--grid", "8x16"}).code, cli::kExitUsage);
  const Result r = run({"bench", "--grid", "32x4,64x4", "--reps", "2", "--slopes", dir_.file("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv_rows(r.out).size(), 3u);
  const auto slopes = csv_rows(read_file(dir_.file("s.csv")));
  EXPECT_EQ(slopes[0][0], "axis");
  EXPECT_EQ(slopes[1][0], "n");
}

TEST_F(CliTest, ThreadsFlagAndEnvironment) {
  const int saved = thread_count();
  const std::string p = gen("t");
  EXPECT_EQ(run({"--threads", "3", "verify", "--instance", p + ".inst", "--truth", p + ".truth"}).code, 0);
  EXPECT_EQ(thread_count(), 3);
  ::setenv("LEVINV_THREADS", "2", 1);
  EXPECT_EQ(run({"verify", "--instance", p + ".inst", "--truth", p + ".truth"}).code, 0);
  EXPECT_EQ(thread_count(), 2);
  ::unsetenv("LEVINV_THREADS");
  EXPECT_EQ(run({"--threads", "0", "verify", "--random", "5", "1", "1", "0"}).code, cli::kExitUsage);
  set_thread_count(saved);
}

}  // namespace
}  // namespace levinv
