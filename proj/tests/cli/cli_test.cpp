// Copyright 2026 The bli Authors
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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "bli/errors.hpp"
#include "bli/parallel.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace bli::cli {
namespace {

using bli::testing::TempDir;
using bli::testing::write_text;
using nlohmann::json;

std::string fixture(const std::string& name) { return std::string(BLI_FIXTURE_DIR) + "/" + name; }

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Planted synthetic data on disk: embeddings plus a dictionary.
struct SyntheticFiles {
  explicit SyntheticFiles(const TempDir& dir, int n = 50, double noise = 0.1) {
    auto inst = bli::testing::make_planted(n, 8, noise, 99);
    src = dir.file("src.vec");
    tgt = dir.file("tgt.vec");
    dict = dir.file("dict.txt");
    bli::testing::write_vec_file(src, inst.src);
    bli::testing::write_vec_file(tgt, inst.tgt);
    save_lexicon(inst.lexicon, dict);
  }
  std::vector<std::string> args() const {
    return {"--src-emb", src, "--tgt-emb", tgt, "--dict", dict};
  }
  std::string src, tgt, dict;
};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(Prep, TinyFixtureRetainsThree) {
  TempDir dir;
  write_text(dir.file("s.vec"), "3 2\ndog 1 0\ncat 0 1\nhouse 1 1\n");
  write_text(dir.file("t.vec"), "4 2\nHund 1 0\nKöter 0 1\nKatze 1 1\nHaus 1 2\n");
  const auto r = invoke({"prep", "--dict", fixture("tiny_dict.txt"), "--src-emb", dir.file("s.vec"),
                         "--tgt-emb", dir.file("t.vec"), "--out-dir", dir.file("out"), "--seeds",
                         "1,2,3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("3 pairs retained"), std::string::npos) << r.out;
  EXPECT_EQ(load_dictionary(dir.file("out/lexicon.tsv")).size(), 3u);
  EXPECT_EQ(load_dictionary(dir.file("out/seeds_1.tsv")).size(), 1u);
  EXPECT_EQ(load_dictionary(dir.file("out/test_1.tsv")).size(), 2u);
  EXPECT_EQ(load_dictionary(dir.file("out/test_2.tsv")).size(), 1u);
  // s = 3 leaves no test words, so no split is written.
  EXPECT_FALSE(std::filesystem::exists(dir.file("out/seeds_3.tsv")));
}

TEST(ExitCodes, PerErrorClass) {
  TempDir dir;
  EXPECT_EQ(invoke({"prep", "--dict", dir.file("nope.txt"), "--src-emb", dir.file("a"),
                    "--tgt-emb", dir.file("b"), "--out-dir", dir.file("o")})
                .code,
            kIo);
  EXPECT_EQ(invoke({"frobnicate"}).code, kUsage);
  EXPECT_EQ(invoke({"run", "--method", "sgm"}).code, kUsage);
  EXPECT_EQ(invoke({"eval", "--hyps", dir.file("missing.tsv"), "--gold", fixture("tiny_dict.txt")}).code,
            kIo);

  write_text(dir.file("bad.tsv"), "a\tb\tx\t1\n");
  EXPECT_EQ(invoke({"eval", "--hyps", dir.file("bad.tsv"), "--gold", fixture("golden_dict.txt")}).code,
            kParse);
  write_text(dir.file("bad.vec"), "2 2\na 1 0\n");
  EXPECT_EQ(invoke({"run", "--src-emb", dir.file("bad.vec"), "--tgt-emb", fixture("golden_tgt.vec"),
                    "--dict", fixture("golden_dict.txt"), "--seeds", "1"})
                .code,
            kParse);
  // A single row collapses to zero under mean-centering.
  write_text(dir.file("one.vec"), "1 2\nx1 3 4\n");
  EXPECT_EQ(invoke({"run", "--src-emb", dir.file("one.vec"), "--tgt-emb", fixture("golden_tgt.vec"),
                    "--dict", fixture("golden_dict.txt"), "--seeds", "1"})
                .code,
            kNumeric);

  const SyntheticFiles f(dir);
  const auto bad = invoke(concat({"run", "--method", "nope", "--iterations", "99", "--seeds", "5"},
                                 f.args()));
  EXPECT_EQ(bad.code, kUsage);
  const auto invalid = invoke(concat({"run", "--iterations", "99", "--top-k", "9"}, f.args()));
  EXPECT_EQ(invalid.code, kUsage);
  EXPECT_NE(invalid.err.find("iterations"), std::string::npos);
  EXPECT_NE(invalid.err.find("top-k"), std::string::npos);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST(Run, GoldenFixture) {
  TempDir dir;
  const auto r = invoke({"run", "--method", "sgm", "--seeds", "1", "--norm-passes", "0",
                         "--src-emb", fixture("golden_src.vec"), "--tgt-emb",
                         fixture("golden_tgt.vec"), "--dict", fixture("golden_dict.txt"),
                         "--hyps", dir.file("h.tsv"), "--out", dir.file("r.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string dump = slurp(dir.file("h.tsv"));
  EXPECT_NE(dump.find("x2\ty4\t1\t1\n"), std::string::npos) << dump;
  EXPECT_NE(dump.find("x3\ty2\t1\t1\n"), std::string::npos);
  EXPECT_NE(dump.find("x4\ty3\t1\t1\n"), std::string::npos);
  const json report = json::parse(slurp(dir.file("r.json")));
  EXPECT_EQ(report["metrics"]["p_at_1"].get<double>(), 100.0);
}

TEST(Run, ByteIdenticalAcrossRunsAndThreads) {
  TempDir dir;
  const SyntheticFiles f(dir, 60, 0.3);
  const std::vector<std::vector<std::string>> configs = {
      {"--method", "procrustes"},
      {"--method", "softsgm", "--soft-runs", "6"},
      {"--method", "itersgm", "--strategy", "stochastic", "--H", "3", "--iterations", "3"},
      {"--method", "combined", "--iterations", "2", "--proc-inner", "2", "--start", "sgm"},
  };
  int idx = 0;
  for (const auto& cfg : configs) {
    std::vector<std::string> dumps;
    for (const char* threads : {"1", "1", "3"}) {
      const std::string path = dir.file("h" + std::to_string(idx++) + ".tsv");
      auto args = concat(concat({"run", "--seeds", "10", "--rng-seed", "7", "--threads", threads,
                                 "--hyps", path},
                                cfg),
                         f.args());
      const auto r = invoke(args);
      ASSERT_EQ(r.code, kOk) << r.err;
      dumps.push_back(slurp(path));
    }
    set_thread_count(0);
    EXPECT_FALSE(dumps[0].empty());
    EXPECT_EQ(dumps[0], dumps[1]) << cfg[1];
    EXPECT_EQ(dumps[0], dumps[2]) << cfg[1];
  }
}

TEST(Run, EvalReproducesRunMetrics) {
  TempDir dir;
  const SyntheticFiles f(dir, 60, 0.4);
  for (const char* method : {"procrustes", "sgm", "softsgm", "iterproc", "combined"}) {
    const auto r = invoke(concat({"run", "--method", method, "--seeds", "12", "--iterations", "2",
                                  "--proc-inner", "1", "--hyps", dir.file("h.tsv"), "--out",
                                  dir.file("r.json"), "--test-out", dir.file("test.tsv")},
                                 f.args()));
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto e = invoke({"eval", "--hyps", dir.file("h.tsv"), "--gold", dir.file("test.tsv"),
                           "--out", dir.file("e.json")});
    ASSERT_EQ(e.code, kOk) << e.err;
    const json run_metrics = json::parse(slurp(dir.file("r.json")))["metrics"];
    const json eval_metrics = json::parse(slurp(dir.file("e.json")));
    EXPECT_EQ(run_metrics, eval_metrics) << method;
  }
}

TEST(Run, CombinedReportsTenCycles) {
  TempDir dir;
  const SyntheticFiles f(dir, 40, 0.1);
  const auto r = invoke(concat({"run", "--method", "combined", "--start", "sgm", "--pull", "proc",
                                "--seeds", "8", "--out", dir.file("r.json")},
                               f.args()));
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(slurp(dir.file("r.json")));
  ASSERT_EQ(report["cycles"].size(), 10u);
  for (int c = 0; c < 10; ++c) {
    EXPECT_EQ(report["cycles"][c]["cycle"].get<int>(), c + 1);
    EXPECT_EQ(report["cycles"][c]["steps"][0]["component"].get<std::string>(), "sgm");
  }
  // Every cycle has one SGM step and five Procrustes steps.
  EXPECT_EQ(report["iterations"].size(), 60u);
}

TEST(Run, ConfigFileWithFlagOverride) {
  TempDir dir;
  const SyntheticFiles f(dir, 40, 0.1);
  write_text(dir.file("exp.cfg"), "# experiment\nmethod = itersgm\niterations = 4\nseeds=8\n"
                                  "src-emb = " + f.src + "\ntgt-emb = " + f.tgt +
                                  "\ndict = " + f.dict + "\n");
  const auto r = invoke({"run", "--config", dir.file("exp.cfg"), "--iterations", "2", "--out",
                         dir.file("r.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(slurp(dir.file("r.json")));
  EXPECT_EQ(report["spec"]["method"], "itersgm");
  EXPECT_EQ(report["spec"]["iterations"], "2");
  EXPECT_EQ(report["iterations"].size(), 2u);

  write_text(dir.file("bad.cfg"), "colour = blue\n");
  EXPECT_EQ(invoke({"run", "--config", dir.file("bad.cfg")}).code, kUsage);
  write_text(dir.file("bad2.cfg"), "method sgm\n");
  EXPECT_EQ(invoke({"run", "--config", dir.file("bad2.cfg")}).code, kParse);
  EXPECT_EQ(invoke({"run", "--config", dir.file("none.cfg")}).code, kIo);
}

TEST(Report, RoundTripsThroughJson) {
  TempDir dir;
  const SyntheticFiles f(dir, 40, 0.1);
  ExperimentSpec spec;
  for (const auto& [k, v] : std::map<std::string, std::string>{
           {"src-emb", f.src}, {"tgt-emb", f.tgt}, {"dict", f.dict}, {"method", "combined"},
           {"iterations", "2"}, {"seeds", "8"}, {"sgm-eps", "0.01"}}) {
    apply_setting(spec, k, v);
  }
  const RunOutput out = run(spec);
  const RunReport back = report_from_json(json::parse(to_json(out.report).dump()));
  EXPECT_TRUE(back == out.report);

  // The spec echo reproduces the spec.
  ExperimentSpec again;
  for (const auto& [k, v] : out.report.spec) apply_setting(again, k, v);
  EXPECT_EQ(spec_settings(again), out.report.spec);
}

TEST(Hypotheses, TsvRoundTripAndErrors) {
  TempDir dir;
  TokenHypotheses h;
  h["b"] = {{"y", 0.1}, {"z", -1e-300}};
  h["a"] = {{"x", 1.0 / 3.0}};
  write_hypotheses(h, dir.file("h.tsv"));
  EXPECT_EQ(slurp(dir.file("h.tsv")), "a\tx\t1\t0.3333333333333333\nb\ty\t1\t0.1\nb\tz\t2\t-1e-300\n");
  EXPECT_EQ(read_hypotheses(dir.file("h.tsv")), h);

  write_text(dir.file("gap.tsv"), "a\tx\t1\t0\na\ty\t3\t0\n");
  EXPECT_THROW(read_hypotheses(dir.file("gap.tsv")), ParseError);
  write_text(dir.file("dup.tsv"), "a\tx\t1\t0\na\ty\t1\t0\n");
  EXPECT_THROW(read_hypotheses(dir.file("dup.tsv")), ParseError);
  write_text(dir.file("few.tsv"), "a\tx\t1\n");
  EXPECT_THROW(read_hypotheses(dir.file("few.tsv")), ParseError);
}

TEST(Eval, ThreeFixtures) {
  TempDir dir;
  write_text(dir.file("gold.tsv"), "a\tA\nb\tB\nc\tC\nd\tD\n");
  write_text(dir.file("all.tsv"), "a\tA\t1\t1\nb\tB\t1\t1\nc\tC\t1\t1\nd\tD\t1\t1\n");
  write_text(dir.file("none.tsv"), "a\tB\t1\t1\nb\tA\t1\t1\nc\tD\t1\t1\nd\tC\t1\t1\n");
  // Recount by hand: top-1 right for a and c; gold listed for a, b, c; 7 pairs.
  write_text(dir.file("mixed.tsv"),
             "a\tA\t1\t1\na\tX\t2\t0\nb\tX\t1\t1\nb\tB\t2\t0\nc\tC\t1\t1\nd\tX\t1\t1\nd\tY\t2\t0\n"
             "z\tA\t1\t1\n");
  auto metrics = [&](const std::string& hyps) {
    const auto r = invoke({"eval", "--hyps", dir.file(hyps), "--gold", dir.file("gold.tsv"),
                           "--out", dir.file("m.json")});
    EXPECT_EQ(r.code, kOk) << r.err;
    return json::parse(slurp(dir.file("m.json")));
  };
  EXPECT_EQ(metrics("all.tsv")["p_at_1"].get<double>(), 100.0);
  EXPECT_EQ(metrics("none.tsv")["p_at_1"].get<double>(), 0.0);
  const json m = metrics("mixed.tsv");
  EXPECT_EQ(m["p_at_1"].get<double>(), 50.0);
  EXPECT_EQ(m["total_hyps"].get<int>(), 7);
  EXPECT_EQ(m["correct_hyps"].get<int>(), 3);
  EXPECT_DOUBLE_EQ(m["precision_at_5"].get<double>(), 300.0 / 7.0);
  EXPECT_DOUBLE_EQ(m["recall_at_5"].get<double>(), 75.0);
}

}  // namespace
}  // namespace bli::cli
