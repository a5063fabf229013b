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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bli/embed_io.hpp"
#include "bli/eval.hpp"
#include "bli/hypotheses.hpp"
#include "bli/lexicon.hpp"
#include "bli/procrustes.hpp"
#include "bli/sgm.hpp"

namespace bli {

enum class Method { kProcrustes, kSgm, kSoftSgm, kIterProc, kIterSgm, kCombined };
enum class Strategy { kAddAll, kStochastic, kActive };
enum class Engine { kProcrustes, kSgm };
enum class VocabMode { kDictionary, kTopN };

// Hard cap on iteration counts.
inline constexpr int kMaxIterations = 50;

struct ExperimentSpec {
  std::string src_embeddings;
  std::string tgt_embeddings;
  std::string dictionary;
  std::optional<std::size_t> max_words;
  int norm_passes = 1;  // 0 uses the vectors as loaded

  std::size_t seeds = 100;
  Method method = Method::kProcrustes;
  Strategy strategy = Strategy::kAddAll;
  int stochastic_h = 100;
  int iterations = 10;       // N
  int proc_inner = 5;        // IterProc iterations inside each combined cycle
  Engine start = Engine::kProcrustes;
  Engine pull = Engine::kProcrustes;
  int csls_k = 10;
  int soft_runs = 10;
  int top_k = 5;
  bool proc_one_to_one = false;  // also solve a one-to-one Procrustes matching
  std::uint64_t rng_seed = 0;
  VocabMode vocab_mode = VocabMode::kDictionary;
  std::size_t top_n = 0;     // vocabulary size per side for kTopN
  SgmOptions sgm;

  // Throws UsageError listing every problem found.
  void validate() const;
};

std::string to_string(Method m);
std::string to_string(Strategy s);
std::string to_string(Engine e);
std::string to_string(VocabMode v);
std::string to_string(SgmInit i);
Method parse_method(const std::string& s);
Strategy parse_strategy(const std::string& s);
Engine parse_engine(const std::string& s);
VocabMode parse_vocab_mode(const std::string& s);
SgmInit parse_sgm_init(const std::string& s);

// Source/target pairs of local vocabulary indices.
using PairList = std::vector<std::pair<int, int>>;

// A BLI instance restricted to a working vocabulary of equal size on both
// sides. Local index i on the source side is embedding row src_rows[i]; the
// first seeds.size() local indices on each side are the gold seeds, in
// order, so gold seed k is the local pair (k, k).
struct BliProblem {
  EmbeddingMatrix src;
  EmbeddingMatrix tgt;
  Lexicon seeds;
  Lexicon test;
  std::vector<int> src_rows;
  std::vector<int> tgt_rows;
  RowMatrix src_local;  // src rows in local order
  RowMatrix tgt_local;
  PairList gold_seed_pairs;
  PairList gold_test_pairs;   // test pairs whose words are in the working vocab
  std::size_t dropped_pairs = 0;  // dictionary pairs missing from embeddings

  std::size_t num_seeds() const { return seeds.size(); }
  std::size_t size() const { return src_rows.size(); }
  std::vector<std::string> src_tokens() const;
  std::vector<std::string> tgt_tokens() const;
};

// Builds the working vocabulary. `lexicon` must already be one-to-one; pairs
// with out-of-vocabulary words are dropped before splitting. Embeddings are
// used as given (callers normalize first).
BliProblem make_problem(EmbeddingMatrix src, EmbeddingMatrix tgt, const Lexicon& lexicon,
                        std::size_t seeds, VocabMode mode = VocabMode::kDictionary,
                        std::size_t top_n = 0);

// Loads, normalizes and filters everything named in the spec.
BliProblem load_problem(const ExperimentSpec& spec);

// {(x, y) : fwd(x) = y and rev(y) = x}, sorted by source.
PairList intersect_hypotheses(const std::map<int, int>& fwd, const std::map<int, int>& rev);

// {(x, fwd(x))} united with {(rev(y), y)}, sorted, duplicates removed.
PairList union_hypotheses(const std::map<int, int>& fwd, const std::map<int, int>& rev);

// The pairs present in `gold_full`.
PairList oracle_judge(const PairList& pairs, const PairList& gold_full);

// Gold pairs first, then each hypothesis pair in order unless its source or
// target is already taken. The admitted non-gold pairs are sorted by source.
PairList merge_seeds(const PairList& gold, const PairList& hyps);

struct IterationRecord {
  int cycle = 0;        // combined system only; 0 otherwise
  int iteration = 0;    // 1-based within its component
  std::string component;  // "proc" or "sgm"
  double forward_p_at_1 = 0.0;
  std::size_t intersection_size = 0;
  std::size_t intersection_new = 0;     // pairs not touching a gold seed word
  double intersection_precision = 0.0;  // over the new pairs, percent
  std::size_t forward_seeds = 0;
  std::size_t reverse_seeds = 0;
};

struct RunResult {
  HypothesisSet hypotheses;           // local source -> local target
  std::optional<Matching> matching;   // local source -> local target
  std::vector<IterationRecord> history;
  std::vector<PairList> seed_history;  // forward seed set used at each step
  MetricsReport metrics;
  TokenHypotheses token_hypotheses;
};

class Pipeline {
 public:
  Pipeline(const BliProblem& problem, ExperimentSpec spec);

  RunResult run();

  RunResult run_single();
  RunResult iterate(Engine engine);
  RunResult run_combined();

 private:
  struct DirectionalRun {
    HypothesisSet hyps;          // forward: src -> tgt, reverse: tgt -> src
    std::optional<Matching> matching;
  };

  DirectionalRun run_procrustes(const PairList& seeds, bool reverse, int top_k) const;
  DirectionalRun run_sgm(const PairList& seeds, bool reverse, Rng rng) const;
  std::pair<DirectionalRun, DirectionalRun> run_both(Engine engine, const PairList& fwd_seeds,
                                                     const PairList& rev_seeds, Rng fwd_rng,
                                                     Rng rev_rng) const;

  IterationRecord make_record(const DirectionalRun& fwd, const PairList& inter) const;
  void finish(RunResult& r) const;
  Rng stream(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const;

  const BliProblem& problem_;
  ExperimentSpec spec_;
  void ensure_graphs() const;

  // Local similarity graphs, built on first SGM use.
  mutable std::once_flag graphs_once_;
  mutable Eigen::MatrixXd gx_;
  mutable Eigen::MatrixXd gy_;
  PairList gold_full_;
};

}  // namespace bli
