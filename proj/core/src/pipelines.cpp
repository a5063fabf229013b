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

#include "bli/pipelines.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bli/errors.hpp"
#include "bli/parallel.hpp"

namespace bli {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Stream tags, so that no two random consumers share a substream.
enum StreamTag : std::uint64_t {
  kTagSingle = 1,
  kTagSoft = 2,
  kTagEngine = 3,
  kTagSample = 4,
  kTagCombinedSgm = 5,
};

MatrixXd permute(const MatrixXd& g, const std::vector<int>& order) {
  const auto n = static_cast<Index>(order.size());
  MatrixXd out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) out(i, j) = g(order[i], order[j]);
  }
  return out;
}

// Seeds first (in the given order), then every other index ascending.
std::vector<int> seeds_first(const std::vector<int>& seed_side, std::size_t n) {
  std::vector<int> order = seed_side;
  std::vector<char> used(n, 0);
  for (int i : seed_side) used[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) order.push_back(static_cast<int>(i));
  }
  return order;
}

RowMatrix select_rows(const RowMatrix& m, const std::vector<int>& rows) {
  RowMatrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

PairList flipped(const PairList& pairs) {
  PairList out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.emplace_back(b, a);
  return out;
}

std::vector<int> identity_order(std::size_t n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "; " : "") << parts[i];
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentSpec

std::string to_string(Method m) {
  switch (m) {
    case Method::kProcrustes: return "procrustes";
    case Method::kSgm: return "sgm";
    case Method::kSoftSgm: return "softsgm";
    case Method::kIterProc: return "iterproc";
    case Method::kIterSgm: return "itersgm";
    case Method::kCombined: return "combined";
  }
  return "?";
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kAddAll: return "add_all";
    case Strategy::kStochastic: return "stochastic";
    case Strategy::kActive: return "active";
  }
  return "?";
}

std::string to_string(Engine e) { return e == Engine::kProcrustes ? "proc" : "sgm"; }

std::string to_string(VocabMode v) {
  return v == VocabMode::kDictionary ? "dictionary" : "top-n";
}

std::string to_string(SgmInit i) {
  return i == SgmInit::kBarycenter ? "barycenter" : "randomized";
}

Method parse_method(const std::string& s) {
  for (Method m : {Method::kProcrustes, Method::kSgm, Method::kSoftSgm, Method::kIterProc,
                   Method::kIterSgm, Method::kCombined}) {
    if (s == to_string(m)) return m;
  }
  throw UsageError("unknown method '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
  for (Strategy v : {Strategy::kAddAll, Strategy::kStochastic, Strategy::kActive}) {
    if (s == to_string(v)) return v;
  }
  throw UsageError("unknown strategy '" + s + "'");
}

Engine parse_engine(const std::string& s) {
  if (s == "proc" || s == "procrustes" || s == "iterproc") return Engine::kProcrustes;
  if (s == "sgm") return Engine::kSgm;
  throw UsageError("unknown engine '" + s + "'");
}

VocabMode parse_vocab_mode(const std::string& s) {
  if (s == "dictionary" || s == "dictionary-restricted") return VocabMode::kDictionary;
  if (s == "top-n" || s == "topn") return VocabMode::kTopN;
  throw UsageError("unknown vocab mode '" + s + "'");
}

SgmInit parse_sgm_init(const std::string& s) {
  if (s == "barycenter") return SgmInit::kBarycenter;
  if (s == "randomized" || s == "random") return SgmInit::kRandomized;
  throw UsageError("unknown sgm init '" + s + "'");
}

void ExperimentSpec::validate() const {
  std::vector<std::string> errors;
  if (seeds == 0) errors.emplace_back("seeds must be positive");
  if (norm_passes < 0) errors.emplace_back("norm passes must be >= 0");
  if (stochastic_h < 1) errors.emplace_back("H must be positive");
  if (iterations < 1 || iterations > kMaxIterations) {
    errors.emplace_back("iterations must be in [1, " + std::to_string(kMaxIterations) + "]");
  }
  if (proc_inner < 0 || proc_inner > kMaxIterations) {
    errors.emplace_back("proc-inner must be in [0, " + std::to_string(kMaxIterations) + "]");
  }
  if (csls_k < 1) errors.emplace_back("csls-k must be positive");
  if (soft_runs < 1) errors.emplace_back("soft-runs must be positive");
  if (top_k < 1 || top_k > 5) errors.emplace_back("top-k must be in [1, 5]");
  if (sgm.max_iters < 1) errors.emplace_back("sgm max iterations must be positive");
  if (!(sgm.eps >= 0.0)) errors.emplace_back("sgm eps must be non-negative");
  if (max_words && *max_words == 0) errors.emplace_back("max-words must be positive");
  if (vocab_mode == VocabMode::kTopN && top_n <= seeds) {
    errors.emplace_back("top-n vocabulary must be larger than the seed count");
  }
  if (!errors.empty()) throw UsageError("invalid experiment: " + join(errors));
}

// ---------------------------------------------------------------------------
// Problem assembly

std::vector<std::string> BliProblem::src_tokens() const {
  std::vector<std::string> out;
  out.reserve(src_rows.size());
  for (int r : src_rows) out.push_back(src.token(static_cast<std::size_t>(r)));
  return out;
}

std::vector<std::string> BliProblem::tgt_tokens() const {
  std::vector<std::string> out;
  out.reserve(tgt_rows.size());
  for (int r : tgt_rows) out.push_back(tgt.token(static_cast<std::size_t>(r)));
  return out;
}

BliProblem make_problem(EmbeddingMatrix src, EmbeddingMatrix tgt, const Lexicon& lexicon,
                        std::size_t seeds, VocabMode mode, std::size_t top_n) {
  if (!lexicon.is_one_to_one()) throw UsageError("lexicon must be one-to-one");
  VocabFilterStats stats;
  const Lexicon usable = restrict_to_vocab(lexicon, src, tgt, &stats);
  SplitLexicon parts = split(usable, seeds);

  BliProblem p;
  p.dropped_pairs = stats.dropped();
  p.seeds = std::move(parts.seeds);
  p.test = std::move(parts.test);

  for (const auto& pair : p.seeds.pairs) {
    p.src_rows.push_back(*src.index_of(pair.src));
    p.tgt_rows.push_back(*tgt.index_of(pair.tgt));
  }

  if (mode == VocabMode::kDictionary) {
    std::vector<int> src_test;
    std::vector<int> tgt_test;
    for (const auto& pair : p.test.pairs) {
      src_test.push_back(*src.index_of(pair.src));
      tgt_test.push_back(*tgt.index_of(pair.tgt));
    }
    // Frequency order on each side independently; the target order carries
    // no information about the gold alignment.
    std::sort(src_test.begin(), src_test.end());
    std::sort(tgt_test.begin(), tgt_test.end());
    p.src_rows.insert(p.src_rows.end(), src_test.begin(), src_test.end());
    p.tgt_rows.insert(p.tgt_rows.end(), tgt_test.begin(), tgt_test.end());
  } else {
    if (top_n <= seeds) throw UsageError("top-n vocabulary must exceed the seed count");
    if (top_n > src.size() || top_n > tgt.size()) {
      throw UsageError("top-n vocabulary larger than an embedding vocabulary");
    }
    auto fill = [top_n](std::vector<int>& rows, std::size_t vocab_size) {
      std::vector<char> used(vocab_size, 0);
      for (int r : rows) used[static_cast<std::size_t>(r)] = 1;
      for (std::size_t i = 0; i < vocab_size && rows.size() < top_n; ++i) {
        if (!used[i]) rows.push_back(static_cast<int>(i));
      }
    };
    fill(p.src_rows, src.size());
    fill(p.tgt_rows, tgt.size());
  }

  p.src_local = src.rows(p.src_rows);
  p.tgt_local = tgt.rows(p.tgt_rows);

  for (std::size_t k = 0; k < p.seeds.size(); ++k) {
    p.gold_seed_pairs.emplace_back(static_cast<int>(k), static_cast<int>(k));
  }
  std::unordered_map<int, int> src_local_of;
  std::unordered_map<int, int> tgt_local_of;
  for (std::size_t i = 0; i < p.src_rows.size(); ++i) src_local_of[p.src_rows[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < p.tgt_rows.size(); ++j) tgt_local_of[p.tgt_rows[j]] = static_cast<int>(j);
  for (const auto& pair : p.test.pairs) {
    auto si = src_local_of.find(*src.index_of(pair.src));
    auto ti = tgt_local_of.find(*tgt.index_of(pair.tgt));
    if (si != src_local_of.end() && ti != tgt_local_of.end()) {
      p.gold_test_pairs.emplace_back(si->second, ti->second);
    }
  }

  p.src = std::move(src);
  p.tgt = std::move(tgt);
  return p;
}

BliProblem load_problem(const ExperimentSpec& spec) {
  spec.validate();
  auto prepare = [&spec](const std::string& path) {
    EmbeddingMatrix raw = load_embeddings(path, spec.max_words);
    return spec.norm_passes == 0 ? raw : normalize(raw, spec.norm_passes);
  };
  EmbeddingMatrix src = prepare(spec.src_embeddings);
  EmbeddingMatrix tgt = prepare(spec.tgt_embeddings);
  const Lexicon lex = filter_one_to_one(load_dictionary(spec.dictionary));
  return make_problem(std::move(src), std::move(tgt), lex, spec.seeds, spec.vocab_mode,
                      spec.top_n);
}

// ---------------------------------------------------------------------------
// Hypothesis combination

PairList intersect_hypotheses(const std::map<int, int>& fwd, const std::map<int, int>& rev) {
  PairList out;
  for (const auto& [x, y] : fwd) {
    auto it = rev.find(y);
    if (it != rev.end() && it->second == x) out.emplace_back(x, y);
  }
  return out;
}

PairList union_hypotheses(const std::map<int, int>& fwd, const std::map<int, int>& rev) {
  std::set<std::pair<int, int>> all;
  for (const auto& [x, y] : fwd) all.emplace(x, y);
  for (const auto& [y, x] : rev) all.emplace(x, y);
  return PairList(all.begin(), all.end());
}

PairList oracle_judge(const PairList& pairs, const PairList& gold_full) {
  const std::set<std::pair<int, int>> gold(gold_full.begin(), gold_full.end());
  PairList out;
  for (const auto& p : pairs) {
    if (gold.contains(p)) out.push_back(p);
  }
  return out;
}

PairList merge_seeds(const PairList& gold, const PairList& hyps) {
  std::set<int> used_src;
  std::set<int> used_tgt;
  PairList out;
  for (const auto& [x, y] : gold) {
    if (used_src.contains(x) || used_tgt.contains(y)) continue;
    used_src.insert(x);
    used_tgt.insert(y);
    out.emplace_back(x, y);
  }
  PairList extra;
  for (const auto& [x, y] : hyps) {
    if (used_src.contains(x) || used_tgt.contains(y)) continue;
    used_src.insert(x);
    used_tgt.insert(y);
    extra.emplace_back(x, y);
  }
  std::sort(extra.begin(), extra.end());
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(const BliProblem& problem, ExperimentSpec spec)
    : problem_(problem), spec_(std::move(spec)) {
  if (problem_.src_rows.size() != problem_.tgt_rows.size()) {
    throw UsageError("working vocabularies must have equal size");
  }
  if (problem_.num_seeds() == 0) throw UsageError("at least one gold seed is required");
  gold_full_ = problem_.gold_seed_pairs;
  gold_full_.insert(gold_full_.end(), problem_.gold_test_pairs.begin(),
                    problem_.gold_test_pairs.end());
}

void Pipeline::ensure_graphs() const {
  std::call_once(graphs_once_, [this] {
    gx_ = build_graph(problem_.src_local, identity_order(problem_.size())).g;
    gy_ = build_graph(problem_.tgt_local, identity_order(problem_.size())).g;
  });
}

Rng Pipeline::stream(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                     std::uint64_t d) const {
  std::uint64_t s = spec_.rng_seed;
  for (std::uint64_t v : {a, b, c, d}) s = mix_seed(s, v);
  return Rng(s);
}

Pipeline::DirectionalRun Pipeline::run_procrustes(const PairList& seeds, bool reverse,
                                                  int top_k) const {
  if (seeds.empty()) throw NumericError("procrustes: empty seed set");
  const RowMatrix& a = reverse ? problem_.tgt_local : problem_.src_local;
  const RowMatrix& b = reverse ? problem_.src_local : problem_.tgt_local;
  std::vector<int> rows_a;
  std::vector<int> rows_b;
  for (const auto& [x, y] : seeds) {
    rows_a.push_back(reverse ? y : x);
    rows_b.push_back(reverse ? x : y);
  }
  const OrthogonalMap w = solve_procrustes(select_rows(a, rows_a), select_rows(b, rows_b));
  const ExtractOptions opts{Scorer::kCsls, spec_.csls_k};
  return {extract_hypotheses(w.apply(a), b, top_k, opts), std::nullopt};
}

Pipeline::DirectionalRun Pipeline::run_sgm(const PairList& seeds, bool reverse,
                                           Rng rng) const {
  ensure_graphs();
  const std::size_t n = problem_.size();
  std::vector<int> seed_a;
  std::vector<int> seed_b;
  for (const auto& [x, y] : seeds) {
    seed_a.push_back(reverse ? y : x);
    seed_b.push_back(reverse ? x : y);
  }
  const std::vector<int> order_a = seeds_first(seed_a, n);
  const std::vector<int> order_b = seeds_first(seed_b, n);

  Matching local{0, std::vector<int>(n, -1)};
  if (seeds.size() >= n) {
    for (std::size_t i = 0; i < n; ++i) local.target_of[order_a[i]] = order_b[i];
  } else {
    const SimilarityGraph ga{permute(reverse ? gy_ : gx_, order_a), order_a};
    const SimilarityGraph gb{permute(reverse ? gx_ : gy_, order_b), order_b};
    const SgmResult res = sgm(ga, gb, seeds.size(), rng, spec_.sgm);
    for (std::size_t i = 0; i < n; ++i) {
      local.target_of[order_a[i]] = order_b[res.matching.target_of[i]];
    }
  }
  return {local.to_hypotheses(), local};
}

std::pair<Pipeline::DirectionalRun, Pipeline::DirectionalRun> Pipeline::run_both(
    Engine engine, const PairList& fwd_seeds, const PairList& rev_seeds, Rng fwd_rng,
    Rng rev_rng) const {
  DirectionalRun runs[2];
  parallel_for(0, 2, [&](std::size_t dir) {
    const bool reverse = dir == 1;
    const PairList& seeds = reverse ? rev_seeds : fwd_seeds;
    if (engine == Engine::kProcrustes) {
      runs[dir] = run_procrustes(seeds, reverse, spec_.top_k);
    } else {
      runs[dir] = run_sgm(seeds, reverse, reverse ? rev_rng : fwd_rng);
    }
  });
  return {std::move(runs[0]), std::move(runs[1])};
}

IterationRecord Pipeline::make_record(const DirectionalRun& fwd, const PairList& inter) const {
  IterationRecord rec;
  const auto top1 = fwd.hyps.top1();
  std::size_t correct = 0;
  for (const auto& [x, y] : problem_.gold_test_pairs) {
    auto it = top1.find(x);
    if (it != top1.end() && it->second == y) ++correct;
  }
  if (!problem_.test.empty()) {
    rec.forward_p_at_1 = 100.0 * static_cast<double>(correct) /
                         static_cast<double>(problem_.test.size());
  }

  const std::set<std::pair<int, int>> gold(gold_full_.begin(), gold_full_.end());
  const auto s = static_cast<int>(problem_.num_seeds());
  std::size_t fresh = 0;
  std::size_t fresh_correct = 0;
  for (const auto& p : inter) {
    if (p.first < s || p.second < s) continue;
    ++fresh;
    if (gold.contains(p)) ++fresh_correct;
  }
  rec.intersection_size = inter.size();
  rec.intersection_new = fresh;
  rec.intersection_precision =
      fresh == 0 ? 0.0 : 100.0 * static_cast<double>(fresh_correct) / static_cast<double>(fresh);
  return rec;
}

void Pipeline::finish(RunResult& r) const {
  r.token_hypotheses = to_tokens(r.hypotheses, problem_.src_tokens(), problem_.tgt_tokens());
  r.metrics = evaluate(r.token_hypotheses, problem_.test);
}

RunResult Pipeline::run() {
  spec_.validate();
  switch (spec_.method) {
    case Method::kProcrustes:
    case Method::kSgm:
    case Method::kSoftSgm:
      return run_single();
    case Method::kIterProc:
      return iterate(Engine::kProcrustes);
    case Method::kIterSgm:
      return iterate(Engine::kSgm);
    case Method::kCombined:
      return run_combined();
  }
  throw UsageError("unknown method");
}

RunResult Pipeline::run_single() {
  RunResult r;
  const PairList& gold = problem_.gold_seed_pairs;
  switch (spec_.method) {
    case Method::kProcrustes: {
      r.hypotheses = run_procrustes(gold, false, spec_.top_k).hyps;
      if (spec_.proc_one_to_one) {
        std::vector<int> rows(gold.size());
        std::iota(rows.begin(), rows.end(), 0);
        const OrthogonalMap w = solve_procrustes(select_rows(problem_.src_local, rows),
                                                 select_rows(problem_.tgt_local, rows));
        r.matching = extract_one_to_one(w.apply(problem_.src_local), problem_.tgt_local,
                                        {Scorer::kCsls, spec_.csls_k});
      }
      break;
    }
    case Method::kSgm: {
      DirectionalRun run = run_sgm(gold, false, stream(kTagSingle, 0, 0, 0));
      r.hypotheses = std::move(run.hyps);
      r.matching = std::move(run.matching);
      break;
    }
    case Method::kSoftSgm: {
      // Gold seeds already occupy the leading local indices on both sides.
      ensure_graphs();
      const std::vector<int> identity = identity_order(problem_.size());
      SgmOptions opts = spec_.sgm;
      opts.init = SgmInit::kRandomized;
      const SimilarityGraph ga{gx_, identity};
      const SimilarityGraph gb{gy_, identity};
      const std::uint64_t seed = mix_seed(spec_.rng_seed, kTagSoft);
      const SoftMatchDistribution dist =
          soft_sgm(ga, gb, problem_.num_seeds(), spec_.soft_runs, seed, opts);
      r.hypotheses = top_k_from_distribution(dist, spec_.top_k);
      break;
    }
    default:
      throw UsageError("run_single: not a single-run method");
  }
  r.seed_history.push_back(gold);
  finish(r);
  return r;
}

RunResult Pipeline::iterate(Engine engine) {
  RunResult r;
  const PairList& gold = problem_.gold_seed_pairs;
  const auto s = static_cast<int>(problem_.num_seeds());
  PairList fwd_seeds = gold;
  PairList rev_seeds = gold;

  for (int t = 1; t <= spec_.iterations; ++t) {
    auto [fwd, rev] = run_both(engine, fwd_seeds, flipped(rev_seeds),
                               stream(kTagEngine, 0, static_cast<std::uint64_t>(t), 0),
                               stream(kTagEngine, 0, static_cast<std::uint64_t>(t), 1));
    const auto f = fwd.hyps.top1();
    const auto g = rev.hyps.top1();
    const PairList inter = intersect_hypotheses(f, g);

    IterationRecord rec = make_record(fwd, inter);
    rec.iteration = t;
    rec.component = to_string(engine);
    rec.forward_seeds = fwd_seeds.size();
    rec.reverse_seeds = rev_seeds.size();
    r.history.push_back(rec);
    r.seed_history.push_back(fwd_seeds);

    if (t == spec_.iterations) {
      r.hypotheses = std::move(fwd.hyps);
      r.matching = std::move(fwd.matching);
      break;
    }

    switch (spec_.strategy) {
      case Strategy::kAddAll:
        fwd_seeds = rev_seeds = merge_seeds(gold, inter);
        break;
      case Strategy::kStochastic: {
        PairList pool;
        for (const auto& p : inter) {
          if (p.first >= s && p.second >= s) pool.push_back(p);
        }
        const auto want = static_cast<std::size_t>(t) * static_cast<std::size_t>(spec_.stochastic_h);
        const int k = static_cast<int>(std::min(want, pool.size()));
        auto draw = [&](std::uint64_t dir) {
          Rng rng = stream(kTagSample, 0, static_cast<std::uint64_t>(t), dir);
          PairList picked;
          for (int idx : rng.sample_without_replacement(static_cast<int>(pool.size()), k)) {
            picked.push_back(pool[static_cast<std::size_t>(idx)]);
          }
          return merge_seeds(gold, picked);
        };
        fwd_seeds = draw(0);
        rev_seeds = draw(1);
        break;
      }
      case Strategy::kActive:
        fwd_seeds = rev_seeds = merge_seeds(gold, oracle_judge(union_hypotheses(f, g), gold_full_));
        break;
    }
  }

  finish(r);
  return r;
}

RunResult Pipeline::run_combined() {
  RunResult r;
  const PairList& gold = problem_.gold_seed_pairs;
  PairList seeds = gold;
  const Engine order[2] = {spec_.start, spec_.start == Engine::kSgm ? Engine::kProcrustes
                                                                      : Engine::kSgm};
  bool done = false;

  for (int cycle = 1; cycle <= spec_.iterations && !done; ++cycle) {
    const bool last_cycle = cycle == spec_.iterations;
    for (Engine component : order) {
      if (component == Engine::kSgm) {
        auto [fwd, rev] =
            run_both(Engine::kSgm, seeds, flipped(seeds),
                     stream(kTagCombinedSgm, static_cast<std::uint64_t>(cycle), 0, 0),
                     stream(kTagCombinedSgm, static_cast<std::uint64_t>(cycle), 0, 1));
        const PairList inter = intersect_hypotheses(fwd.hyps.top1(), rev.hyps.top1());
        IterationRecord rec = make_record(fwd, inter);
        rec.cycle = cycle;
        rec.iteration = 1;
        rec.component = "sgm";
        rec.forward_seeds = rec.reverse_seeds = seeds.size();
        r.history.push_back(rec);
        r.seed_history.push_back(seeds);
        if (last_cycle && spec_.pull == Engine::kSgm) {
          r.hypotheses = std::move(fwd.hyps);
          r.matching = std::move(fwd.matching);
          done = true;
          break;
        }
        seeds = merge_seeds(gold, inter);
      } else {
        const bool pull_here = last_cycle && spec_.pull == Engine::kProcrustes;
        for (int it = 1; it <= spec_.proc_inner; ++it) {
          auto [fwd, rev] = run_both(Engine::kProcrustes, seeds, flipped(seeds), Rng(0), Rng(0));
          const PairList inter = intersect_hypotheses(fwd.hyps.top1(), rev.hyps.top1());
          IterationRecord rec = make_record(fwd, inter);
          rec.cycle = cycle;
          rec.iteration = it;
          rec.component = "proc";
          rec.forward_seeds = rec.reverse_seeds = seeds.size();
          r.history.push_back(rec);
          r.seed_history.push_back(seeds);
          if (pull_here && it == spec_.proc_inner) {
            r.hypotheses = std::move(fwd.hyps);
            done = true;
            break;
          }
          seeds = merge_seeds(gold, inter);
        }
        if (pull_here && !done) {
          // No inner iterations: extract from one forward run on the current seeds.
          r.hypotheses = run_procrustes(seeds, false, spec_.top_k).hyps;
          r.seed_history.push_back(seeds);
          done = true;
        }
        if (done) break;
      }
    }
  }

  finish(r);
  return r;
}

}  // namespace bli
