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

#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "bli/embed_io.hpp"
#include "bli/errors.hpp"
#include "bli/parallel.hpp"

#ifndef BLI_VERSION
#define BLI_VERSION "unknown"
#endif

namespace bli::cli {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty()) {
    throw UsageError("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "off" || value == "no") return false;
  throw UsageError("bad value for " + key + ": '" + value + "' (expected true/false)");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

json record_to_json(const IterationRecord& r) {
  return json{{"cycle", r.cycle},
              {"iteration", r.iteration},
              {"component", r.component},
              {"forward_p_at_1", r.forward_p_at_1},
              {"intersection_size", r.intersection_size},
              {"intersection_new", r.intersection_new},
              {"intersection_precision", r.intersection_precision},
              {"forward_seeds", r.forward_seeds},
              {"reverse_seeds", r.reverse_seeds}};
}

IterationRecord record_from_json(const json& j) {
  IterationRecord r;
  r.cycle = j.at("cycle").get<int>();
  r.iteration = j.at("iteration").get<int>();
  r.component = j.at("component").get<std::string>();
  r.forward_p_at_1 = j.at("forward_p_at_1").get<double>();
  r.intersection_size = j.at("intersection_size").get<std::size_t>();
  r.intersection_new = j.at("intersection_new").get<std::size_t>();
  r.intersection_precision = j.at("intersection_precision").get<double>();
  r.forward_seeds = j.at("forward_seeds").get<std::size_t>();
  r.reverse_seeds = j.at("reverse_seeds").get<std::size_t>();
  return r;
}

bool same_record(const IterationRecord& a, const IterationRecord& b) {
  return a.cycle == b.cycle && a.iteration == b.iteration && a.component == b.component &&
         a.forward_p_at_1 == b.forward_p_at_1 && a.intersection_size == b.intersection_size &&
         a.intersection_new == b.intersection_new &&
         a.intersection_precision == b.intersection_precision &&
         a.forward_seeds == b.forward_seeds && a.reverse_seeds == b.reverse_seeds;
}

bool same_records(const std::vector<IterationRecord>& a, const std::vector<IterationRecord>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_record);
}

bool same_metrics(const MetricsReport& a, const MetricsReport& b) {
  return a.p_at_1 == b.p_at_1 && a.precision_at_5 == b.precision_at_5 &&
         a.recall_at_5 == b.recall_at_5 && a.f1_at_5 == b.f1_at_5 &&
         a.total_hyps == b.total_hyps && a.test_size == b.test_size &&
         a.correct_hyps == b.correct_hyps && a.correct_top1 == b.correct_top1 &&
         a.covered_sources == b.covered_sources;
}

void print_metrics(const MetricsReport& m, std::ostream& out) {
  out << "test words      " << m.test_size << '\n'
      << "P@1             " << round1(m.p_at_1) << '\n'
      << "precision@5     " << round1(m.precision_at_5) << '\n'
      << "recall@5        " << round1(m.recall_at_5) << '\n'
      << "F1@5            " << round1(m.f1_at_5) << '\n'
      << "total hyps      " << m.total_hyps << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Settings

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {
      "src-emb",  "tgt-emb",   "dict",         "max-words",     "norm-passes",
      "seeds",    "method",    "strategy",     "H",             "iterations",
      "proc-inner", "start",   "pull",         "csls-k",        "soft-runs",
      "top-k",    "proc-one-to-one", "rng-seed", "vocab",       "top-n",
      "sgm-max-iters", "sgm-eps", "sgm-shuffle", "sgm-init",
  };
  return keys;
}

void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "src-emb") spec.src_embeddings = value;
  else if (key == "tgt-emb") spec.tgt_embeddings = value;
  else if (key == "dict") spec.dictionary = value;
  else if (key == "max-words") {
    if (value.empty() || value == "all") spec.max_words.reset();
    else spec.max_words = parse_number<std::size_t>(key, value);
  } else if (key == "norm-passes") spec.norm_passes = parse_number<int>(key, value);
  else if (key == "seeds") spec.seeds = parse_number<std::size_t>(key, value);
  else if (key == "method") spec.method = parse_method(value);
  else if (key == "strategy") spec.strategy = parse_strategy(value);
  else if (key == "H") spec.stochastic_h = parse_number<int>(key, value);
  else if (key == "iterations") spec.iterations = parse_number<int>(key, value);
  else if (key == "proc-inner") spec.proc_inner = parse_number<int>(key, value);
  else if (key == "start") spec.start = parse_engine(value);
  else if (key == "pull") spec.pull = parse_engine(value);
  else if (key == "csls-k") spec.csls_k = parse_number<int>(key, value);
  else if (key == "soft-runs") spec.soft_runs = parse_number<int>(key, value);
  else if (key == "top-k") spec.top_k = parse_number<int>(key, value);
  else if (key == "proc-one-to-one") spec.proc_one_to_one = parse_flag(key, value);
  else if (key == "rng-seed") spec.rng_seed = parse_number<std::uint64_t>(key, value);
  else if (key == "vocab") spec.vocab_mode = parse_vocab_mode(value);
  else if (key == "top-n") spec.top_n = parse_number<std::size_t>(key, value);
  else if (key == "sgm-max-iters") spec.sgm.max_iters = parse_number<int>(key, value);
  else if (key == "sgm-eps") spec.sgm.eps = parse_number<double>(key, value);
  else if (key == "sgm-shuffle") spec.sgm.shuffle_input = parse_flag(key, value);
  else if (key == "sgm-init") spec.sgm.init = parse_sgm_init(value);
  else throw UsageError("unknown setting '" + key + "'");
}

std::map<std::string, std::string> spec_settings(const ExperimentSpec& spec) {
  return {
      {"src-emb", spec.src_embeddings},
      {"tgt-emb", spec.tgt_embeddings},
      {"dict", spec.dictionary},
      {"max-words", spec.max_words ? std::to_string(*spec.max_words) : "all"},
      {"norm-passes", std::to_string(spec.norm_passes)},
      {"seeds", std::to_string(spec.seeds)},
      {"method", to_string(spec.method)},
      {"strategy", to_string(spec.strategy)},
      {"H", std::to_string(spec.stochastic_h)},
      {"iterations", std::to_string(spec.iterations)},
      {"proc-inner", std::to_string(spec.proc_inner)},
      {"start", to_string(spec.start)},
      {"pull", to_string(spec.pull)},
      {"csls-k", std::to_string(spec.csls_k)},
      {"soft-runs", std::to_string(spec.soft_runs)},
      {"top-k", std::to_string(spec.top_k)},
      {"proc-one-to-one", spec.proc_one_to_one ? "true" : "false"},
      {"rng-seed", std::to_string(spec.rng_seed)},
      {"vocab", to_string(spec.vocab_mode)},
      {"top-n", std::to_string(spec.top_n)},
      {"sgm-max-iters", std::to_string(spec.sgm.max_iters)},
      {"sgm-eps", format_double(spec.sgm.eps)},
      {"sgm-shuffle", spec.sgm.shuffle_input ? "true" : "false"},
      {"sgm-init", to_string(spec.sgm.init)},
  };
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  const std::set<std::string> known(setting_keys().begin(), setting_keys().end());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known.contains(key)) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  if (in.bad()) throw IoError("read failed: " + path);
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis dumps

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_hypotheses(const TokenHypotheses& hyps, std::ostream& out) {
  for (const auto& [src, list] : hyps) {
    for (std::size_t r = 0; r < list.size(); ++r) {
      out << src << '\t' << list[r].first << '\t' << (r + 1) << '\t'
          << format_double(list[r].second) << '\n';
    }
  }
}

void write_hypotheses(const TokenHypotheses& hyps, const std::string& path) {
  std::ofstream out = open_out(path);
  write_hypotheses(hyps, out);
  finish_out(out, path);
}

TokenHypotheses read_hypotheses(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open hypotheses " + path);
  std::map<std::string, std::map<std::size_t, std::pair<std::string, double>>> ranked;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(path + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (f.size() != 4) fail("expected 4 tab-separated fields");
    if (f[0].empty() || f[1].empty()) fail("empty token");
    std::size_t rank = 0;
    double score = 0.0;
    {
      auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), rank);
      if (ec != std::errc() || p != f[2].data() + f[2].size() || rank == 0) fail("bad rank");
    }
    {
      auto [p, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), score);
      if (ec != std::errc() || p != f[3].data() + f[3].size()) fail("bad score");
    }
    if (!ranked[f[0]].emplace(rank, std::make_pair(f[1], score)).second) {
      fail("duplicate rank " + f[2] + " for '" + f[0] + "'");
    }
  }
  if (in.bad()) throw IoError("read failed: " + path);

  TokenHypotheses out;
  for (auto& [src, by_rank] : ranked) {
    auto& list = out[src];
    std::size_t expect = 1;
    for (auto& [rank, entry] : by_rank) {
      if (rank != expect++) {
        throw ParseError(path + ": ranks for '" + src + "' are not 1..k");
      }
      list.push_back(std::move(entry));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

bool operator==(const RunReport& a, const RunReport& b) {
  if (a.cycles.size() != b.cycles.size()) return false;
  for (std::size_t i = 0; i < a.cycles.size(); ++i) {
    if (a.cycles[i].cycle != b.cycles[i].cycle ||
        !same_records(a.cycles[i].steps, b.cycles[i].steps)) {
      return false;
    }
  }
  return a.version == b.version && a.rng_seed == b.rng_seed && a.spec == b.spec &&
         a.vocab_size == b.vocab_size && a.seed_count == b.seed_count &&
         a.dropped_pairs == b.dropped_pairs && same_records(a.iterations, b.iterations) &&
         same_metrics(a.metrics, b.metrics) &&
         a.timings.load_seconds == b.timings.load_seconds &&
         a.timings.run_seconds == b.timings.run_seconds &&
         a.timings.total_seconds == b.timings.total_seconds;
}

json metrics_to_json(const MetricsReport& m) {
  return json{{"p_at_1", m.p_at_1},
              {"precision_at_5", m.precision_at_5},
              {"recall_at_5", m.recall_at_5},
              {"f1_at_5", m.f1_at_5},
              {"total_hyps", m.total_hyps},
              {"test_size", m.test_size},
              {"correct_hyps", m.correct_hyps},
              {"correct_top1", m.correct_top1},
              {"covered_sources", m.covered_sources},
              {"display",
               {{"p_at_1", round1(m.p_at_1)},
                {"precision_at_5", round1(m.precision_at_5)},
                {"recall_at_5", round1(m.recall_at_5)},
                {"f1_at_5", round1(m.f1_at_5)}}}};
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.p_at_1 = j.at("p_at_1").get<double>();
  m.precision_at_5 = j.at("precision_at_5").get<double>();
  m.recall_at_5 = j.at("recall_at_5").get<double>();
  m.f1_at_5 = j.at("f1_at_5").get<double>();
  m.total_hyps = j.at("total_hyps").get<std::size_t>();
  m.test_size = j.at("test_size").get<std::size_t>();
  m.correct_hyps = j.at("correct_hyps").get<std::size_t>();
  m.correct_top1 = j.at("correct_top1").get<std::size_t>();
  m.covered_sources = j.at("covered_sources").get<std::size_t>();
  return m;
}

json to_json(const RunReport& r) {
  json iterations = json::array();
  for (const auto& rec : r.iterations) iterations.push_back(record_to_json(rec));
  json cycles = json::array();
  for (const auto& c : r.cycles) {
    json steps = json::array();
    for (const auto& rec : c.steps) steps.push_back(record_to_json(rec));
    cycles.push_back({{"cycle", c.cycle}, {"steps", steps}});
  }
  return json{{"version", r.version},
              {"rng_seed", r.rng_seed},
              {"spec", r.spec},
              {"vocab_size", r.vocab_size},
              {"seed_count", r.seed_count},
              {"dropped_pairs", r.dropped_pairs},
              {"iterations", iterations},
              {"cycles", cycles},
              {"metrics", metrics_to_json(r.metrics)},
              {"timings",
               {{"load_seconds", r.timings.load_seconds},
                {"run_seconds", r.timings.run_seconds},
                {"total_seconds", r.timings.total_seconds}}}};
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.version = j.at("version").get<std::string>();
  r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  r.spec = j.at("spec").get<std::map<std::string, std::string>>();
  r.vocab_size = j.at("vocab_size").get<std::size_t>();
  r.seed_count = j.at("seed_count").get<std::size_t>();
  r.dropped_pairs = j.at("dropped_pairs").get<std::size_t>();
  for (const auto& rec : j.at("iterations")) r.iterations.push_back(record_from_json(rec));
  for (const auto& c : j.at("cycles")) {
    CycleRecord cr;
    cr.cycle = c.at("cycle").get<int>();
    for (const auto& rec : c.at("steps")) cr.steps.push_back(record_from_json(rec));
    r.cycles.push_back(std::move(cr));
  }
  r.metrics = metrics_from_json(j.at("metrics"));
  const json& t = j.at("timings");
  r.timings.load_seconds = t.at("load_seconds").get<double>();
  r.timings.run_seconds = t.at("run_seconds").get<double>();
  r.timings.total_seconds = t.at("total_seconds").get<double>();
  return r;
}

// ---------------------------------------------------------------------------
// Commands

PrepResult prep(const std::string& dict, const std::string& src_emb, const std::string& tgt_emb,
                const std::string& out_dir, const std::vector<std::size_t>& seed_counts,
                std::optional<std::size_t> max_words) {
  const Lexicon raw = load_dictionary(dict);
  const EmbeddingMatrix src = load_embeddings(src_emb, max_words);
  const EmbeddingMatrix tgt = load_embeddings(tgt_emb, max_words);
  const Lexicon one_to_one = filter_one_to_one(raw);
  const Lexicon kept = restrict_to_vocab(one_to_one, src, tgt);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const std::filesystem::path dir(out_dir);
  save_lexicon(kept, (dir / "lexicon.tsv").string());

  PrepResult res{raw.size(), one_to_one.size(), kept.size(), {}};
  for (std::size_t s : seed_counts) {
    if (s == 0 || s >= kept.size()) continue;
    const SplitLexicon parts = split(kept, s);
    save_lexicon(parts.seeds, (dir / ("seeds_" + std::to_string(s) + ".tsv")).string());
    save_lexicon(parts.test, (dir / ("test_" + std::to_string(s) + ".tsv")).string());
    res.seed_counts.push_back(s);
  }
  return res;
}

RunOutput run(const ExperimentSpec& spec) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const BliProblem problem = load_problem(spec);
  const double load_s = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  RunResult result = Pipeline(problem, spec).run();
  const double run_s = seconds_since(t1);

  RunOutput out;
  RunReport& r = out.report;
  r.version = BLI_VERSION;
  r.rng_seed = spec.rng_seed;
  r.spec = spec_settings(spec);
  r.vocab_size = problem.size();
  r.seed_count = problem.num_seeds();
  r.dropped_pairs = problem.dropped_pairs;
  r.iterations = result.history;
  if (spec.method == Method::kCombined) {
    for (const auto& rec : result.history) {
      if (r.cycles.empty() || r.cycles.back().cycle != rec.cycle) {
        r.cycles.push_back({rec.cycle, {}});
      }
      r.cycles.back().steps.push_back(rec);
    }
  }
  r.metrics = result.metrics;
  r.timings = {load_s, run_s, seconds_since(t0)};
  out.result = std::move(result);
  out.test = problem.test;
  return out;
}

namespace {

void add_run_options(CLI::App& cmd, std::map<std::string, std::string>& values) {
  static const std::map<std::string, std::string> help = {
      {"src-emb", "source embeddings (.vec or .vec.gz)"},
      {"tgt-emb", "target embeddings"},
      {"dict", "bilingual dictionary"},
      {"max-words", "load only the first N rows of each embedding file"},
      {"norm-passes", "normalization passes; 0 keeps raw vectors"},
      {"seeds", "number of gold seed pairs"},
      {"method", "procrustes|sgm|softsgm|iterproc|itersgm|combined"},
      {"strategy", "add_all|stochastic|active"},
      {"H", "stochastic sample growth per iteration"},
      {"iterations", "iterations (or cycles for combined)"},
      {"proc-inner", "Procrustes iterations per combined cycle"},
      {"start", "first component of each combined cycle: proc|sgm"},
      {"pull", "component whose output ends a combined run: proc|sgm"},
      {"csls-k", "CSLS neighborhood size"},
      {"soft-runs", "SGM runs for softsgm"},
      {"top-k", "hypotheses kept per source (at most 5)"},
      {"proc-one-to-one", "also solve a one-to-one Procrustes matching"},
      {"rng-seed", "master random seed"},
      {"vocab", "dictionary|top-n"},
      {"top-n", "vocabulary size per side for top-n"},
      {"sgm-max-iters", "Frank-Wolfe iteration cap"},
      {"sgm-eps", "Frank-Wolfe stopping threshold"},
      {"sgm-shuffle", "shuffle non-seed vertices before solving"},
      {"sgm-init", "barycenter|randomized"},
  };
  for (const std::string& key : setting_keys()) {
    cmd.add_option("--" + key, values[key], help.at(key));
  }
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bilingual lexicon induction with Procrustes and seeded graph matching", "bli"};
  app.set_version_flag("--version", std::string(BLI_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (BLI_NUM_THREADS caps this)");

  auto* prep_cmd = app.add_subcommand("prep", "filter a dictionary and write seed/test splits");
  std::string dict, src_emb, tgt_emb, out_dir;
  std::vector<std::size_t> seed_counts{100, 200, 500, 1000, 2000, 4000};
  std::size_t prep_max_words = 0;
  prep_cmd->add_option("--dict", dict, "bilingual dictionary")->required();
  prep_cmd->add_option("--src-emb", src_emb, "source embeddings")->required();
  prep_cmd->add_option("--tgt-emb", tgt_emb, "target embeddings")->required();
  prep_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  prep_cmd->add_option("--seeds", seed_counts, "seed counts to split at")->delimiter(',');
  prep_cmd->add_option("--max-words", prep_max_words, "embedding rows to load (0 = all)");

  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  std::string config, report_path, hyps_path, test_out;
  std::map<std::string, std::string> values;
  run_cmd->add_option("--config", config, "key = value settings file");
  run_cmd->add_option("--out", report_path, "JSON report path");
  run_cmd->add_option("--hyps", hyps_path, "hypothesis TSV path");
  run_cmd->add_option("--test-out", test_out, "write the evaluated test pairs here");
  add_run_options(*run_cmd, values);

  auto* eval_cmd = app.add_subcommand("eval", "score a hypothesis dump against gold pairs");
  std::string eval_hyps, gold, eval_out;
  eval_cmd->add_option("--hyps", eval_hyps, "hypothesis TSV")->required();
  eval_cmd->add_option("--gold", gold, "gold test pairs")->required();
  eval_cmd->add_option("--out", eval_out, "also write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (threads > 0) set_thread_count(threads);

  if (prep_cmd->parsed()) {
    std::optional<std::size_t> mw;
    if (prep_max_words > 0) mw = prep_max_words;
    const PrepResult r = prep(dict, src_emb, tgt_emb, out_dir, seed_counts, mw);
    out << r.raw_pairs << " pairs read\n"
        << r.one_to_one_pairs << " pairs one-to-one\n"
        << r.retained << " pairs retained\n";
    for (std::size_t s : r.seed_counts) {
      out << "split " << s << ": " << s << " seeds, " << (r.retained - s) << " test\n";
    }
    return kOk;
  }

  if (run_cmd->parsed()) {
    ExperimentSpec spec;
    std::map<std::string, std::string> settings;
    if (!config.empty()) settings = read_config(config);
    for (const std::string& key : setting_keys()) {
      if (run_cmd->count("--" + key) > 0) settings[key] = values[key];
    }
    for (const auto& [k, v] : settings) apply_setting(spec, k, v);
    if (spec.src_embeddings.empty() || spec.tgt_embeddings.empty() || spec.dictionary.empty()) {
      throw UsageError("run needs src-emb, tgt-emb and dict");
    }
    const RunOutput res = run(spec);
    if (!hyps_path.empty()) write_hypotheses(res.result.token_hypotheses, hyps_path);
    if (!test_out.empty()) save_lexicon(res.test, test_out);
    const json report = to_json(res.report);
    if (!report_path.empty()) {
      std::ofstream f = open_out(report_path);
      f << report.dump(2) << '\n';
      finish_out(f, report_path);
    }
    out << "method " << to_string(spec.method) << ", " << res.report.vocab_size
        << " words per side, " << res.report.seed_count << " seeds\n";
    print_metrics(res.report.metrics, out);
    return kOk;
  }

  const TokenHypotheses hyps = read_hypotheses(eval_hyps);
  const Lexicon gold_lex = load_dictionary(gold);
  const MetricsReport m = evaluate(hyps, gold_lex);
  print_metrics(m, out);
  const json j = metrics_to_json(m);
  out << j.dump() << '\n';
  if (!eval_out.empty()) {
    std::ofstream f = open_out(eval_out);
    f << j.dump(2) << '\n';
    finish_out(f, eval_out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(argc, argv, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace bli::cli
