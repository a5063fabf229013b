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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bli/eval.hpp"
#include "bli/hypotheses.hpp"
#include "bli/lexicon.hpp"
#include "bli/pipelines.hpp"

namespace bli::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kParse = 3,
  kNumeric = 4,
};

// Setting names accepted both as --flags and as config file keys.
const std::vector<std::string>& setting_keys();

// Flat "key = value" file; '#' starts a comment. Throws ParseError on lines
// without '=' and UsageError on unknown keys.
std::map<std::string, std::string> read_config(const std::string& path);

// Applies one named setting. Throws UsageError on unknown keys or bad values.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

// Inverse of apply_setting over every key.
std::map<std::string, std::string> spec_settings(const ExperimentSpec& spec);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// One "src\ttgt\trank\tscore" line per hypothesis, sources in byte order,
// ranks from 1.
void write_hypotheses(const TokenHypotheses& hyps, std::ostream& out);
void write_hypotheses(const TokenHypotheses& hyps, const std::string& path);

// Throws ParseError on malformed lines, duplicated or non-contiguous ranks.
TokenHypotheses read_hypotheses(const std::string& path);

struct CycleRecord {
  int cycle = 0;
  std::vector<IterationRecord> steps;
};

struct Timings {
  double load_seconds = 0.0;
  double run_seconds = 0.0;
  double total_seconds = 0.0;
};

struct RunReport {
  std::string version;
  std::uint64_t rng_seed = 0;
  std::map<std::string, std::string> spec;
  std::size_t vocab_size = 0;
  std::size_t seed_count = 0;
  std::size_t dropped_pairs = 0;
  std::vector<IterationRecord> iterations;  // every step in run order
  std::vector<CycleRecord> cycles;          // combined method only
  MetricsReport metrics;
  Timings timings;

  friend bool operator==(const RunReport&, const RunReport&);
};

nlohmann::json metrics_to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

struct PrepResult {
  std::size_t raw_pairs = 0;
  std::size_t one_to_one_pairs = 0;
  std::size_t retained = 0;
  std::vector<std::size_t> seed_counts;  // splits actually written
};

// Loads the dictionary, keeps a one-to-one subset whose words exist in both
// embedding files, and writes lexicon.tsv plus seeds_<s>.tsv / test_<s>.tsv
// for every s smaller than the retained size.
PrepResult prep(const std::string& dict, const std::string& src_emb,
                const std::string& tgt_emb, const std::string& out_dir,
                const std::vector<std::size_t>& seed_counts,
                std::optional<std::size_t> max_words = {});

struct RunOutput {
  RunReport report;
  RunResult result;
  Lexicon test;
};

RunOutput run(const ExperimentSpec& spec);

// Entry point for the `bli` executable. Returns the process exit code.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bli::cli
