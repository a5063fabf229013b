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
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bli {

struct Hypothesis {
  int target = -1;
  double score = 0.0;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

// Ranked translation candidates per source index, best first. Lists are
// sorted by descending score, ties by ascending target index, and contain no
// repeated target.
class HypothesisSet {
 public:
  // Sorts `candidates` into canonical order and keeps the first top_k
  // distinct targets (all when top_k == 0).
  void set(int source, std::vector<Hypothesis> candidates, std::size_t top_k = 0);

  const std::map<int, std::vector<Hypothesis>>& entries() const { return entries_; }
  const std::vector<Hypothesis>* find(int source) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t total() const;

  // Best target per source.
  std::map<int, int> top1() const;

  // Keeps at most k hypotheses per source.
  HypothesisSet truncated(std::size_t k) const;

  friend bool operator==(const HypothesisSet&, const HypothesisSet&) = default;

 private:
  std::map<int, std::vector<Hypothesis>> entries_;
};

// Canonical ordering used by every ranked list.
bool ranks_before(const Hypothesis& a, const Hypothesis& b);

// A bijection between two equal-size vertex sets where vertex i < num_seeds
// is fixed to target i (the identity block) and the rest was solved.
struct Matching {
  std::size_t num_seeds = 0;
  std::vector<int> target_of;

  std::size_t size() const { return target_of.size(); }

  // (source, target) pairs for the seed block and the solved block.
  std::vector<std::pair<int, int>> seed_part() const;
  std::vector<std::pair<int, int>> solved_part() const;

  bool is_bijection() const;

  // One hypothesis per source with score 1.
  HypothesisSet to_hypotheses() const;
};

// String-keyed hypotheses; the form written to and read from TSV dumps.
using TokenHypotheses =
    std::map<std::string, std::vector<std::pair<std::string, double>>>;

TokenHypotheses to_tokens(const HypothesisSet& hyps,
                          const std::vector<std::string>& src_vocab,
                          const std::vector<std::string>& tgt_vocab);

}  // namespace bli
