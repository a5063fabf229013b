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

#include "bli/hypotheses.hpp"

#include <algorithm>
#include <unordered_set>

namespace bli {

bool ranks_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.target < b.target;
}

void HypothesisSet::set(int source, std::vector<Hypothesis> candidates,
                        std::size_t top_k) {
  std::sort(candidates.begin(), candidates.end(), ranks_before);
  std::vector<Hypothesis> kept;
  std::unordered_set<int> seen;
  for (const auto& h : candidates) {
    if (top_k != 0 && kept.size() == top_k) break;
    if (seen.insert(h.target).second) kept.push_back(h);
  }
  entries_[source] = std::move(kept);
}

const std::vector<Hypothesis>* HypothesisSet::find(int source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t HypothesisSet::total() const {
  std::size_t n = 0;
  for (const auto& [src, list] : entries_) n += list.size();
  return n;
}

std::map<int, int> HypothesisSet::top1() const {
  std::map<int, int> out;
  for (const auto& [src, list] : entries_) {
    if (!list.empty()) out.emplace(src, list.front().target);
  }
  return out;
}

HypothesisSet HypothesisSet::truncated(std::size_t k) const {
  HypothesisSet out;
  for (const auto& [src, list] : entries_) {
    auto& dst = out.entries_[src];
    dst.assign(list.begin(),
               list.begin() + static_cast<std::ptrdiff_t>(std::min(k, list.size())));
  }
  return out;
}

std::vector<std::pair<int, int>> Matching::seed_part() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < num_seeds && i < target_of.size(); ++i) {
    out.emplace_back(static_cast<int>(i), target_of[i]);
  }
  return out;
}

std::vector<std::pair<int, int>> Matching::solved_part() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = num_seeds; i < target_of.size(); ++i) {
    out.emplace_back(static_cast<int>(i), target_of[i]);
  }
  return out;
}

bool Matching::is_bijection() const {
  const auto n = static_cast<int>(target_of.size());
  std::vector<char> used(target_of.size(), 0);
  for (int t : target_of) {
    if (t < 0 || t >= n || used[t]) return false;
    used[t] = 1;
  }
  return true;
}

HypothesisSet Matching::to_hypotheses() const {
  HypothesisSet out;
  for (std::size_t i = 0; i < target_of.size(); ++i) {
    out.set(static_cast<int>(i), {{target_of[i], 1.0}});
  }
  return out;
}

TokenHypotheses to_tokens(const HypothesisSet& hyps,
                          const std::vector<std::string>& src_vocab,
                          const std::vector<std::string>& tgt_vocab) {
  TokenHypotheses out;
  for (const auto& [src, list] : hyps.entries()) {
    auto& dst = out[src_vocab.at(static_cast<std::size_t>(src))];
    for (const auto& h : list) {
      dst.emplace_back(tgt_vocab.at(static_cast<std::size_t>(h.target)), h.score);
    }
  }
  return out;
}

}  // namespace bli
