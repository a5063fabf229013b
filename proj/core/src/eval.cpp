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

#include "bli/eval.hpp"

#include <cmath>
#include <string>

#include "bli/errors.hpp"

namespace bli {
namespace {

void check_gold(const Lexicon& gold) {
  if (gold.empty()) throw UsageError("empty test set");
  if (!gold.is_one_to_one()) throw UsageError("gold test set is not one-to-one");
}

const std::vector<std::pair<std::string, double>>* lookup(const TokenHypotheses& hyps,
                                                          const std::string& src) {
  auto it = hyps.find(src);
  return it == hyps.end() ? nullptr : &it->second;
}

std::size_t count_top1_correct(const TokenHypotheses& hyps,
                               const Lexicon& gold_test) {
  std::size_t correct = 0;
  for (const auto& p : gold_test.pairs) {
    const auto* list = lookup(hyps, p.src);
    if (list && !list->empty() && list->front().first == p.tgt) ++correct;
  }
  return correct;
}

}  // namespace

double f1_score(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double round1(double pct) { return std::round(pct * 10.0) / 10.0; }

double p_at_1(const TokenHypotheses& hyps, const Lexicon& gold_test) {
  check_gold(gold_test);
  return 100.0 * static_cast<double>(count_top1_correct(hyps, gold_test)) /
         static_cast<double>(gold_test.size());
}

PrfAt5 prf_at_5(const TokenHypotheses& hyps, const Lexicon& gold_test) {
  check_gold(gold_test);
  PrfAt5 out;
  for (const auto& p : gold_test.pairs) {
    const auto* list = lookup(hyps, p.src);
    if (!list) continue;
    if (list->size() > 5) {
      throw UsageError("more than 5 hypotheses for '" + p.src + "'");
    }
    out.total_hyps += list->size();
    bool covered = false;
    for (const auto& [tgt, score] : *list) {
      if (tgt == p.tgt) {
        ++out.correct_hyps;
        covered = true;
      }
    }
    if (covered) ++out.covered_sources;
  }
  out.precision = out.total_hyps == 0
                      ? 0.0
                      : 100.0 * static_cast<double>(out.correct_hyps) /
                            static_cast<double>(out.total_hyps);
  out.recall = 100.0 * static_cast<double>(out.covered_sources) /
               static_cast<double>(gold_test.size());
  out.f1 = f1_score(out.precision, out.recall);
  return out;
}

MetricsReport evaluate(const TokenHypotheses& hyps, const Lexicon& gold_test) {
  TokenHypotheses top5;
  for (const auto& [src, list] : hyps) {
    auto& dst = top5[src];
    dst.assign(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(
                                                std::min<std::size_t>(5, list.size())));
  }
  MetricsReport r;
  r.p_at_1 = p_at_1(hyps, gold_test);
  const PrfAt5 prf = prf_at_5(top5, gold_test);
  r.precision_at_5 = prf.precision;
  r.recall_at_5 = prf.recall;
  r.f1_at_5 = prf.f1;
  r.total_hyps = prf.total_hyps;
  r.correct_hyps = prf.correct_hyps;
  r.covered_sources = prf.covered_sources;
  r.test_size = gold_test.size();
  r.correct_top1 = count_top1_correct(hyps, gold_test);
  return r;
}

}  // namespace bli
