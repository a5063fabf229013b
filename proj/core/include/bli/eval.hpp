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

#include "bli/hypotheses.hpp"
#include "bli/lexicon.hpp"

namespace bli {

// Percentages are in [0, 100]. Only test words enter numerators and
// denominators; hypotheses for other source words are ignored.
struct MetricsReport {
  double p_at_1 = 0.0;
  double precision_at_5 = 0.0;
  double recall_at_5 = 0.0;
  double f1_at_5 = 0.0;
  std::size_t total_hyps = 0;
  std::size_t test_size = 0;
  std::size_t correct_hyps = 0;
  std::size_t correct_top1 = 0;
  std::size_t covered_sources = 0;  // test words whose gold is in their list
};

// 100 * (test words whose first hypothesis is gold) / |test|. Words without
// hypotheses count as wrong. Throws UsageError on an empty or non one-to-one
// gold set.
double p_at_1(const TokenHypotheses& hyps, const Lexicon& gold_test);

struct PrfAt5 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t total_hyps = 0;
  std::size_t correct_hyps = 0;
  std::size_t covered_sources = 0;
};

// Precision over all emitted pairs of test words, recall over test words.
// Throws UsageError if any test word has more than five hypotheses.
PrfAt5 prf_at_5(const TokenHypotheses& hyps, const Lexicon& gold_test);

// F1 from precision and recall percentages; 0 when both are 0.
double f1_score(double precision, double recall);

// Both metrics together. Lists are truncated to five for the @5 metrics.
MetricsReport evaluate(const TokenHypotheses& hyps, const Lexicon& gold_test);

// Rounds a percentage to one decimal for display.
double round1(double pct);

}  // namespace bli
