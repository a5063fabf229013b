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
#include <string>
#include <vector>

namespace bli {

class EmbeddingMatrix;

struct TranslationPair {
  std::string src;
  std::string tgt;

  friend bool operator==(const TranslationPair&, const TranslationPair&) = default;
  friend auto operator<=>(const TranslationPair&, const TranslationPair&) = default;
};

// Ordered list of translation pairs. For MUSE files the order is source
// frequency order.
struct Lexicon {
  std::vector<TranslationPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  // True when no source and no target token repeats.
  bool is_one_to_one() const;
};

struct SplitLexicon {
  Lexicon seeds;
  Lexicon test;
};

// One "src tgt" pair per line, separated by spaces or tabs. Blank lines are
// skipped and exact duplicate pairs are dropped. Throws ParseError on lines
// that do not have exactly two fields.
Lexicon load_dictionary(const std::string& path);

// Single left-to-right pass keeping a pair only if neither its source nor its
// target token has been kept already.
Lexicon filter_one_to_one(const Lexicon& lex);

// First s pairs become seeds, the remainder is the test set. Requires
// 0 < s < |lex|.
SplitLexicon split(const Lexicon& lex, std::size_t s);

struct VocabFilterStats {
  std::size_t missing_src = 0;
  std::size_t missing_tgt = 0;
  std::size_t dropped() const { return missing_src + missing_tgt; }
};

// Drops pairs whose source is not in `src` or whose target is not in `tgt`.
// A pair missing on both sides counts as a missing source.
Lexicon restrict_to_vocab(const Lexicon& lex, const EmbeddingMatrix& src,
                          const EmbeddingMatrix& tgt,
                          VocabFilterStats* stats = nullptr);

// Writes "src\ttgt" lines.
void save_lexicon(const Lexicon& lex, const std::string& path);

}  // namespace bli
