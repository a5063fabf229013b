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

#include "bli/lexicon.hpp"

#include <fstream>
#include <set>
#include <unordered_set>

#include "bli/embed_io.hpp"
#include "bli/errors.hpp"

namespace bli {
namespace {

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
           c == '\f';
  };
  while (pos < line.size()) {
    while (pos < line.size() && is_space(line[pos])) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !is_space(line[end])) ++end;
    if (end > pos) out.emplace_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

}  // namespace

bool Lexicon::is_one_to_one() const {
  std::unordered_set<std::string> src;
  std::unordered_set<std::string> tgt;
  for (const auto& p : pairs) {
    if (!src.insert(p.src).second || !tgt.insert(p.tgt).second) return false;
  }
  return true;
}

Lexicon load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  Lexicon lex;
  std::set<TranslationPair> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 2 fields, got " +
                       std::to_string(fields.size()));
    }
    TranslationPair pair{std::move(fields[0]), std::move(fields[1])};
    if (seen.insert(pair).second) lex.pairs.push_back(std::move(pair));
  }
  if (in.bad()) throw IoError("read error on " + path);
  return lex;
}

Lexicon filter_one_to_one(const Lexicon& lex) {
  Lexicon out;
  std::unordered_set<std::string> used_src;
  std::unordered_set<std::string> used_tgt;
  for (const auto& p : lex.pairs) {
    if (used_src.contains(p.src) || used_tgt.contains(p.tgt)) continue;
    used_src.insert(p.src);
    used_tgt.insert(p.tgt);
    out.pairs.push_back(p);
  }
  return out;
}

SplitLexicon split(const Lexicon& lex, std::size_t s) {
  if (s == 0) throw UsageError("seed count must be positive");
  if (s >= lex.size()) {
    throw UsageError("seed count " + std::to_string(s) +
                     " leaves no test pairs (lexicon has " +
                     std::to_string(lex.size()) + ")");
  }
  SplitLexicon out;
  const auto mid = lex.pairs.begin() + static_cast<std::ptrdiff_t>(s);
  out.seeds.pairs.assign(lex.pairs.begin(), mid);
  out.test.pairs.assign(mid, lex.pairs.end());
  return out;
}

Lexicon restrict_to_vocab(const Lexicon& lex, const EmbeddingMatrix& src,
                          const EmbeddingMatrix& tgt, VocabFilterStats* stats) {
  Lexicon out;
  VocabFilterStats local;
  for (const auto& p : lex.pairs) {
    if (!src.index_of(p.src)) {
      ++local.missing_src;
    } else if (!tgt.index_of(p.tgt)) {
      ++local.missing_tgt;
    } else {
      out.pairs.push_back(p);
    }
  }
  if (stats) *stats = local;
  return out;
}

void save_lexicon(const Lexicon& lex, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& p : lex.pairs) out << p.src << '\t' << p.tgt << '\n';
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace bli
