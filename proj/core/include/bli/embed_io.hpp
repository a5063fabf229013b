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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace bli {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Ordered vocabulary plus one d-dimensional vector per token. Row i is the
// token with frequency rank i. Immutable once constructed.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  // Throws UsageError if sizes disagree, tokens repeat or dim is zero, and
  // NumericError on non-finite entries.
  EmbeddingMatrix(std::vector<std::string> vocab, RowMatrix vectors);

  std::size_t size() const { return vocab_.size(); }
  int dim() const { return static_cast<int>(vectors_.cols()); }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const RowMatrix& vectors() const { return vectors_; }
  const std::string& token(std::size_t i) const { return vocab_[i]; }

  std::optional<int> index_of(std::string_view token) const;

  // Copies the listed rows, in the given order.
  RowMatrix rows(std::span<const int> indices) const;

 private:
  std::vector<std::string> vocab_;
  RowMatrix vectors_;
  std::unordered_map<std::string, int> index_;
};

struct LoadStats {
  std::size_t duplicate_tokens = 0;
  std::size_t non_finite_rows = 0;
  std::size_t header_count = 0;
};

// Reads the fastText text format: a "count dim" header, then one
// "token v1 ... vdim" line per word. Gzip input is decompressed
// transparently. Returns the first max_words accepted rows in file order.
// Duplicate tokens keep their first row; rows with non-finite values are
// skipped. Both are counted in `stats`.
EmbeddingMatrix load_embeddings(const std::string& path,
                                std::optional<std::size_t> max_words = {},
                                LoadStats* stats = nullptr);

// Unit-length rows, mean-centering, unit-length rows again; repeated `passes`
// times. Throws NumericError naming the first zero-norm row encountered.
EmbeddingMatrix normalize(const EmbeddingMatrix& emb, int passes = 1);

}  // namespace bli
