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

#include "bli/embed_io.hpp"

#include <zlib.h>

#include <charconv>
#include <limits>
#include <cmath>
#include <memory>
#include <string>

#include "bli/errors.hpp"

namespace bli {
namespace {

constexpr double kZeroNorm = 1e-12;

class GzLineReader {
 public:
  explicit GzLineReader(const std::string& path)
      : file_(gzopen(path.c_str(), "rb"), &gzclose) {
    if (!file_) throw IoError("cannot open " + path);
    gzbuffer(file_.get(), 1 << 18);
  }

  // Reads one line without its terminator (LF or CRLF). False at EOF.
  bool next(std::string& line) {
    line.clear();
    char buf[1 << 14];
    bool any = false;
    while (gzgets(file_.get(), buf, sizeof buf) != nullptr) {
      any = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!any) {
      int err = Z_OK;
      const char* msg = gzerror(file_.get(), &err);
      if (err != Z_OK && err != Z_STREAM_END) throw IoError(msg);
      return false;
    }
    if (!line.empty() && line.back() == '\n') line.pop_back();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no_;
    return true;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::unique_ptr<gzFile_s, decltype(&gzclose)> file_;
  std::size_t line_no_ = 0;
};

// Splits on single spaces, ignoring empty fields (fastText writes a trailing
// space after the last value).
void split_spaces(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t end = line.find(' ', pos);
    const std::size_t stop = end == std::string_view::npos ? line.size() : end;
    if (stop > pos) out.push_back(line.substr(pos, stop - pos));
    pos = stop + 1;
  }
}

bool parse_size(std::string_view s, std::size_t& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view s, double& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec == std::errc::result_out_of_range) {
    out = std::numeric_limits<double>::infinity();
    return ptr == last;
  }
  return ec == std::errc() && ptr == last;
}

double row_norm(const RowMatrix& m, Eigen::Index i) { return m.row(i).norm(); }

void scale_rows_to_unit(RowMatrix& m, const char* stage) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = row_norm(m, i);
    if (!(n > kZeroNorm)) {
      throw NumericError(std::string("zero-norm row ") + std::to_string(i) +
                         " " + stage);
    }
    m.row(i) /= n;
  }
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> vocab,
                                 RowMatrix vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(vocab_.size()) != vectors_.rows()) {
    throw UsageError("vocabulary size does not match row count");
  }
  if (vectors_.cols() <= 0) throw UsageError("embedding dim must be positive");
  if (!vectors_.allFinite()) throw NumericError("non-finite embedding value");
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], static_cast<int>(i)).second) {
      throw UsageError("duplicate token '" + vocab_[i] + "'");
    }
  }
}

std::optional<int> EmbeddingMatrix::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

RowMatrix EmbeddingMatrix::rows(std::span<const int> indices) const {
  RowMatrix out(static_cast<Eigen::Index>(indices.size()), vectors_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const int i = indices[r];
    if (i < 0 || static_cast<std::size_t>(i) >= size()) {
      throw UsageError("row index out of range: " + std::to_string(i));
    }
    out.row(static_cast<Eigen::Index>(r)) = vectors_.row(i);
  }
  return out;
}

EmbeddingMatrix load_embeddings(const std::string& path,
                                std::optional<std::size_t> max_words,
                                LoadStats* stats) {
  GzLineReader reader(path);
  std::string line;
  std::vector<std::string_view> fields;

  if (!reader.next(line)) throw ParseError(path + ": empty file");
  split_spaces(line, fields);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (fields.size() != 2 || !parse_size(fields[0], count) ||
      !parse_size(fields[1], dim) || dim == 0) {
    throw ParseError(path + ": malformed header '" + line + "'");
  }

  const std::size_t limit = max_words ? std::min(count, *max_words) : count;
  LoadStats local;
  local.header_count = count;

  std::vector<std::string> vocab;
  std::vector<double> values;
  vocab.reserve(limit);
  values.reserve(limit * dim);
  std::unordered_map<std::string, int> seen;
  seen.reserve(limit);
  std::vector<double> row(dim);

  std::size_t data_lines = 0;
  while (vocab.size() < limit && data_lines < count && reader.next(line)) {
    ++data_lines;
    split_spaces(line, fields);
    if (fields.size() != dim + 1) {
      throw ParseError(path + ":" + std::to_string(reader.line_no()) +
                       ": expected " + std::to_string(dim + 1) +
                       " fields, got " + std::to_string(fields.size()));
    }
    bool finite = true;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(fields[k + 1], row[k])) {
        throw ParseError(path + ":" + std::to_string(reader.line_no()) +
                         ": bad number '" + std::string(fields[k + 1]) + "'");
      }
      finite = finite && std::isfinite(row[k]);
    }
    if (!finite) {
      ++local.non_finite_rows;
      continue;
    }
    std::string token(fields[0]);
    if (seen.contains(token)) {
      ++local.duplicate_tokens;
      continue;
    }
    seen.emplace(token, static_cast<int>(vocab.size()));
    vocab.push_back(std::move(token));
    values.insert(values.end(), row.begin(), row.end());
  }
  if (vocab.size() < limit && data_lines < count) {
    throw ParseError(path + ": file ends after " + std::to_string(data_lines) +
                     " of " + std::to_string(count) + " rows");
  }

  RowMatrix vectors = Eigen::Map<RowMatrix>(
      values.data(), static_cast<Eigen::Index>(vocab.size()),
      static_cast<Eigen::Index>(dim));
  if (stats) *stats = local;
  return EmbeddingMatrix(std::move(vocab), std::move(vectors));
}

EmbeddingMatrix normalize(const EmbeddingMatrix& emb, int passes) {
  if (passes < 1) throw UsageError("normalization passes must be >= 1");
  RowMatrix m = emb.vectors();
  for (int p = 0; p < passes; ++p) {
    scale_rows_to_unit(m, "before unit scaling");
    const Eigen::RowVectorXd mean = m.colwise().mean();
    m.rowwise() -= mean;
    scale_rows_to_unit(m, "after mean-centering");
  }
  return EmbeddingMatrix(emb.vocab(), std::move(m));
}

}  // namespace bli
