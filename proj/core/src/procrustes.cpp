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

#include "bli/procrustes.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "bli/errors.hpp"
#include "bli/lap.hpp"
#include "bli/parallel.hpp"

namespace bli {
namespace {

// Mean of the k largest entries of v, summed in descending order.
double mean_of_top_k(std::vector<double>& v, int k) {
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end(), std::greater<>());
  std::sort(v.begin(), v.begin() + k, std::greater<>());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += v[i];
  return sum / k;
}

}  // namespace

OrthogonalMap solve_procrustes(const RowMatrix& src_seed, const RowMatrix& tgt_seed) {
  if (src_seed.rows() != tgt_seed.rows() || src_seed.cols() != tgt_seed.cols()) {
    throw UsageError("procrustes: seed matrices differ in shape");
  }
  if (src_seed.rows() < 1) throw UsageError("procrustes: need at least one seed");

  const Eigen::MatrixXd m = src_seed.transpose() * tgt_seed;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericError("procrustes: SVD failed");
  return OrthogonalMap{svd.matrixU() * svd.matrixV().transpose()};
}

Eigen::MatrixXd cosine_matrix(const RowMatrix& a, const RowMatrix& b) {
  if (a.cols() != b.cols()) throw UsageError("cosine_matrix: dimension mismatch");
  return a * b.transpose();
}

CslsIndex build_csls_index(const Eigen::MatrixXd& cosines, int k) {
  const auto n = static_cast<int>(cosines.rows());
  const auto m = static_cast<int>(cosines.cols());
  if (k < 1) throw UsageError("csls: k must be >= 1");
  if (k > m || k > n) {
    throw UsageError("csls: k=" + std::to_string(k) +
                     " exceeds candidate set size " + std::to_string(std::min(n, m)));
  }

  CslsIndex idx;
  idx.k = k;
  idx.src_avgs.resize(n);
  idx.tgt_avgs.resize(m);
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t i) {
    std::vector<double> row(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) row[j] = cosines(static_cast<Eigen::Index>(i), j);
    idx.src_avgs[static_cast<Eigen::Index>(i)] = mean_of_top_k(row, k);
  });
  parallel_for(0, static_cast<std::size_t>(m), [&](std::size_t j) {
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col[i] = cosines(i, static_cast<Eigen::Index>(j));
    idx.tgt_avgs[static_cast<Eigen::Index>(j)] = mean_of_top_k(col, k);
  });
  return idx;
}

CslsIndex build_csls_index(const RowMatrix& mapped_src, const RowMatrix& tgt, int k) {
  return build_csls_index(cosine_matrix(mapped_src, tgt), k);
}

double csls_score(int i, int j, const Eigen::MatrixXd& cosines, const CslsIndex& idx) {
  if (i < 0 || i >= cosines.rows() || j < 0 || j >= cosines.cols()) {
    throw UsageError("csls_score: index out of range");
  }
  return 2.0 * cosines(i, j) - idx.src_avgs[i] - idx.tgt_avgs[j];
}

Eigen::MatrixXd csls_matrix(const Eigen::MatrixXd& cosines, const CslsIndex& idx) {
  Eigen::MatrixXd out = 2.0 * cosines;
  out.colwise() -= idx.src_avgs;
  out.rowwise() -= idx.tgt_avgs.transpose();
  return out;
}

Eigen::MatrixXd score_matrix(const RowMatrix& mapped_src, const RowMatrix& tgt,
                             const ExtractOptions& opts) {
  if (tgt.rows() == 0) throw UsageError("empty target set");
  Eigen::MatrixXd cos = cosine_matrix(mapped_src, tgt);
  if (opts.scorer == Scorer::kCosine || mapped_src.rows() == 0) return cos;
  const auto k = static_cast<int>(std::min<Eigen::Index>(
      {static_cast<Eigen::Index>(opts.csls_k), mapped_src.rows(), tgt.rows()}));
  return csls_matrix(cos, build_csls_index(cos, k));
}

HypothesisSet top_k_by_score(const Eigen::MatrixXd& scores, int top_k) {
  if (top_k < 1) throw UsageError("top_k must be >= 1");
  const auto n = static_cast<std::size_t>(scores.rows());
  const auto m = static_cast<int>(scores.cols());
  if (m == 0) throw UsageError("empty target set");
  const int keep = std::min(top_k, m);

  std::vector<std::vector<Hypothesis>> lists(n);
  parallel_for(0, n, [&](std::size_t i) {
    std::vector<Hypothesis> row(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) row[j] = {j, scores(static_cast<Eigen::Index>(i), j)};
    std::partial_sort(row.begin(), row.begin() + keep, row.end(), ranks_before);
    row.resize(static_cast<std::size_t>(keep));
    lists[i] = std::move(row);
  });

  HypothesisSet out;
  for (std::size_t i = 0; i < n; ++i) out.set(static_cast<int>(i), std::move(lists[i]));
  return out;
}

HypothesisSet extract_hypotheses(const RowMatrix& mapped_src, const RowMatrix& tgt,
                                 int top_k, const ExtractOptions& opts) {
  if (top_k < 1) throw UsageError("top_k must be >= 1");
  return top_k_by_score(score_matrix(mapped_src, tgt, opts), top_k);
}

Matching extract_one_to_one(const RowMatrix& mapped_src, const RowMatrix& tgt,
                            const ExtractOptions& opts) {
  if (mapped_src.rows() != tgt.rows()) {
    throw UsageError("one-to-one extraction needs equal-size sets");
  }
  const Assignment a = solve_lap(score_matrix(mapped_src, tgt, opts), Sense::kMaximize);
  return Matching{0, a.perm};
}

}  // namespace bli
