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

#include <Eigen/Dense>

#include "bli/embed_io.hpp"
#include "bli/hypotheses.hpp"

namespace bli {

// Orthogonal d x d map applied on the right: mapped = X * w.
struct OrthogonalMap {
  Eigen::MatrixXd w;

  RowMatrix apply(const RowMatrix& x) const { return x * w; }
};

// Closed-form orthogonal Procrustes: with U S V^T the SVD of
// src_seed^T * tgt_seed, w = U V^T minimizes ||src_seed * w - tgt_seed||_F
// over orthogonal matrices. Reflections (det = -1) are allowed.
OrthogonalMap solve_procrustes(const RowMatrix& src_seed, const RowMatrix& tgt_seed);

// Pairwise inner products a * b^T (cosines for unit-norm rows).
Eigen::MatrixXd cosine_matrix(const RowMatrix& a, const RowMatrix& b);

// Hubness statistics for CSLS. src_avgs[i] is the mean cosine between source
// i and its k nearest targets; tgt_avgs[j] likewise over sources.
struct CslsIndex {
  int k = 10;
  Eigen::VectorXd src_avgs;
  Eigen::VectorXd tgt_avgs;
};

// Throws UsageError when k < 1 or k exceeds either side of `cosines`.
CslsIndex build_csls_index(const Eigen::MatrixXd& cosines, int k);
CslsIndex build_csls_index(const RowMatrix& mapped_src, const RowMatrix& tgt, int k);

// 2 cos(i, j) - src_avgs[i] - tgt_avgs[j].
double csls_score(int i, int j, const Eigen::MatrixXd& cosines, const CslsIndex& idx);

Eigen::MatrixXd csls_matrix(const Eigen::MatrixXd& cosines, const CslsIndex& idx);

enum class Scorer { kCsls, kCosine };

struct ExtractOptions {
  Scorer scorer = Scorer::kCsls;
  int csls_k = 10;  // clamped to the candidate set size
};

// Source-by-target score matrix under the chosen scorer.
Eigen::MatrixXd score_matrix(const RowMatrix& mapped_src, const RowMatrix& tgt,
                             const ExtractOptions& opts = {});

// Top `top_k` targets per source row (fewer when tgt has fewer rows).
// Several sources may share a target.
HypothesisSet extract_hypotheses(const RowMatrix& mapped_src, const RowMatrix& tgt,
                                 int top_k, const ExtractOptions& opts = {});

// Same ranking over a precomputed score matrix.
HypothesisSet top_k_by_score(const Eigen::MatrixXd& scores, int top_k);

// Bijection maximizing the summed score (linear assignment).
Matching extract_one_to_one(const RowMatrix& mapped_src, const RowMatrix& tgt,
                            const ExtractOptions& opts = {});

}  // namespace bli
