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
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bli/embed_io.hpp"
#include "bli/hypotheses.hpp"
#include "bli/rng.hpp"

namespace bli {

// Dense similarity graph over the rows listed in `order`; g(i, j) is the inner
// product of rows order[i] and order[j]. Seeds come first in `order`.
struct SimilarityGraph {
  Eigen::MatrixXd g;
  std::vector<int> order;

  std::size_t size() const { return static_cast<std::size_t>(g.rows()); }
};

SimilarityGraph build_graph(const RowMatrix& rows, std::span<const int> order);

enum class SgmInit {
  kBarycenter,  // uniform matrix J, every entry 1/(n-s)
  kRandomized,  // (J + K) / 2 with K a Sinkhorn-balanced uniform random matrix
};

struct SgmOptions {
  int max_iters = 30;
  double eps = 0.03;  // on ||P_next - P||_F / sqrt(n - s)
  bool shuffle_input = true;
  SgmInit init = SgmInit::kBarycenter;
};

struct SgmResult {
  Matching matching;            // positions in gx order -> positions in gy order
  int iterations = 0;
  bool converged = false;       // stopped on eps rather than max_iters
  std::vector<double> objective;  // trace objective at P_0, P_1, ...
};

// Seeded graph matching: approximately minimizes
//   || gx - (I_s (+) P) gy (I_s (+) P)^T ||_F^2
// over permutations P of the n - s unseeded vertices by maximizing the
// equivalent trace objective tr(gx^T (I_s (+) P) gy (I_s (+) P)^T) with
// Frank-Wolfe over doubly-stochastic matrices, then projecting the final
// iterate onto the nearest permutation. The seed block is always the
// identity in the result.
//
// Throws UsageError on size mismatch or s >= n.
SgmResult sgm(const SimilarityGraph& gx, const SimilarityGraph& gy, std::size_t s,
              Rng& rng, const SgmOptions& opts = {});

// The Frank-Wolfe solve itself, from an explicit doubly-stochastic start P0
// of size (n-s) x (n-s). No input shuffling; `opts.init` and
// `opts.shuffle_input` are ignored.
SgmResult solve_seeded_frank_wolfe(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                                   std::size_t s, const Eigen::MatrixXd& p0,
                                   const SgmOptions& opts = {});

// Starting point for a run; consumes randomness only for kRandomized.
Eigen::MatrixXd initial_point(int m, SgmInit init, Rng& rng);

// Alternating row/column scaling of a positive matrix until every row and
// column sums to one within `tol`.
Eigen::MatrixXd sinkhorn_balance(Eigen::MatrixXd k, double tol = 1e-13,
                                 int max_iters = 100000);

// tr(gx^T (I_s (+) P) gy (I_s (+) P)^T) for P of size (n-s) x (n-s).
double trace_objective(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                       std::size_t s, const Eigen::MatrixXd& p);

// Gradient of trace_objective with respect to P:
//   A21 B21^T + A12^T B12 + A22 P B22^T + A22^T P B22
// with A = gx, B = gy split into seed / non-seed blocks.
Eigen::MatrixXd trace_gradient(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                               std::size_t s, const Eigen::MatrixXd& p);

// || gx - M gy M^T ||_F^2 where M is the permutation matrix of `m`.
double matching_objective(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                          const Matching& m);

// Tallies of matched targets across repeated randomized SGM runs.
struct SoftMatchDistribution {
  int runs = 0;
  std::map<int, std::map<int, int>> counts;  // source -> target -> runs

  double probability(int source, int target) const;
};

// Runs sgm `runs` times. Run r draws from Rng(master_seed).substream(r), so
// the tally does not depend on execution order; runs execute in parallel.
SoftMatchDistribution soft_sgm(const SimilarityGraph& gx, const SimilarityGraph& gy,
                               std::size_t s, int runs, std::uint64_t master_seed,
                               const SgmOptions& opts = {.init = SgmInit::kRandomized});

// Up to k targets per source by descending probability, ties to the lower
// target index. Sources with little run-to-run diversity get fewer than k.
HypothesisSet top_k_from_distribution(const SoftMatchDistribution& dist, int k = 5);

}  // namespace bli
