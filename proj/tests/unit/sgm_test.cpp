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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "bli/errors.hpp"
#include "bli/sgm.hpp"
#include "oracles.hpp"

namespace bli {
namespace {

using Eigen::MatrixXd;
using testing::random_doubly_stochastic;
using testing::random_gaussian;
using testing::unit_rows;

SimilarityGraph diag_graph(std::initializer_list<double> d) {
  std::vector<double> v(d);
  SimilarityGraph g;
  g.g = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).asDiagonal();
  g.order.resize(v.size());
  std::iota(g.order.begin(), g.order.end(), 0);
  return g;
}

SimilarityGraph cosine_graph(const RowMatrix& rows) {
  std::vector<int> order(static_cast<std::size_t>(rows.rows()));
  std::iota(order.begin(), order.end(), 0);
  return build_graph(rows, order);
}

std::vector<int> solved_targets(const Matching& m) {
  std::vector<int> out;
  for (auto [x, y] : m.solved_part()) out.push_back(y - static_cast<int>(m.num_seeds));
  return out;
}

TEST(BuildGraph, OrthonormalRowsGiveIdentity) {
  const RowMatrix eye = RowMatrix::Identity(4, 4);
  const std::vector<int> order{0, 1, 2, 3};
  EXPECT_EQ(build_graph(eye, order).g, MatrixXd::Identity(4, 4));
}

TEST(BuildGraph, GoldenVectors) {
  // Mutually orthogonal with squared norms 2, 2, 3, 4.
  RowMatrix x(4, 4);
  x << 1, 1, 0, 0, 1, -1, 0, 0, 0, 0, std::sqrt(3.0), 0, 0, 0, 0, 2;
  const std::vector<int> order{0, 1, 2, 3};
  const MatrixXd g = build_graph(x, order).g;
  Eigen::Vector4d d(2, 2, 3, 4);
  EXPECT_LT((g - MatrixXd(d.asDiagonal())).norm(), 1e-12);
}

TEST(BuildGraph, MatchesNaiveLoops) {
  std::mt19937_64 gen(1);
  const RowMatrix x = random_gaussian(9, 5, gen);
  const std::vector<int> order{4, 2, 8, 0, 1};
  const SimilarityGraph g = build_graph(x, order);
  EXPECT_EQ(g.g, g.g.transpose());
  EXPECT_LT((g.g - testing::naive_graph(x, order)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(g.order, order);
  EXPECT_THROW(build_graph(x, std::vector<int>{0, 9}), UsageError);
}

TEST(Sgm, FourWordGoldenCase) {
  const SimilarityGraph gx = diag_graph({2, 2, 3, 4});
  const SimilarityGraph gy = diag_graph({1, 3, 4, 2});
  const auto brute = testing::brute_force_seeded_qap(gx.g, gy.g, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const SgmResult r = sgm(gx, gy, 1, rng);
    const auto pairs = r.matching.solved_part();
    const std::vector<std::pair<int, int>> expected{{1, 3}, {2, 1}, {3, 2}};
    EXPECT_EQ(pairs, expected) << "seed " << seed;
    EXPECT_EQ(solved_targets(r.matching), brute.perm);
    EXPECT_EQ(r.matching.seed_part(), (std::vector<std::pair<int, int>>{{0, 0}}));
  }
  // Minimum value from enumeration: only the seed mismatch 2 vs 1 remains.
  EXPECT_NEAR(brute.best, 1.0, 1e-12);
}

TEST(Sgm, IdenticalGenericGraphsGiveIdentity) {
  std::mt19937_64 gen(2);
  const SimilarityGraph g = cosine_graph(unit_rows(random_gaussian(25, 8, gen)));
  for (std::size_t s : {0u, 1u, 5u, 20u}) {
    Rng rng(s + 100);
    const SgmResult r = sgm(g, g, s, rng);
    for (int i = 0; i < 25; ++i) EXPECT_EQ(r.matching.target_of[i], i) << "s=" << s;
  }
}

TEST(Sgm, BijectionAndHardSeeding) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 20;
    const std::size_t s = static_cast<std::size_t>(trial % n);
    const SimilarityGraph gx = cosine_graph(unit_rows(random_gaussian(n, 4, gen)));
    const SimilarityGraph gy = cosine_graph(unit_rows(random_gaussian(n, 4, gen)));
    Rng rng(static_cast<std::uint64_t>(trial));
    SgmOptions opts;
    opts.init = trial % 2 ? SgmInit::kRandomized : SgmInit::kBarycenter;
    const SgmResult r = sgm(gx, gy, s, rng, opts);
    EXPECT_TRUE(r.matching.is_bijection());
    EXPECT_EQ(r.matching.num_seeds, s);
    for (std::size_t i = 0; i < s; ++i) EXPECT_EQ(r.matching.target_of[i], static_cast<int>(i));
    std::set<int> targets(r.matching.target_of.begin(), r.matching.target_of.end());
    EXPECT_EQ(targets.size(), static_cast<std::size_t>(n));
  }
}

TEST(Sgm, ObjectiveNonDecreasingAcrossSteps) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 30;
    const SimilarityGraph gx = cosine_graph(unit_rows(random_gaussian(n, 6, gen)));
    const SimilarityGraph gy = cosine_graph(unit_rows(random_gaussian(n, 6, gen)));
    Rng rng(static_cast<std::uint64_t>(trial));
    SgmOptions opts;
    opts.eps = 0.0;
    opts.init = SgmInit::kRandomized;
    const SgmResult r = sgm(gx, gy, 3, rng, opts);
    ASSERT_GE(r.objective.size(), 2u);
    for (std::size_t t = 1; t < r.objective.size(); ++t) {
      EXPECT_GE(r.objective[t], r.objective[t - 1] - 1e-9 * std::abs(r.objective[t - 1]));
    }
  }
}

TEST(Sgm, RespectsIterationCap) {
  std::mt19937_64 gen(5);
  const SimilarityGraph gx = cosine_graph(unit_rows(random_gaussian(20, 3, gen)));
  const SimilarityGraph gy = cosine_graph(unit_rows(random_gaussian(20, 3, gen)));
  Rng rng(1);
  SgmOptions opts;
  opts.eps = 0.0;
  opts.max_iters = 4;
  const SgmResult r = sgm(gx, gy, 2, rng, opts);
  EXPECT_LE(r.iterations, 4);
}

TEST(Sgm, RelabelingEquivalence) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 15;
    const int s = 3;
    const int m = n - s;
    const RowMatrix x = unit_rows(random_gaussian(n, 5, gen));
    const RowMatrix y = unit_rows(x + 0.1 * random_gaussian(n, 5, gen));
    const MatrixXd gx = cosine_graph(x).g;
    const MatrixXd gy = cosine_graph(y).g;

    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), gen);
    // Relabeled target graph: new vertex s+k is old vertex s+sigma[k].
    std::vector<int> full(n);
    std::iota(full.begin(), full.end(), 0);
    for (int k = 0; k < m; ++k) full[s + k] = s + sigma[k];
    MatrixXd gy2(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gy2(i, j) = gy(full[i], full[j]);

    const MatrixXd p0 = random_doubly_stochastic(m, gen);
    // The same start expressed in the new labels.
    MatrixXd p0b(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) p0b(i, k) = p0(i, sigma[k]);

    const SgmResult a = solve_seeded_frank_wolfe(gx, gy, s, p0);
    const SgmResult b = solve_seeded_frank_wolfe(gx, gy2, s, p0b);
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(full[b.matching.target_of[i]], a.matching.target_of[i]) << "trial " << trial;
    }
  }
}

TEST(Sgm, ShuffleDoesNotChangeIsomorphismRecovery) {
  std::mt19937_64 gen(7);
  const SimilarityGraph g = cosine_graph(unit_rows(random_gaussian(30, 6, gen)));
  SgmOptions on;
  SgmOptions off;
  off.shuffle_input = false;
  Rng r1(9);
  Rng r2(9);
  EXPECT_EQ(sgm(g, g, 4, r1, on).matching.target_of, sgm(g, g, 4, r2, off).matching.target_of);
}

TEST(Sgm, NormIdentityValidatesTraceForm) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8;
    const int s = trial % 4;
    const MatrixXd gx = cosine_graph(random_gaussian(n, 4, gen)).g;
    const MatrixXd gy = cosine_graph(random_gaussian(n, 4, gen)).g;
    std::vector<int> perm(n - s);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    MatrixXd p = MatrixXd::Zero(n - s, n - s);
    for (int i = 0; i < n - s; ++i) p(i, perm[i]) = 1.0;
    const double lhs = testing::seeded_qap_cost(gx, gy, s, perm);
    const double rhs = gx.squaredNorm() + gy.squaredNorm() -
                       2.0 * trace_objective(gx, gy, static_cast<std::size_t>(s), p);
    EXPECT_NEAR(lhs, rhs, 1e-9);

    Matching full{static_cast<std::size_t>(s), {}};
    for (int i = 0; i < s; ++i) full.target_of.push_back(i);
    for (int i = 0; i < n - s; ++i) full.target_of.push_back(s + perm[i]);
    EXPECT_NEAR(matching_objective(gx, gy, full), lhs, 1e-9);
  }
}

TEST(Sgm, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 7;
    const std::size_t s = static_cast<std::size_t>(trial % 3);
    const int m = n - static_cast<int>(s);
    // Asymmetric graphs exercise every gradient term.
    const MatrixXd gx = random_gaussian(n, n, gen);
    const MatrixXd gy = random_gaussian(n, n, gen);
    const MatrixXd p = random_doubly_stochastic(m, gen);
    const MatrixXd grad = trace_gradient(gx, gy, s, p);
    const double h = 1e-5;
    MatrixXd fd(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        MatrixXd up = p;
        MatrixXd dn = p;
        up(i, j) += h;
        dn(i, j) -= h;
        fd(i, j) = (trace_objective(gx, gy, s, up) - trace_objective(gx, gy, s, dn)) / (2 * h);
      }
    }
    EXPECT_LT((grad - fd).norm() / grad.norm(), 1e-6) << "trial " << trial;
  }
}

// Straightforward Frank-Wolfe that recomputes every product from scratch.
struct NaiveFw {
  std::vector<double> objective;
  std::vector<int> perm;
};

NaiveFw naive_frank_wolfe(const MatrixXd& gx, const MatrixXd& gy, std::size_t s, MatrixXd p,
                          int max_iters, double eps) {
  NaiveFw out;
  const int m = static_cast<int>(p.rows());
  out.objective.push_back(trace_objective(gx, gy, s, p));
  for (int it = 0; it < max_iters; ++it) {
    const MatrixXd grad = trace_gradient(gx, gy, s, p);
    const auto q = testing::brute_force_lap(grad, true).perm;
    MatrixXd qm = MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) qm(i, q[i]) = 1.0;
    // Exact maximization of the quadratic along [P, Q] by sampling its
    // closed form at the candidates 0, 1 and the stationary point.
    const double f0 = trace_objective(gx, gy, s, p);
    const double f1 = trace_objective(gx, gy, s, qm);
    const double fh = trace_objective(gx, gy, s, 0.5 * (p + qm));
    const double quad = 2.0 * (f1 + f0 - 2.0 * fh);
    const double lin = f1 - f0 - quad;
    std::vector<double> cands{0.0, 1.0};
    if (quad < 0.0) {
      const double v = -lin / (2.0 * quad);
      if (v > 0.0 && v < 1.0) cands.push_back(v);
    }
    double best_t = 0.0;
    double best_f = f0;
    for (double t : cands) {
      const double ft = f0 + t * lin + t * t * quad;
      if (ft > best_f + 1e-12 * std::abs(best_f)) {
        best_f = ft;
        best_t = t;
      }
    }
    const MatrixXd next = p + best_t * (qm - p);
    const double delta = (next - p).norm() / std::sqrt(static_cast<double>(m));
    p = next;
    out.objective.push_back(trace_objective(gx, gy, s, p));
    if (delta < eps) break;
  }
  out.perm = testing::brute_force_lap(p, true).perm;
  return out;
}

TEST(Sgm, MatchesNaiveReferenceSolver) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 6 + trial % 3;
    const std::size_t s = static_cast<std::size_t>(trial % 3);
    const int m = n - static_cast<int>(s);
    MatrixXd gx;
    MatrixXd gy;
    if (trial % 2 == 0) {
      gx = cosine_graph(unit_rows(random_gaussian(n, 3, gen))).g;
      gy = cosine_graph(unit_rows(random_gaussian(n, 3, gen))).g;
    } else {
      gx = random_gaussian(n, n, gen);
      gy = random_gaussian(n, n, gen);
    }
    const MatrixXd p0 = random_doubly_stochastic(m, gen);
    SgmOptions opts;
    const SgmResult fast = solve_seeded_frank_wolfe(gx, gy, s, p0, opts);
    const NaiveFw ref = naive_frank_wolfe(gx, gy, s, p0, opts.max_iters, opts.eps);
    ASSERT_EQ(fast.objective.size(), ref.objective.size()) << "trial " << trial;
    for (std::size_t t = 0; t < ref.objective.size(); ++t) {
      EXPECT_NEAR(fast.objective[t], ref.objective[t], 1e-8 * (1.0 + std::abs(ref.objective[t])));
    }
    EXPECT_EQ(solved_targets(fast.matching), ref.perm) << "trial " << trial;
  }
}

TEST(Sgm, Errors) {
  const SimilarityGraph a = diag_graph({1, 2, 3});
  const SimilarityGraph b = diag_graph({1, 2});
  Rng rng(0);
  EXPECT_THROW(sgm(a, b, 0, rng), UsageError);
  EXPECT_THROW(sgm(a, a, 3, rng), UsageError);
}

TEST(Sinkhorn, BalancesRowsAndColumns) {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  MatrixXd k(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) k(i, j) = u(gen);
  const MatrixXd b = sinkhorn_balance(k);
  EXPECT_LT((b.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_LT((b.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_THROW(sinkhorn_balance(MatrixXd::Zero(2, 2)), NumericError);
}

TEST(InitialPoint, DoublyStochastic) {
  Rng rng(3);
  for (SgmInit init : {SgmInit::kBarycenter, SgmInit::kRandomized}) {
    const MatrixXd p = initial_point(7, init, rng);
    EXPECT_LT((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_LT((p.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_GE(p.minCoeff(), 0.0);
  }
  EXPECT_EQ(initial_point(4, SgmInit::kBarycenter, rng), MatrixXd::Constant(4, 4, 0.25));
}

TEST(SoftSgm, DegenerateOnIdenticalGraphs) {
  std::mt19937_64 gen(11);
  const SimilarityGraph g = cosine_graph(unit_rows(random_gaussian(20, 6, gen)));
  const SoftMatchDistribution d = soft_sgm(g, g, 3, 8, 42);
  EXPECT_EQ(d.runs, 8);
  for (int i = 0; i < 20; ++i) EXPECT_DOUBLE_EQ(d.probability(i, i), 1.0);
  const HypothesisSet h = top_k_from_distribution(d, 5);
  for (const auto& [src, list] : h.entries()) {
    ASSERT_EQ(list.size(), 1u);
    EXPECT_EQ(list.front().target, src);
  }
}

TEST(SoftSgm, SingleRunEqualsSgm) {
  std::mt19937_64 gen(12);
  const SimilarityGraph gx = cosine_graph(unit_rows(random_gaussian(15, 4, gen)));
  const SimilarityGraph gy = cosine_graph(unit_rows(random_gaussian(15, 4, gen)));
  const SgmOptions opts{.init = SgmInit::kRandomized};
  const SoftMatchDistribution d = soft_sgm(gx, gy, 2, 1, 77, opts);
  Rng rng = Rng(77).substream(0);
  const SgmResult r = sgm(gx, gy, 2, rng, opts);
  for (int i = 0; i < 15; ++i) EXPECT_DOUBLE_EQ(d.probability(i, r.matching.target_of[i]), 1.0);
}

TEST(SoftSgm, CountsSumToRunsAndDeterministic) {
  std::mt19937_64 gen(13);
  const SimilarityGraph gx = cosine_graph(unit_rows(random_gaussian(18, 3, gen)));
  const SimilarityGraph gy = cosine_graph(unit_rows(random_gaussian(18, 3, gen)));
  const SoftMatchDistribution a = soft_sgm(gx, gy, 2, 10, 5);
  const SoftMatchDistribution b = soft_sgm(gx, gy, 2, 10, 5);
  EXPECT_EQ(a.counts, b.counts);
  ASSERT_EQ(a.counts.size(), 18u);
  for (const auto& [src, row] : a.counts) {
    int total = 0;
    for (const auto& [tgt, c] : row) total += c;
    EXPECT_EQ(total, 10);
  }
}

TEST(SoftSgm, TopKTieBreak) {
  SoftMatchDistribution d;
  d.runs = 10;
  d.counts[0] = {{7, 2}, {3, 4}, {5, 4}};
  const HypothesisSet h = top_k_from_distribution(d, 5);
  const auto& list = *h.find(0);
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].target, 3);
  EXPECT_EQ(list[1].target, 5);
  EXPECT_EQ(list[2].target, 7);
  EXPECT_DOUBLE_EQ(list[0].score, 0.4);
  const HypothesisSet one = top_k_from_distribution(d, 1);
  ASSERT_EQ(one.find(0)->size(), 1u);
  EXPECT_EQ(one.find(0)->front().target, 3);
}

}  // namespace
}  // namespace bli
