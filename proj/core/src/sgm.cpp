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

#include "bli/sgm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bli/errors.hpp"
#include "bli/lap.hpp"
#include "bli/parallel.hpp"

namespace bli {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

void check_sizes(const MatrixXd& gx, const MatrixXd& gy, std::size_t s) {
  if (gx.rows() != gx.cols() || gy.rows() != gy.cols()) {
    throw UsageError("sgm: graphs must be square");
  }
  if (gx.rows() != gy.rows()) {
    throw UsageError("sgm: graph sizes differ (" + std::to_string(gx.rows()) +
                     " vs " + std::to_string(gy.rows()) + ")");
  }
  if (s >= static_cast<std::size_t>(gx.rows())) {
    throw UsageError("sgm: seed count " + std::to_string(s) +
                     " must be smaller than graph size " + std::to_string(gx.rows()));
  }
}

// Block views of a graph split after the first s vertices.
struct Blocks {
  Blocks(const MatrixXd& g, std::size_t seeds)
      : s(static_cast<Index>(seeds)), m(g.rows() - s), g(g) {}
  auto b11() const { return g.topLeftCorner(s, s); }
  auto b12() const { return g.topRightCorner(s, m); }
  auto b21() const { return g.bottomLeftCorner(m, s); }
  auto b22() const { return g.bottomRightCorner(m, m); }
  Index s;
  Index m;
  const MatrixXd& g;
};

MatrixXd permutation_matrix(const std::vector<int>& perm) {
  const auto m = static_cast<Index>(perm.size());
  MatrixXd q = MatrixXd::Zero(m, m);
  for (Index i = 0; i < m; ++i) q(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  return q;
}

}  // namespace

SimilarityGraph build_graph(const RowMatrix& rows, std::span<const int> order) {
  RowMatrix sub(static_cast<Index>(order.size()), rows.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int r = order[i];
    if (r < 0 || r >= rows.rows()) {
      throw UsageError("build_graph: index " + std::to_string(r) + " out of range");
    }
    sub.row(static_cast<Index>(i)) = rows.row(r);
  }
  SimilarityGraph out;
  out.g = sub * sub.transpose();
  // Symmetrize so g == g^T exactly regardless of GEMM rounding.
  out.g = (0.5 * (out.g + out.g.transpose())).eval();
  out.order.assign(order.begin(), order.end());
  return out;
}

Eigen::MatrixXd sinkhorn_balance(Eigen::MatrixXd k, double tol, int max_iters) {
  if ((k.array() <= 0.0).any()) throw NumericError("sinkhorn: entries must be positive");
  for (int it = 0; it < max_iters; ++it) {
    k.array().colwise() /= k.rowwise().sum().array();
    k.array().rowwise() /= k.colwise().sum().array();
    const double row_err = (k.rowwise().sum().array() - 1.0).abs().maxCoeff();
    if (row_err < tol) return k;
  }
  throw NumericError("sinkhorn: did not converge");
}

Eigen::MatrixXd initial_point(int m, SgmInit init, Rng& rng) {
  const MatrixXd j = MatrixXd::Constant(m, m, 1.0 / m);
  if (init == SgmInit::kBarycenter || m <= 1) return j;
  MatrixXd k(m, m);
  // Row-major draw order keeps the stream layout independent of storage order.
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < m; ++c) {
      double u;
      do {
        u = rng.uniform();
      } while (u == 0.0);
      k(r, c) = u;
    }
  }
  return 0.5 * (j + sinkhorn_balance(std::move(k)));
}

double trace_objective(const MatrixXd& gx, const MatrixXd& gy, std::size_t s,
                       const MatrixXd& p) {
  check_sizes(gx, gy, s);
  const Blocks a(gx, s);
  const Blocks b(gy, s);
  if (p.rows() != a.m || p.cols() != a.m) throw UsageError("trace_objective: P shape");
  const MatrixXd lin = a.b21() * b.b21().transpose() + a.b12().transpose() * b.b12();
  return a.b11().cwiseProduct(b.b11()).sum() + p.cwiseProduct(lin).sum() +
         a.b22().cwiseProduct(p * b.b22() * p.transpose()).sum();
}

MatrixXd trace_gradient(const MatrixXd& gx, const MatrixXd& gy, std::size_t s,
                        const MatrixXd& p) {
  check_sizes(gx, gy, s);
  const Blocks a(gx, s);
  const Blocks b(gy, s);
  if (p.rows() != a.m || p.cols() != a.m) throw UsageError("trace_gradient: P shape");
  return a.b21() * b.b21().transpose() + a.b12().transpose() * b.b12() +
         a.b22() * p * b.b22().transpose() + a.b22().transpose() * p * b.b22();
}

double matching_objective(const MatrixXd& gx, const MatrixXd& gy, const Matching& mt) {
  if (gx.rows() != gy.rows() || static_cast<Index>(mt.size()) != gx.rows()) {
    throw UsageError("matching_objective: size mismatch");
  }
  const Index n = gx.rows();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double d = gx(i, j) - gy(mt.target_of[i], mt.target_of[j]);
      total += d * d;
    }
  }
  return total;
}

SgmResult solve_seeded_frank_wolfe(const MatrixXd& gx, const MatrixXd& gy,
                                   std::size_t s, const MatrixXd& p0,
                                   const SgmOptions& opts) {
  check_sizes(gx, gy, s);
  const Blocks a(gx, s);
  const Blocks b(gy, s);
  const Index m = a.m;
  if (p0.rows() != m || p0.cols() != m) {
    throw UsageError("sgm: initial point must be (n-s) x (n-s)");
  }

  SgmResult result;
  result.matching.num_seeds = s;
  result.matching.target_of.resize(static_cast<std::size_t>(gx.rows()));
  std::iota(result.matching.target_of.begin(), result.matching.target_of.end(), 0);

  const double seed_term = a.b11().cwiseProduct(b.b11()).sum();
  const MatrixXd lin = a.b21() * b.b21().transpose() + a.b12().transpose() * b.b12();
  const MatrixXd a22 = a.b22();
  const MatrixXd b22 = b.b22();

  // Cosine graphs are exactly symmetric, which halves the products below.
  const bool symmetric = a22 == a22.transpose() && b22 == b22.transpose();

  // m1 = A22 P B22^T and m2 = A22^T P B22, updated along each step. The
  // direction Q is a permutation, so Q B is a row gather.
  auto gather_rows = [](const MatrixXd& src, const std::vector<int>& perm) {
    MatrixXd out(src.rows(), src.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      out.row(static_cast<Index>(i)) = src.row(perm[i]);
    }
    return out;
  };

  MatrixXd p = p0;
  MatrixXd m1 = a22 * (p * b22.transpose());
  MatrixXd m2 = symmetric ? MatrixXd() : MatrixXd(a22.transpose() * (p * b22));
  double f = seed_term + p.cwiseProduct(lin).sum() + a22.cwiseProduct(p * b22 * p.transpose()).sum();
  result.objective.push_back(f);

  const double norm_scale = std::sqrt(static_cast<double>(m));
  for (int it = 1; it <= opts.max_iters; ++it) {
    const MatrixXd grad = symmetric ? MatrixXd(lin + 2.0 * m1) : MatrixXd(lin + m1 + m2);
    const Assignment dir = solve_lap(grad, Sense::kMaximize);
    const MatrixXd r = permutation_matrix(dir.perm) - p;

    const MatrixXd n1 = a22 * gather_rows(b22.transpose(), dir.perm);
    MatrixXd n2;
    if (!symmetric) n2 = a22.transpose() * gather_rows(b22, dir.perm);

    // f(P + t R) = f(P) + t * lin_coef + t^2 * quad_coef, with
    // quad_coef = <A22 R, R B22> = <R, A22^T R B22>.
    const double lin_coef = r.cwiseProduct(grad).sum();
    const double quad_coef =
        symmetric ? r.cwiseProduct(n1 - m1).sum() : r.cwiseProduct(n2 - m2).sum();
    double step = (quad_coef + lin_coef > 0.0) ? 1.0 : 0.0;
    double gain = step * (lin_coef + quad_coef);
    if (quad_coef < 0.0) {
      const double vertex = -lin_coef / (2.0 * quad_coef);
      if (vertex > 0.0 && vertex < 1.0) {
        const double g = vertex * lin_coef + vertex * vertex * quad_coef;
        if (g > gain) {
          step = vertex;
          gain = g;
        }
      }
    }

    const double delta = step * r.norm() / norm_scale;
    p += step * r;
    m1 += step * (n1 - m1);
    if (!symmetric) m2 += step * (n2 - m2);
    f += gain;
    result.objective.push_back(f);
    result.iterations = it;
    if (delta < opts.eps) {
      result.converged = true;
      break;
    }
  }

  const Assignment proj = solve_lap(p, Sense::kMaximize);
  for (Index i = 0; i < m; ++i) {
    result.matching.target_of[static_cast<std::size_t>(a.s + i)] =
        static_cast<int>(a.s) + proj.perm[static_cast<std::size_t>(i)];
  }
  return result;
}

SgmResult sgm(const SimilarityGraph& gx, const SimilarityGraph& gy, std::size_t s,
              Rng& rng, const SgmOptions& opts) {
  check_sizes(gx.g, gy.g, s);
  const auto n = static_cast<int>(gx.size());
  const int m = n - static_cast<int>(s);

  // position in the shuffled gy -> position in gy
  std::vector<int> full(static_cast<std::size_t>(n));
  std::iota(full.begin(), full.end(), 0);
  if (opts.shuffle_input) {
    const std::vector<int> tau = rng.permutation(m);
    for (int i = 0; i < m; ++i) {
      full[s + static_cast<std::size_t>(i)] = static_cast<int>(s) + tau[i];
    }
  }
  MatrixXd shuffled(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) shuffled(i, j) = gy.g(full[i], full[j]);
  }

  const MatrixXd p0 = initial_point(m, opts.init, rng);
  SgmResult result = solve_seeded_frank_wolfe(gx.g, shuffled, s, p0, opts);
  for (auto& t : result.matching.target_of) t = full[static_cast<std::size_t>(t)];
  return result;
}

double SoftMatchDistribution::probability(int source, int target) const {
  if (runs <= 0) return 0.0;
  auto it = counts.find(source);
  if (it == counts.end()) return 0.0;
  auto jt = it->second.find(target);
  return jt == it->second.end() ? 0.0 : static_cast<double>(jt->second) / runs;
}

SoftMatchDistribution soft_sgm(const SimilarityGraph& gx, const SimilarityGraph& gy,
                               std::size_t s, int runs, std::uint64_t master_seed,
                               const SgmOptions& opts) {
  if (runs < 1) throw UsageError("soft_sgm: runs must be >= 1");
  check_sizes(gx.g, gy.g, s);

  const Rng master(master_seed);
  std::vector<Matching> matchings(static_cast<std::size_t>(runs));
  parallel_for(0, matchings.size(), [&](std::size_t r) {
    Rng rng = master.substream(r);
    matchings[r] = sgm(gx, gy, s, rng, opts).matching;
  });

  SoftMatchDistribution dist;
  dist.runs = runs;
  for (const auto& mt : matchings) {
    for (std::size_t i = 0; i < mt.size(); ++i) {
      ++dist.counts[static_cast<int>(i)][mt.target_of[i]];
    }
  }
  return dist;
}

HypothesisSet top_k_from_distribution(const SoftMatchDistribution& dist, int k) {
  if (k < 1) throw UsageError("top_k must be >= 1");
  HypothesisSet out;
  for (const auto& [src, tally] : dist.counts) {
    std::vector<Hypothesis> cands;
    cands.reserve(tally.size());
    for (const auto& [tgt, count] : tally) {
      cands.push_back({tgt, static_cast<double>(count) / dist.runs});
    }
    out.set(src, std::move(cands), static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace bli
