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

#include "bli/lap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bli/errors.hpp"

namespace bli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-10;

struct DualSolution {
  std::vector<int> col4row;
  std::vector<int> row4col;
  std::vector<double> u;
  std::vector<double> v;
};

// Minimizes sum cost[i][col4row[i]] with successive shortest augmenting paths
// (one Dijkstra-like search per row). Leaves feasible duals with
// cost[i][j] - u[i] - v[j] >= 0 and equality on matched entries.
DualSolution shortest_augmenting_path(const std::vector<double>& cost, int n) {
  DualSolution s;
  s.col4row.assign(n, -1);
  s.row4col.assign(n, -1);
  s.u.assign(n, 0.0);
  s.v.assign(n, 0.0);

  std::vector<double> path_cost(n);
  std::vector<int> path(n);
  std::vector<int> remaining(n);
  std::vector<char> row_visited(n);
  std::vector<char> col_visited(n);

  for (int cur = 0; cur < n; ++cur) {
    std::fill(path_cost.begin(), path_cost.end(), kInf);
    std::fill(path.begin(), path.end(), -1);
    std::fill(row_visited.begin(), row_visited.end(), 0);
    std::fill(col_visited.begin(), col_visited.end(), 0);
    for (int k = 0; k < n; ++k) remaining[k] = n - k - 1;
    int num_remaining = n;

    double min_val = 0.0;
    int i = cur;
    int sink = -1;
    while (sink == -1) {
      row_visited[i] = 1;
      const double* row = cost.data() + static_cast<std::size_t>(i) * n;
      const double ui = s.u[i];
      int best = -1;
      double lowest = kInf;
      for (int k = 0; k < num_remaining; ++k) {
        const int j = remaining[k];
        const double r = min_val + row[j] - ui - s.v[j];
        if (r < path_cost[j]) {
          path[j] = i;
          path_cost[j] = r;
        }
        if (path_cost[j] < lowest ||
            (path_cost[j] == lowest && s.row4col[j] == -1)) {
          lowest = path_cost[j];
          best = k;
        }
      }
      min_val = lowest;
      if (best < 0 || !std::isfinite(min_val)) {
        throw NumericError("linear assignment is infeasible");
      }
      const int j = remaining[best];
      if (s.row4col[j] == -1) {
        sink = j;
      } else {
        i = s.row4col[j];
      }
      col_visited[j] = 1;
      remaining[best] = remaining[--num_remaining];
    }

    s.u[cur] += min_val;
    for (int r = 0; r < n; ++r) {
      if (row_visited[r] && r != cur) s.u[r] += min_val - path_cost[s.col4row[r]];
    }
    for (int j = 0; j < n; ++j) {
      if (col_visited[j]) s.v[j] -= min_val - path_cost[j];
    }

    int j = sink;
    for (;;) {
      const int r = path[j];
      s.row4col[j] = r;
      std::swap(s.col4row[r], j);
      if (r == cur) break;
    }
  }
  return s;
}

// Rewrites an optimal matching into the lexicographically smallest perfect
// matching of the tight subgraph (entries with zero reduced cost). Every such
// matching is optimal, and every optimum lives there.
void make_lexicographic(const std::vector<double>& cost, int n,
                        DualSolution& s, double tol) {
  std::vector<std::vector<int>> row_adj(n);   // tight columns per row, sorted
  std::vector<std::vector<int>> col_adj(n);   // tight rows per column
  for (int i = 0; i < n; ++i) {
    const double* row = cost.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      if (row[j] - s.u[i] - s.v[j] <= tol || j == s.col4row[i]) {
        row_adj[i].push_back(j);
        col_adj[j].push_back(i);
      }
    }
  }

  std::vector<int>& match = s.col4row;
  std::vector<int>& owner = s.row4col;
  std::vector<int> next_col(n);
  std::vector<int> mark(n, -1);  // BFS stamp per column
  std::vector<int> queue;
  queue.reserve(n);

  for (int i = 0; i < n; ++i) {
    const int target = match[i];
    // Columns j from which `target` can be freed: assigning i -> j forces
    // owner[j] onto next_col[j], and so on, ending with a row taking target.
    queue.clear();
    queue.push_back(target);
    mark[target] = i;
    next_col[target] = -1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int c = queue[q];
      for (int r : col_adj[c]) {
        if (r <= i) continue;  // fixed rows and row i itself never move
        const int pc = match[r];
        if (mark[pc] == i) continue;
        mark[pc] = i;
        next_col[pc] = c;
        queue.push_back(pc);
      }
    }

    int chosen = -1;
    for (int j : row_adj[i]) {
      if (mark[j] == i) {
        chosen = j;
        break;
      }
    }
    if (chosen == target) continue;

    // Rotate along the alternating path chosen -> ... -> target.
    int c = chosen;
    int moving = owner[c];
    match[i] = chosen;
    owner[chosen] = i;
    while (c != target) {
      const int nc = next_col[c];
      const int displaced = owner[nc];
      match[moving] = nc;
      owner[nc] = moving;
      moving = displaced;
      c = nc;
    }
  }
}

}  // namespace

Assignment solve_lap(const Eigen::MatrixXd& values, Sense sense) {
  if (values.rows() != values.cols()) {
    throw UsageError("cost matrix must be square, got " +
                     std::to_string(values.rows()) + "x" +
                     std::to_string(values.cols()));
  }
  if (!values.allFinite()) throw NumericError("cost matrix has non-finite entries");

  const int n = static_cast<int>(values.rows());
  Assignment out;
  if (n == 0) return out;

  const double sign = sense == Sense::kMaximize ? -1.0 : 1.0;
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double c = sign * values(i, j);
      cost[static_cast<std::size_t>(i) * n + j] = c;
      scale = std::max(scale, std::abs(c));
    }
  }

  DualSolution s = shortest_augmenting_path(cost, n);
  make_lexicographic(cost, n, s, kTieTolerance * std::max(1.0, scale));

  out.perm = std::move(s.col4row);
  for (int i = 0; i < n; ++i) out.objective += values(i, out.perm[i]);
  return out;
}

Assignment solve_lap(const CostMatrix& c) { return solve_lap(c.values, c.sense); }

}  // namespace bli
