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

#include <vector>

#include <Eigen/Dense>

namespace bli {

enum class Sense { kMinimize, kMaximize };

struct CostMatrix {
  Eigen::MatrixXd values;
  Sense sense = Sense::kMinimize;
};

struct Assignment {
  std::vector<int> perm;  // perm[i] = column assigned to row i
  double objective = 0.0;
};

// Exact square linear assignment. Among all optimal permutations the
// lexicographically smallest one is returned, so results are reproducible
// regardless of how the optimum was reached.
//
// Shortest augmenting paths with dual potentials, O(n^3) worst case. Entries
// whose reduced costs lie within a relative 1e-10 of zero count as ties.
//
// Throws UsageError for non-square input, NumericError for non-finite entries.
Assignment solve_lap(const CostMatrix& c);
Assignment solve_lap(const Eigen::MatrixXd& values, Sense sense);

}  // namespace bli
