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
#include <functional>

namespace bli {

// Worker count for parallel loops: the in-process setting if any, else
// hardware concurrency. BLI_NUM_THREADS caps either.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the default

// Calls body(i) for i in [begin, end). Each index is visited exactly once;
// body must only write state owned by index i so results are independent of
// scheduling.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace bli
