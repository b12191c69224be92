// Copyright 2026 The FairPark Authors
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

// Reference solvers for the min-max assignment problem: the nearest-free-slot
// greedy policy, an exact bottleneck solver (threshold search over the
// distinct distances plus maximum bipartite matching) and an exhaustive
// enumerator used to check the exact solver on small instances.

#ifndef FAIRPARK_BASELINES_H_
#define FAIRPARK_BASELINES_H_

#include <cstddef>
#include <vector>

#include "fairpark/instance.h"

namespace fairpark {

struct SolvedAssignment {
  Assignment assignment;
  double optimum = 0.0;
};

// Cars in increasing index order each take their nearest still-free slot
// (ties to the smallest slot index).
Assignment GreedyAssign(const Instance& instance);

// Bipartite graph with an edge (i, j) iff d(i, j) <= threshold.
class MatchingGraph {
 public:
  MatchingGraph(const Instance& instance, double threshold);

  std::size_t num_cars() const { return adjacency_.size(); }
  const std::vector<SlotIndex>& neighbors(CarIndex car) const {
    return adjacency_[car];
  }

  // Hopcroft-Karp. Returns slot per car, or num_slots for unmatched cars.
  std::vector<SlotIndex> MaximumMatching(std::size_t* matched) const;

 private:
  std::size_t n_slots_;
  std::vector<std::vector<SlotIndex>> adjacency_;
};

SolvedAssignment ExactBottleneck(const Instance& instance);

inline constexpr std::size_t kBruteForceMaxCars = 8;
inline constexpr std::size_t kBruteForceMaxSlots = 10;

// Lexicographically smallest optimal assignment by full enumeration. Throws
// std::invalid_argument beyond kBruteForceMaxCars x kBruteForceMaxSlots.
SolvedAssignment BruteForce(const Instance& instance);

}  // namespace fairpark

#endif  // FAIRPARK_BASELINES_H_
