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

#include "fairpark/baselines.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fairpark {
namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

// Hopcroft-Karp state over cars (left) and slots (right).
class HopcroftKarp {
 public:
  HopcroftKarp(const std::vector<std::vector<SlotIndex>>& adjacency,
               std::size_t n_slots)
      : adj_(adjacency),
        slot_of_(adjacency.size(), kUnset),
        car_of_(n_slots, kUnset),
        layer_(adjacency.size()) {}

  std::size_t Run() {
    std::size_t matched = 0;
    while (BuildLayers()) {
      for (CarIndex i = 0; i < adj_.size(); ++i) {
        if (slot_of_[i] == kUnset && Augment(i)) ++matched;
      }
    }
    return matched;
  }

  const std::vector<SlotIndex>& slot_of() const { return slot_of_; }

 private:
  bool BuildLayers() {
    std::queue<CarIndex> frontier;
    for (CarIndex i = 0; i < adj_.size(); ++i) {
      if (slot_of_[i] == kUnset) {
        layer_[i] = 0;
        frontier.push(i);
      } else {
        layer_[i] = kUnset;
      }
    }
    bool reaches_free = false;
    while (!frontier.empty()) {
      const CarIndex i = frontier.front();
      frontier.pop();
      for (SlotIndex j : adj_[i]) {
        const CarIndex owner = car_of_[j];
        if (owner == kUnset) {
          reaches_free = true;
        } else if (layer_[owner] == kUnset) {
          layer_[owner] = layer_[i] + 1;
          frontier.push(owner);
        }
      }
    }
    return reaches_free;
  }

  bool Augment(CarIndex i) {
    for (SlotIndex j : adj_[i]) {
      const CarIndex owner = car_of_[j];
      if (owner == kUnset ||
          (layer_[owner] == layer_[i] + 1 && Augment(owner))) {
        slot_of_[i] = j;
        car_of_[j] = i;
        return true;
      }
    }
    layer_[i] = kUnset;
    return false;
  }

  const std::vector<std::vector<SlotIndex>>& adj_;
  std::vector<SlotIndex> slot_of_;
  std::vector<CarIndex> car_of_;
  std::vector<std::size_t> layer_;
};

struct BruteForceSearch {
  const Instance& instance;
  std::vector<SlotIndex> current;
  std::vector<bool> used;
  std::vector<SlotIndex> best;
  double best_value = std::numeric_limits<double>::infinity();

  // Slots are tried in increasing order and only strict improvements are
  // kept, so the first optimum found is the lexicographically smallest.
  void Visit(CarIndex car, double worst_so_far) {
    if (worst_so_far >= best_value) return;
    if (car == instance.num_cars()) {
      best_value = worst_so_far;
      best = current;
      return;
    }
    for (SlotIndex j = 0; j < instance.num_slots(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      current[car] = j;
      Visit(car + 1, std::max(worst_so_far, instance.distance(car, j)));
      used[j] = false;
    }
  }
};

}  // namespace

Assignment GreedyAssign(const Instance& instance) {
  std::vector<bool> taken(instance.num_slots(), false);
  Assignment a{std::vector<SlotIndex>(instance.num_cars())};
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    SlotIndex best = kUnset;
    for (SlotIndex j = 0; j < instance.num_slots(); ++j) {
      if (taken[j]) continue;
      if (best == kUnset ||
          instance.distance(i, j) < instance.distance(i, best)) {
        best = j;
      }
    }
    taken[best] = true;
    a.slot_of[i] = best;
  }
  return a;
}

MatchingGraph::MatchingGraph(const Instance& instance, double threshold)
    : n_slots_(instance.num_slots()), adjacency_(instance.num_cars()) {
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    for (SlotIndex j = 0; j < instance.num_slots(); ++j) {
      if (instance.distance(i, j) <= threshold) adjacency_[i].push_back(j);
    }
  }
}

std::vector<SlotIndex> MatchingGraph::MaximumMatching(
    std::size_t* matched) const {
  HopcroftKarp hk(adjacency_, n_slots_);
  const std::size_t size = hk.Run();
  if (matched) *matched = size;
  std::vector<SlotIndex> slots = hk.slot_of();
  for (SlotIndex& j : slots) {
    if (j == kUnset) j = n_slots_;
  }
  return slots;
}

SolvedAssignment ExactBottleneck(const Instance& instance) {
  std::vector<double> values = instance.data();
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // The optimum is at least the largest per-car minimum distance.
  double floor_value = 0.0;
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    const auto r = instance.row(i);
    floor_value = std::max(floor_value, *std::min_element(r.begin(), r.end()));
  }
  std::size_t lo = std::lower_bound(values.begin(), values.end(), floor_value) -
                   values.begin();
  std::size_t hi = values.size() - 1;  // always perfect on the car side

  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    std::size_t matched = 0;
    MatchingGraph(instance, values[mid]).MaximumMatching(&matched);
    if (matched == instance.num_cars()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  std::size_t matched = 0;
  SolvedAssignment result;
  result.optimum = values[lo];
  result.assignment.slot_of =
      MatchingGraph(instance, values[lo]).MaximumMatching(&matched);
  if (matched != instance.num_cars()) {
    throw std::logic_error("bottleneck threshold search lost feasibility");
  }
  return result;
}

SolvedAssignment BruteForce(const Instance& instance) {
  if (instance.num_cars() > kBruteForceMaxCars ||
      instance.num_slots() > kBruteForceMaxSlots) {
    throw std::invalid_argument("brute force limited to 8 cars and 10 slots");
  }
  BruteForceSearch search{instance,
                          std::vector<SlotIndex>(instance.num_cars()),
                          std::vector<bool>(instance.num_slots(), false),
                          {},
                          std::numeric_limits<double>::infinity()};
  search.Visit(0, 0.0);
  return {Assignment{search.best}, search.best_value};
}

}  // namespace fairpark
