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

#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace fairpark {
namespace {

using ::testing::ElementsAre;

// Kuhn's augmenting paths, one car at a time.
std::size_t KuhnMatchingSize(const testing::Matrix& d, double threshold) {
  const std::size_t m = d.front().size();
  std::vector<int> owner(m, -1);
  std::size_t size = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<bool> seen(m, false);
    std::function<bool(std::size_t)> augment = [&](std::size_t car) {
      for (std::size_t j = 0; j < m; ++j) {
        if (d[car][j] > threshold || seen[j]) continue;
        seen[j] = true;
        if (owner[j] < 0 || augment(owner[j])) {
          owner[j] = static_cast<int>(car);
          return true;
        }
      }
      return false;
    };
    if (augment(i)) ++size;
  }
  return size;
}

// First optimal map in lexicographic order of (slot of car 1, car 2, ...).
std::vector<SlotIndex> LexFirstOptimum(const testing::Matrix& d) {
  const double optimum = testing::BottleneckByEnumeration(d);
  const std::size_t n = d.size();
  const std::size_t m = d.front().size();
  std::vector<SlotIndex> current(n);
  std::vector<bool> used(m, false);
  std::function<bool(std::size_t)> visit = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || d[i][j] > optimum) continue;
      used[j] = true;
      current[i] = j;
      if (visit(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  visit(0);
  return current;
}

TEST(GreedyTest, TwoCarExample) {
  const Instance inst = Instance::FromRows({{1, 4}, {4, 5}});
  const Assignment a = GreedyAssign(inst);
  EXPECT_THAT(a.slot_of, ElementsAre(0, 1));
  EXPECT_EQ(MinMaxCost(inst, a), 5.0);
  EXPECT_EQ(TotalCost(inst, a), 6.0);
}

TEST(GreedyTest, SingleCarTakesItsNearestSlot) {
  const Instance inst = Instance::FromRows({{7, 3, 9, 3}});
  EXPECT_THAT(GreedyAssign(inst).slot_of, ElementsAre(1));
}

TEST(GreedyTest, LaterCarsFindEarlierPicksTaken) {
  const Instance inst = Instance::FromRows({{1, 2}, {1, 3}});
  const Assignment a = GreedyAssign(inst);
  EXPECT_THAT(a.slot_of, ElementsAre(0, 1));
  EXPECT_EQ(MinMaxCost(inst, a), 3.0);
}

TEST(GreedyTest, AlwaysInjective) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 10;
    const std::size_t n = 1 + rng() % m;
    const auto d = testing::RandomIntMatrix(n, m, rng, 4);
    EXPECT_TRUE(testing::Injective(GreedyAssign(Instance::FromRows(d)), m));
  }
}

TEST(MatchingGraphTest, EdgesFollowTheThreshold) {
  const Instance inst = Instance::FromRows({{1, 4, 2}, {4, 5, 4}});
  const MatchingGraph graph(inst, 4.0);
  EXPECT_THAT(graph.neighbors(0), ElementsAre(0, 1, 2));
  EXPECT_THAT(graph.neighbors(1), ElementsAre(0, 2));
  const MatchingGraph tight(inst, 1.0);
  std::size_t matched = 0;
  const auto slots = tight.MaximumMatching(&matched);
  EXPECT_EQ(matched, 1);
  EXPECT_THAT(slots, ElementsAre(0, 3));
}

TEST(MatchingGraphTest, MatchingSizeAgreesWithKuhn) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 12;
    const std::size_t n = 1 + rng() % m;
    const auto d = testing::RandomIntMatrix(n, m, rng, 9);
    const double threshold = static_cast<double>(rng() % 10);
    const Instance inst = Instance::FromRows(d);
    std::size_t matched = 0;
    const auto slots = MatchingGraph(inst, threshold).MaximumMatching(&matched);
    EXPECT_EQ(matched, KuhnMatchingSize(d, threshold));
    std::vector<bool> taken(m, false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (slots[i] == m) continue;
      ++count;
      EXPECT_LE(d[i][slots[i]], threshold);
      EXPECT_FALSE(taken[slots[i]]);
      taken[slots[i]] = true;
    }
    EXPECT_EQ(count, matched);
  }
}

TEST(ExactTest, TwoCarExample) {
  const SolvedAssignment r =
      ExactBottleneck(Instance::FromRows({{1, 4}, {4, 5}}));
  EXPECT_EQ(r.optimum, 4.0);
  EXPECT_THAT(r.assignment.slot_of, ElementsAre(1, 0));
}

TEST(ExactTest, ZeroDiagonalGivesIdentity) {
  const Instance inst = Instance::FromRows({{0, 3, 5}, {2, 0, 7}, {4, 1, 0}});
  const SolvedAssignment r = ExactBottleneck(inst);
  EXPECT_EQ(r.optimum, 0.0);
  EXPECT_THAT(r.assignment.slot_of, ElementsAre(0, 1, 2));
}

TEST(ExactTest, MatchesEnumerationOnRandomInstances) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 7;
    const std::size_t n = 1 + rng() % std::min<std::size_t>(m, 5);
    const auto d = trial % 3 == 0 ? testing::RandomIntMatrix(n, m, rng, 3)
                                  : testing::RandomMatrix(n, m, rng);
    const SolvedAssignment r = ExactBottleneck(Instance::FromRows(d));
    EXPECT_EQ(r.optimum, testing::BottleneckByEnumeration(d));
    EXPECT_TRUE(testing::Injective(r.assignment, m));
    EXPECT_EQ(testing::MaxOf(d, r.assignment), r.optimum);
  }
}

TEST(ExactTest, NeverWorseThanGreedy) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst =
        Instance::FromRows(testing::RandomMatrix(10, 30, rng));
    EXPECT_LE(ExactBottleneck(inst).optimum,
              MinMaxCost(inst, GreedyAssign(inst)));
  }
}

TEST(BruteForceTest, TwoCarExampleAndSingleCar) {
  EXPECT_EQ(BruteForce(Instance::FromRows({{1, 4}, {4, 5}})).optimum, 4.0);
  EXPECT_EQ(BruteForce(Instance::FromRows({{6, 2, 8}})).optimum, 2.0);
}

TEST(BruteForceTest, ReturnsLexicographicallyFirstOptimum) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 6;
    const std::size_t n = 1 + rng() % m;
    const auto d = testing::RandomIntMatrix(n, m, rng, 2);
    const SolvedAssignment r = BruteForce(Instance::FromRows(d));
    EXPECT_EQ(r.optimum, testing::BottleneckByEnumeration(d));
    EXPECT_EQ(r.assignment.slot_of, LexFirstOptimum(d));
  }
}

TEST(BruteForceTest, SizeGuard) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(
      BruteForce(Instance::FromRows(testing::RandomMatrix(9, 10, rng))),
      std::invalid_argument);
  EXPECT_THROW(
      BruteForce(Instance::FromRows(testing::RandomMatrix(2, 11, rng))),
      std::invalid_argument);
  EXPECT_NO_THROW(
      BruteForce(Instance::FromRows(testing::RandomMatrix(8, 10, rng))));
}

}  // namespace
}  // namespace fairpark
