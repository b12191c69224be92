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

// Reference implementations used as test oracles. They share no code with the
// library: simple, slow and written from the definitions.

#ifndef FAIRPARK_TESTS_ORACLES_H_
#define FAIRPARK_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "fairpark/instance.h"

namespace fairpark::testing {

using Matrix = std::vector<std::vector<double>>;

inline Matrix RandomMatrix(std::size_t n, std::size_t m, std::mt19937_64& rng,
                           double lo = 0.0, double hi = 1000.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix d(n, std::vector<double>(m));
  for (auto& row : d) {
    for (double& x : row) x = dist(rng);
  }
  return d;
}

// Small integer distances force many ties.
inline Matrix RandomIntMatrix(std::size_t n, std::size_t m,
                              std::mt19937_64& rng, int hi) {
  std::uniform_int_distribution<int> dist(0, hi);
  Matrix d(n, std::vector<double>(m));
  for (auto& row : d) {
    for (double& x : row) x = dist(rng);
  }
  return d;
}

// Euclidean projection onto the simplex by sorting (Held, Wolfe, Crowder).
inline std::vector<double> SortProjection(const std::vector<double>& x) {
  std::vector<double> s = x;
  std::sort(s.rbegin(), s.rend());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < s.size(); ++r) {
    cumulative += s[r];
    const double t = (cumulative - 1.0) / static_cast<double>(r + 1);
    if (s[r] - t > 0.0) theta = t;
  }
  std::vector<double> p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(0.0, x[i] - theta);
  return p;
}

// Min-max optimum over all injective maps, by recursion over cars.
inline double BottleneckByEnumeration(const Matrix& d) {
  const std::size_t n = d.size();
  const std::size_t m = d.front().size();
  std::vector<bool> used(m, false);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> visit = [&](std::size_t i,
                                                       double worst) {
    if (worst >= best) return;
    if (i == n) {
      best = worst;
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      visit(i + 1, std::max(worst, d[i][j]));
      used[j] = false;
    }
  };
  visit(0, 0.0);
  return best;
}

// g(lambda, mu) straight from the Lagrangian: each car minimizes over every
// slot.
inline double DualByDefinition(const Matrix& d,
                               const std::vector<double>& lambda,
                               const std::vector<double>& mu) {
  double g = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mu.size(); ++j) {
      best = std::min(best, lambda[i] * d[i][j] + mu[j]);
    }
    g += best;
  }
  for (double mu_j : mu) g -= mu_j;
  return g;
}

inline double MaxOf(const Matrix& d, const Assignment& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, d[i][a.slot_of[i]]);
  }
  return worst;
}

inline bool Injective(const Assignment& a, std::size_t m) {
  std::vector<int> count(m, 0);
  for (SlotIndex s : a.slot_of) {
    if (s >= m || ++count[s] > 1) return false;
  }
  return true;
}

}  // namespace fairpark::testing

#endif  // FAIRPARK_TESTS_ORACLES_H_
