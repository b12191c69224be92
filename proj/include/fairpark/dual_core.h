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

// Lagrangian dual of the epigraph form of the min-max assignment problem.
//
// Dualizing "d(i, x_i) <= s" with lambda_i and "at most one car per slot" with
// mu_j leaves a Lagrangian that is bounded in s only when sum(lambda) = 1, and
// otherwise separates per car:
//
//   g(lambda, mu) = sum_i min_j (lambda_i d(i, j) + mu_j) - sum_j mu_j
//
// over lambda in the probability simplex and mu >= 0. The functions here are
// the building blocks of the projected subgradient ascent on g.

#ifndef FAIRPARK_DUAL_CORE_H_
#define FAIRPARK_DUAL_CORE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fairpark/instance.h"

namespace fairpark {

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kDefaultBisectionEps = 1e-12;

struct DualVariables {
  std::vector<double> lambda;  // one per car, on the probability simplex
  std::vector<double> mu;      // one per slot, non-negative

  // lambda uniform, mu = 0.
  static DualVariables Initial(std::size_t n_cars, std::size_t n_slots);
};

// Throws std::invalid_argument unless lambda is on the simplex (within
// kSimplexTolerance) and mu is non-negative, with sizes matching `instance`.
void CheckDualFeasible(const DualVariables& dual, const Instance& instance);

// One subgradient of -g at (lambda, mu): u_i = -d(i, choice_i) and
// v_j = 1 - |{i : choice_i = j}|.
struct Subgradient {
  std::vector<double> u;
  std::vector<double> v;
};

struct SimplexProjectionResult {
  std::vector<double> lambda;
  double nu_star = 0.0;
};

// argmin_l (lambda_i d_i[l] + mu[l]); ties go to the smallest slot index.
SlotIndex SolveSubproblem(double lambda_i, std::span<const double> mu,
                          std::span<const double> d_i);

// g(lambda, mu) on the finite branch. The caller's point must be dual feasible.
double DualValue(const DualVariables& dual, const Instance& instance);

Subgradient ComputeSubgradient(std::span<const SlotIndex> choices,
                               const Instance& instance);

// Euclidean projection onto {lambda : sum = 1, lambda >= 0} by bisection on the
// multiplier nu of the sum constraint. The derivative of the concave dual is
// r(nu) = sum_i max(0, x_i - nu) - 1; it is >= 0 at nu = min(x) - 1 and equals
// -1 at nu = max(x), so that bracket always contains nu*. Bisection stops once
// the bracket is narrower than `eps`.
SimplexProjectionResult ProjectOntoSimplex(std::span<const double> x,
                                           double eps = kDefaultBisectionEps);

std::vector<double> ProjectNonnegative(std::span<const double> mu);

// alpha / k for k >= 1.
double StepSize(int k, double alpha);

// Upper bounds on the subgradient norms: ||u|| <= g1, ||v|| <= g2.
struct NormBounds {
  double g1 = 0.0;
  double g2 = 0.0;
};

NormBounds SubgradientNormBounds(const Instance& instance);

double Norm2(std::span<const double> x);

}  // namespace fairpark

#endif  // FAIRPARK_DUAL_CORE_H_
