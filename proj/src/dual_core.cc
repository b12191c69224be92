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

#include "fairpark/dual_core.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fairpark {
namespace {

// Derivative of the projection dual at nu.
double SimplexResidual(std::span<const double> x, double nu) {
  double sum = 0.0;
  for (double xi : x) sum += std::max(0.0, xi - nu);
  return sum - 1.0;
}

}  // namespace

DualVariables DualVariables::Initial(std::size_t n_cars, std::size_t n_slots) {
  DualVariables dual;
  dual.lambda.assign(n_cars, 1.0 / static_cast<double>(n_cars));
  dual.mu.assign(n_slots, 0.0);
  return dual;
}

void CheckDualFeasible(const DualVariables& dual, const Instance& instance) {
  if (dual.lambda.size() != instance.num_cars() ||
      dual.mu.size() != instance.num_slots()) {
    throw std::invalid_argument("dual variables do not match instance size");
  }
  double sum = 0.0;
  for (double l : dual.lambda) {
    if (!std::isfinite(l) || l < 0.0) {
      throw std::invalid_argument("lambda must be finite and non-negative");
    }
    sum += l;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("lambda must sum to 1, got " +
                                std::to_string(sum));
  }
  for (double m : dual.mu) {
    if (!std::isfinite(m) || m < 0.0) {
      throw std::invalid_argument("mu must be finite and non-negative");
    }
  }
}

SlotIndex SolveSubproblem(double lambda_i, std::span<const double> mu,
                          std::span<const double> d_i) {
  if (d_i.empty()) throw std::invalid_argument("empty slot list");
  if (mu.size() != d_i.size()) {
    throw std::invalid_argument("mu and d_i differ in length");
  }
  SlotIndex best = 0;
  double best_score = lambda_i * d_i[0] + mu[0];
  for (SlotIndex l = 1; l < d_i.size(); ++l) {
    const double score = lambda_i * d_i[l] + mu[l];
    if (score < best_score) {
      best_score = score;
      best = l;
    }
  }
  return best;
}

double DualValue(const DualVariables& dual, const Instance& instance) {
  CheckDualFeasible(dual, instance);
  double value = 0.0;
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    const auto d_i = instance.row(i);
    const SlotIndex j = SolveSubproblem(dual.lambda[i], dual.mu, d_i);
    value += dual.lambda[i] * d_i[j] + dual.mu[j];
  }
  for (double m : dual.mu) value -= m;
  return value;
}

Subgradient ComputeSubgradient(std::span<const SlotIndex> choices,
                               const Instance& instance) {
  if (choices.size() != instance.num_cars()) {
    throw std::invalid_argument("one choice per car required");
  }
  Subgradient s;
  s.u.resize(instance.num_cars());
  s.v.assign(instance.num_slots(), 1.0);
  for (CarIndex i = 0; i < choices.size(); ++i) {
    const SlotIndex j = choices[i];
    if (j >= instance.num_slots()) {
      throw std::out_of_range("choice out of range");
    }
    s.u[i] = -instance.distance(i, j);
    s.v[j] -= 1.0;
  }
  return s;
}

SimplexProjectionResult ProjectOntoSimplex(std::span<const double> x,
                                           double eps) {
  if (x.empty()) throw std::invalid_argument("cannot project empty vector");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  for (double xi : x) {
    if (!std::isfinite(xi)) {
      throw std::invalid_argument("non-finite input to simplex projection");
    }
  }
  const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
  double lo = *min_it - 1.0;
  double hi = *max_it;
  while (hi - lo >= eps) {
    const double mid = 0.5 * (lo + hi);
    // Bracket can no longer shrink in floating point.
    if (mid <= lo || mid >= hi) break;
    if (SimplexResidual(x, mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  SimplexProjectionResult result;
  result.nu_star = 0.5 * (lo + hi);
  result.lambda.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    result.lambda[i] = std::max(0.0, x[i] - result.nu_star);
  }
  return result;
}

std::vector<double> ProjectNonnegative(std::span<const double> mu) {
  std::vector<double> out(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (!std::isfinite(mu[j])) {
      throw std::invalid_argument("non-finite input to orthant projection");
    }
    out[j] = std::max(0.0, mu[j]);
  }
  return out;
}

double StepSize(int k, double alpha) {
  if (k < 1) throw std::invalid_argument("iteration index must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return alpha / static_cast<double>(k);
}

NormBounds SubgradientNormBounds(const Instance& instance) {
  double sum_sq = 0.0;
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    const auto r = instance.row(i);
    const double m = *std::max_element(r.begin(), r.end());
    sum_sq += m * m;
  }
  const double n = static_cast<double>(instance.num_cars());
  const double m = static_cast<double>(instance.num_slots());
  return {std::sqrt(sum_sq), std::sqrt((n - 1.0) * (n - 1.0) + (m - 1.0))};
}

double Norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace fairpark
