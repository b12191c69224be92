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

#include "fairpark/dcp.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>

namespace fairpark {
namespace {

using NearestFreeFn =
    std::function<SlotIndex(CarIndex, const std::vector<bool>&)>;

Assignment RepairWith(const Assignment& infeasible,
                      const SlotGroups& slot_groups,
                      const NearestFreeFn& nearest_free) {
  std::vector<bool> free(slot_groups.size());
  bool conflicted = false;
  for (SlotIndex j = 0; j < slot_groups.size(); ++j) {
    free[j] = slot_groups[j].empty();
    conflicted |= slot_groups[j].size() >= 2;
  }
  if (!conflicted) {
    throw std::invalid_argument("repair called on a conflict-free assignment");
  }
  Assignment result = infeasible;
  for (SlotIndex j = 0; j < slot_groups.size(); ++j) {
    if (slot_groups[j].size() < 2) continue;
    std::vector<CarIndex> cars = slot_groups[j];
    std::sort(cars.begin(), cars.end());
    for (std::size_t n = 1; n < cars.size(); ++n) {
      const SlotIndex pick = nearest_free(cars[n], free);
      free[pick] = false;
      result.slot_of[cars[n]] = pick;
    }
  }
  return result;
}

}  // namespace

void CheckConfig(const DcpConfig& config) {
  if (config.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }
  if (!(config.alpha_min > 0.0) || !std::isfinite(config.alpha_max) ||
      config.alpha_min > config.alpha_max) {
    throw std::invalid_argument("need 0 < alpha_min <= alpha_max");
  }
  if (!(config.bisection_eps > 0.0)) {
    throw std::invalid_argument("bisection_eps must be positive");
  }
}

SlotGroups GroupBySlot(const Assignment& assignment, std::size_t n_slots) {
  SlotGroups groups(n_slots);
  for (CarIndex i = 0; i < assignment.size(); ++i) {
    const SlotIndex j = assignment.slot_of[i];
    if (j >= n_slots) throw std::out_of_range("slot index out of range");
    groups[j].push_back(i);
  }
  return groups;
}

CarAgent::CarAgent(CarIndex id, std::vector<double> distances)
    : id_(id), distances_(std::move(distances)) {}

CarReport CarAgent::Respond(double lambda, std::span<const double> mu) const {
  const SlotIndex j = SolveSubproblem(lambda, mu, distances_);
  return {j, -distances_[j]};
}

SlotIndex CarAgent::NearestFree(const std::vector<bool>& free_slots) const {
  std::optional<SlotIndex> best;
  for (SlotIndex j = 0; j < distances_.size(); ++j) {
    if (free_slots[j] && (!best || distances_[j] < distances_[*best])) best = j;
  }
  if (!best) throw std::logic_error("no free slot left");
  return *best;
}

DcpCoordinator::DcpCoordinator(const Instance& instance,
                               const DcpConfig& config,
                               ExchangeObserver* observer)
    : instance_(instance),
      normalized_(instance),
      config_(config),
      observer_(observer) {
  CheckConfig(config_);
  const NormBounds bounds = SubgradientNormBounds(instance);
  scale_ = bounds.g1 > 0.0 ? bounds.g1 : 1.0;
  normalized_ = instance.Scaled(1.0 / scale_);

  std::mt19937_64 rng(config_.seed);
  alpha_ = config_.alpha_min == config_.alpha_max
               ? config_.alpha_min
               : std::uniform_real_distribution<double>(config_.alpha_min,
                                                        config_.alpha_max)(rng);
  const double g1 = bounds.g1 / scale_;
  const double g_squared = g1 * g1 + bounds.g2 * bounds.g2;
  if (g_squared > 0.0) alpha_ /= g_squared;

  cars_.reserve(instance.num_cars());
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    const auto r = normalized_.row(i);
    cars_.emplace_back(i, std::vector<double>(r.begin(), r.end()));
  }
  state_.dual =
      DualVariables::Initial(instance.num_cars(), instance.num_slots());
  state_.n_conflict = instance.num_cars();
}

bool DcpCoordinator::Step() {
  if (state_.k > config_.max_iterations) return false;
  const int k = state_.k;
  const std::size_t n = instance_.num_cars();
  const std::size_t m = instance_.num_slots();

  // Every car answers the broadcast prices.
  Assignment choices{std::vector<SlotIndex>(n)};
  std::vector<double> u(n);
  for (CarIndex i = 0; i < n; ++i) {
    const CarReport report =
        cars_[i].Respond(state_.dual.lambda[i], state_.dual.mu);
    if (observer_) {
      observer_->OnExchange(k, i, state_.dual.lambda[i], state_.dual.mu,
                            report);
    }
    choices.slot_of[i] = report.slot;
    u[i] = report.u;
  }

  // Bookkeeping of the best assignment.
  SlotGroups groups = GroupBySlot(choices, m);
  std::size_t conflicts = 0;
  for (const auto& g : groups) {
    if (g.size() >= 2) conflicts += g.size();
  }
  if (conflicts == 0) {
    state_.n_conflict = 0;
    if (!first_feasible_) first_feasible_ = k;
    const double p = MinMaxCost(instance_, choices);
    if (state_.p_cur > p) {
      state_.p_cur = p;
      state_.x_cur = choices;
      state_.slot_groups = groups;
    }
  } else if (conflicts < state_.n_conflict || state_.x_cur.size() == 0) {
    // The empty check adopts the first iterate when every car conflicts at
    // k = 1, which the strict comparison against the initial tally N skips.
    state_.n_conflict = conflicts;
    state_.p_cur = kInfinity;
    state_.x_cur = choices;
    state_.slot_groups = groups;
  }

  if (config_.trace != TraceLevel::kNone) {
    IterationRecord rec;
    rec.k = k;
    double g = 0.0;
    for (CarIndex i = 0; i < n; ++i) {
      g += state_.dual.lambda[i] * -u[i] + state_.dual.mu[choices.slot_of[i]];
    }
    for (double mu_j : state_.dual.mu) g -= mu_j;
    rec.dual_value = g * scale_;
    rec.p_cur = state_.p_cur;
    rec.n_conflict = state_.n_conflict;
    rec.conflicts_at_k = conflicts;
    if (config_.trace == TraceLevel::kFull) {
      rec.dual.lambda = state_.dual.lambda;
      rec.dual.mu = state_.dual.mu;
      for (double& mu_j : rec.dual.mu) mu_j *= scale_;
      rec.subgradient.u = u;
      for (double& u_i : rec.subgradient.u) u_i *= scale_;
      rec.subgradient.v.resize(m);
      for (SlotIndex j = 0; j < m; ++j) {
        rec.subgradient.v[j] = 1.0 - static_cast<double>(groups[j].size());
      }
      rec.choices = choices.slot_of;
    }
    trace_.push_back(std::move(rec));
  }

  // Projected subgradient update.
  const double step = StepSize(k, alpha_);
  std::vector<double> lambda_next(n);
  for (CarIndex i = 0; i < n; ++i) {
    lambda_next[i] = state_.dual.lambda[i] - step * u[i];
  }
  state_.dual.lambda =
      ProjectOntoSimplex(lambda_next, config_.bisection_eps).lambda;
  std::vector<double> mu_next(m);
  for (SlotIndex j = 0; j < m; ++j) {
    const double v_j = 1.0 - static_cast<double>(groups[j].size());
    mu_next[j] = state_.dual.mu[j] - step * v_j;
  }
  state_.dual.mu = ProjectNonnegative(mu_next);

  ++state_.k;
  return state_.k <= config_.max_iterations;
}

DcpResult DcpCoordinator::Finish() && {
  DcpResult result;
  result.iterations_run = state_.k - 1;
  result.first_feasible_iteration = first_feasible_;
  result.dual_trace = std::move(trace_);
  if (state_.x_cur.size() == 0) {
    throw std::logic_error("Finish called before any iteration ran");
  }
  if (state_.n_conflict == 0) {
    result.assignment = state_.x_cur;
  } else {
    result.assignment =
        RepairWith(state_.x_cur, state_.slot_groups,
                   [this](CarIndex car, const std::vector<bool>& free) {
                     return cars_[car].NearestFree(free);
                   });
    result.repaired = true;
  }
  result.objective = MinMaxCost(instance_, result.assignment);
  return result;
}

DcpResult SolveDcp(const Instance& instance, const DcpConfig& config,
                   ExchangeObserver* observer) {
  DcpCoordinator coordinator(instance, config, observer);
  while (coordinator.Step()) {
  }
  return std::move(coordinator).Finish();
}

Assignment Repair(const Assignment& infeasible, const SlotGroups& slot_groups,
                  const Instance& instance) {
  CheckAssignment(instance, infeasible);
  if (slot_groups.size() != instance.num_slots()) {
    throw std::invalid_argument("slot_groups must have one entry per slot");
  }
  return RepairWith(
      infeasible, slot_groups,
      [&instance](CarIndex car, const std::vector<bool>& free) {
        std::optional<SlotIndex> best;
        for (SlotIndex j = 0; j < free.size(); ++j) {
          if (free[j] && (!best || instance.distance(car, j) <
                                       instance.distance(car, *best))) {
            best = j;
          }
        }
        if (!best) throw std::logic_error("no free slot left");
        return *best;
      });
}

}  // namespace fairpark
