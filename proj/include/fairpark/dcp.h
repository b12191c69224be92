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

// Distributed car parking (DCP): projected subgradient ascent on the dual of
// the min-max assignment problem, run by a central coordinator that talks to
// one agent per car.
//
// Each iteration the coordinator broadcasts (lambda_i, mu) to car i; the car
// answers with its cheapest slot j_i under the current prices and the scalar
// u_i = -d(i, j_i). Nothing else crosses that boundary. The coordinator keeps
// the best conflict-free assignment seen so far (smallest max distance) or,
// while none exists, the assignment with the fewest conflicting cars, and
// updates lambda on the simplex and mu on the orthant with step alpha / k.
// After a fixed number of iterations a conflicting incumbent is repaired.

#ifndef FAIRPARK_DCP_H_
#define FAIRPARK_DCP_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fairpark/dual_core.h"
#include "fairpark/instance.h"

namespace fairpark {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class TraceLevel {
  kNone,     // no per-iteration records
  kSummary,  // dual value, p_cur, conflict tallies
  kFull,     // summary plus the dual iterate, subgradient and choices
};

// Cars work with distances divided by G1 = sqrt(sum_i max_j d_ij^2), the
// bound on the distance part of the subgradient. The drawn alpha is further
// divided by G^2 = 1 + G2^2, the squared subgradient bound in those units, so
// one default range fits both 2-car and 100-car instances.
inline constexpr double kDefaultAlphaMin = 0.5;
inline constexpr double kDefaultAlphaMax = 5.0;

struct DcpConfig {
  int max_iterations = 300;
  // alpha is drawn once, uniformly on [alpha_min, alpha_max], then scaled
  // by 1 / G^2.
  double alpha_min = kDefaultAlphaMin;
  double alpha_max = kDefaultAlphaMax;
  std::uint64_t seed = 0;
  double bisection_eps = kDefaultBisectionEps;
  TraceLevel trace = TraceLevel::kNone;
};

// Throws std::invalid_argument on a bad config.
void CheckConfig(const DcpConfig& config);

// Cars holding each slot; index is the slot.
using SlotGroups = std::vector<std::vector<CarIndex>>;

SlotGroups GroupBySlot(const Assignment& assignment, std::size_t n_slots);

// Reply of one car in one iteration.
struct CarReport {
  SlotIndex slot = 0;
  double u = 0.0;
};

// Holds one car's private distance row. Sees only its own lambda and the
// slot prices.
class CarAgent {
 public:
  CarAgent(CarIndex id, std::vector<double> distances);

  CarIndex id() const { return id_; }

  CarReport Respond(double lambda, std::span<const double> mu) const;

  // Nearest slot among those flagged free; ties to the smallest index.
  SlotIndex NearestFree(const std::vector<bool>& free_slots) const;

 private:
  CarIndex id_;
  std::vector<double> distances_;
};

// Sees every coordinator <-> car exchange. `mu` is only valid for the call.
class ExchangeObserver {
 public:
  virtual ~ExchangeObserver() = default;
  virtual void OnExchange(int k, CarIndex car, double lambda,
                          std::span<const double> mu,
                          const CarReport& report) = 0;
};

// Per-iteration record in the instance's own distance units. `dual_value` and
// the full iterate refer to (lambda^(k), mu^(k)), the point the cars answered
// in iteration k; p_cur and the tallies are after bookkeeping of iteration k.
struct IterationRecord {
  int k = 0;
  double dual_value = 0.0;
  double p_cur = kInfinity;
  std::size_t n_conflict = 0;      // best tally so far
  std::size_t conflicts_at_k = 0;  // tally of this iteration's choices

  // kFull only.
  DualVariables dual;
  Subgradient subgradient;
  std::vector<SlotIndex> choices;
};

struct DcpState {
  int k = 1;
  DualVariables dual;  // normalized scale
  double p_cur = kInfinity;
  Assignment x_cur;  // empty until the first iteration has been tracked
  std::size_t n_conflict = 0;
  SlotGroups slot_groups;
};

struct DcpResult {
  Assignment assignment;
  double objective = 0.0;
  int iterations_run = 0;
  std::optional<int> first_feasible_iteration;
  bool repaired = false;
  std::vector<IterationRecord> dual_trace;
};

// Iteration-at-a-time view of one solve, for callers that need the state
// between steps. SolveDcp is the usual entry point.
class DcpCoordinator {
 public:
  DcpCoordinator(const Instance& instance, const DcpConfig& config,
                 ExchangeObserver* observer = nullptr);

  // Runs one iteration. Returns false once max_iterations have run.
  bool Step();

  // Returns the tracked assignment, repairing it if it still has conflicts.
  DcpResult Finish() &&;

  const DcpState& state() const { return state_; }
  // Ratio between instance distances and the normalized ones the cars use.
  double distance_scale() const { return scale_; }
  // Coordinator-private step scale, after the 1 / G^2 factor; exposed for
  // auditing only. Iteration k steps by alpha() / k.
  double alpha() const { return alpha_; }

 private:
  const Instance& instance_;
  Instance normalized_;
  DcpConfig config_;
  ExchangeObserver* observer_;
  double scale_;
  double alpha_;
  std::vector<CarAgent> cars_;
  DcpState state_;
  std::optional<int> first_feasible_;
  std::vector<IterationRecord> trace_;
};

DcpResult SolveDcp(const Instance& instance, const DcpConfig& config,
                   ExchangeObserver* observer = nullptr);

// Makes a conflicting assignment feasible. Over-assigned slots are visited in
// increasing slot order; in each, the lowest-indexed car stays and every other
// car, by increasing index, moves to its nearest currently free slot.
// Cars outside conflict groups keep their slots. `slot_groups` must describe
// `infeasible`. Throws std::invalid_argument if there is no conflict.
Assignment Repair(const Assignment& infeasible, const SlotGroups& slot_groups,
                  const Instance& instance);

}  // namespace fairpark

#endif  // FAIRPARK_DCP_H_
