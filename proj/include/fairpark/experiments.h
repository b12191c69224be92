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

// Monte Carlo benchmark harness. Each sweep point (N cars, M slots) draws T
// independent uniform instances ("time slots"), solves each with the requested
// methods and aggregates:
//   * degree of feasibility: share of slots where DCP reached a conflict-free
//     assignment before repair;
//   * p_ave(k): mean over slots of the best feasible objective after k
//     iterations (infinite until every slot has one);
//   * p_ave_final: mean objective of the returned (always feasible) answers;
//   * empirical CDFs of solver wall time.
//
// Seeds: slot t (0-based) of a sweep with master seed s uses as instance seed
// output t + 1 of a SplitMix64 generator seeded with s, and as DCP seed
// SplitMix64(instance seed). Seeds do not depend on (N, M), so neighbouring
// sweep points share random numbers.

#ifndef FAIRPARK_EXPERIMENTS_H_
#define FAIRPARK_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairpark/dcp.h"

namespace fairpark {

enum class Method { kDcp, kGreedy, kExact };

const char* ToString(Method method);
Method ParseMethod(const std::string& name);

struct SweepConfig {
  std::vector<std::size_t> n_cars_list;
  std::vector<std::size_t> n_slots_list;
  int time_slots = 200;
  int iterations = 300;
  double lo = 0.0;
  double hi = 1000.0;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::kDcp, Method::kGreedy, Method::kExact};
  double alpha_min = kDefaultAlphaMin;
  double alpha_max = kDefaultAlphaMax;
  bool record_traces = false;
  // Worker threads over time slots. Records are ordered by slot regardless.
  int threads = 1;
};

// Throws std::invalid_argument on a bad config or an (N, M) pair with N > M.
void CheckSweepConfig(const SweepConfig& config);

std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t SlotSeed(std::uint64_t master_seed, int t);

struct ExperimentRecord {
  std::size_t n_cars = 0;
  std::size_t n_slots = 0;
  int t = 0;  // 0-based; written 1-based
  Method method = Method::kDcp;
  double objective = 0.0;
  bool feasible_before_repair = true;
  std::optional<int> first_feasible_iteration;
  int iterations = 0;  // DCP only
  double wall_time_s = 0.0;
  std::vector<double> p_cur_trace;  // DCP with record_traces only
};

struct SweepPoint {
  std::size_t n_cars = 0;
  std::size_t n_slots = 0;
  std::vector<ExperimentRecord> records;  // sorted by (t, method)

  std::vector<ExperimentRecord> Of(Method method) const;
};

// Runs every (N, M) pair in n_cars_list x n_slots_list, in list order. Throws
// std::logic_error if an exact objective ever exceeds a DCP or greedy one.
std::vector<SweepPoint> RunSweep(const SweepConfig& config);

SweepPoint RunPoint(const SweepConfig& config, std::size_t n_cars,
                    std::size_t n_slots);

// Percentage of DCP records whose tracked assignment after K iterations was
// conflict-free. Uses the p_cur trace when K is below the run length.
double DegreeOfFeasibility(std::span<const ExperimentRecord> records, int k);

struct ObjectiveCurve {
  std::vector<double> p_ave;  // index k - 1; +inf while any slot is infinite
  std::optional<int> first_all_finite_k;
};

ObjectiveCurve AverageObjectiveCurve(std::span<const ExperimentRecord> records,
                                     int k);

double AverageFinalObjective(std::span<const ExperimentRecord> records);

// (time, cumulative fraction) for `method`, sorted by time.
std::vector<std::pair<double, double>> TimingCdf(
    std::span<const ExperimentRecord> records, Method method);

double MeanWallTime(std::span<const ExperimentRecord> records, Method method);

// CSV writers. Doubles use a fixed printf format, so reruns are byte-identical
// wherever the values are.
void WriteRecordsCsv(std::ostream& out,
                     std::span<const ExperimentRecord> records);
void WriteTracesCsv(std::ostream& out,
                    std::span<const ExperimentRecord> records);
void WriteDfCsv(std::ostream& out, const SweepConfig& config,
                std::span<const SweepPoint> points);
void WriteFinalCsv(std::ostream& out, const SweepConfig& config,
                   std::span<const SweepPoint> points);
void WriteConvergenceCsv(std::ostream& out, const SweepConfig& config,
                         std::span<const SweepPoint> points);
void WriteTimingCsv(std::ostream& out, std::span<const SweepPoint> points);
void WriteTimingCdfCsv(std::ostream& out, std::span<const SweepPoint> points);

std::string FormatDouble(double v);

}  // namespace fairpark

#endif  // FAIRPARK_EXPERIMENTS_H_
