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

// Problem data for min-max fair car-to-slot assignment: an N x M matrix of
// non-negative distances d(i, j) from the destination of car i to free slot j,
// with N <= M. Indices are 0-based in memory and 1-based in every file format.

#ifndef FAIRPARK_INSTANCE_H_
#define FAIRPARK_INSTANCE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fairpark {

using CarIndex = std::size_t;
using SlotIndex = std::size_t;

// Immutable after construction; safe to share between threads.
class Instance {
 public:
  // `distances` is row-major, one row of `n_slots` entries per car. Throws
  // std::invalid_argument if any invariant is violated.
  Instance(std::size_t n_cars, std::size_t n_slots,
           std::vector<double> distances);

  static Instance FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t num_cars() const { return n_cars_; }
  std::size_t num_slots() const { return n_slots_; }

  double distance(CarIndex car, SlotIndex slot) const {
    return distances_[car * n_slots_ + slot];
  }
  std::span<const double> row(CarIndex car) const {
    return {distances_.data() + car * n_slots_, n_slots_};
  }
  const std::vector<double>& data() const { return distances_; }

  double max_distance() const;

  // Same instance with every distance multiplied by `factor` (> 0).
  Instance Scaled(double factor) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::size_t n_cars_;
  std::size_t n_slots_;
  std::vector<double> distances_;
};

// A car -> slot map. Possibly conflicting: feasible iff all entries distinct.
struct Assignment {
  std::vector<SlotIndex> slot_of;

  std::size_t size() const { return slot_of.size(); }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

double Distance(const Point2& a, const Point2& b);

struct GeometricInstance {
  std::vector<Point2> slot_positions;
  std::vector<Point2> destinations;

  // d(i, j) = |destinations[i] - slot_positions[j]|.
  Instance ToInstance() const;
};

// Every entry i.i.d. uniform on [lo, hi]; deterministic given `seed`.
Instance GenerateUniform(std::size_t n_cars, std::size_t n_slots, double lo,
                         double hi, std::uint64_t seed);

// Slots and destinations uniform in [0, area_side]^2.
GeometricInstance GenerateGeometric(std::size_t n_cars, std::size_t n_slots,
                                    double area_side, std::uint64_t seed);

// max_i d(i, slot_of[i]). Defined for conflicting assignments too.
double MinMaxCost(const Instance& instance, const Assignment& assignment);

// Sum of d(i, slot_of[i]).
double TotalCost(const Instance& instance, const Assignment& assignment);

// Number of cars sitting in slots that hold two or more cars.
std::size_t ConflictCount(const Assignment& assignment, std::size_t n_slots);

inline bool IsFeasible(const Assignment& assignment, std::size_t n_slots) {
  return ConflictCount(assignment, n_slots) == 0;
}

// Throws std::out_of_range unless every entry is a slot of `instance` and
// there is exactly one entry per car.
void CheckAssignment(const Instance& instance, const Assignment& assignment);

// Checks raw matrix data against the Instance invariants. Returns one message
// per violation, empty if valid. Rows and columns in messages are 1-based.
std::vector<std::string> Validate(const std::vector<std::vector<double>>& rows);

// JSON: {"n_cars": N, "n_slots": M, "distances": [[...], ...]}. Doubles are
// written with round-trip precision.
Instance ReadInstance(const std::filesystem::path& path);
void WriteInstance(const Instance& instance, const std::filesystem::path& path);

// Adds "slot_positions" and "destinations" as [x, y] pairs.
GeometricInstance ReadGeometricInstance(const std::filesystem::path& path);
void WriteGeometricInstance(const GeometricInstance& instance,
                            const std::filesystem::path& path);

}  // namespace fairpark

#endif  // FAIRPARK_INSTANCE_H_
