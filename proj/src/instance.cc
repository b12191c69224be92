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

#include "fairpark/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fairpark {
namespace {

using nlohmann::json;

std::string JoinErrors(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += e;
  }
  return out;
}

std::vector<std::vector<double>> ToRows(const Instance& instance) {
  std::vector<std::vector<double>> rows(instance.num_cars());
  for (CarIndex i = 0; i < instance.num_cars(); ++i) {
    const auto r = instance.row(i);
    rows[i].assign(r.begin(), r.end());
  }
  return rows;
}

json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed instance file " + path.string() + ": " +
                             e.what());
  }
}

void WriteJson(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Instance InstanceFromJson(const json& j) {
  if (!j.is_object()) throw std::runtime_error("instance must be an object");
  for (const char* key : {"n_cars", "n_slots", "distances"}) {
    if (!j.contains(key)) {
      throw std::runtime_error(std::string("missing field \"") + key + "\"");
    }
  }
  std::vector<std::vector<double>> rows;
  try {
    const auto n_cars = j.at("n_cars").get<std::int64_t>();
    const auto n_slots = j.at("n_slots").get<std::int64_t>();
    const json& d = j.at("distances");
    if (!d.is_array())
      throw std::runtime_error("\"distances\" must be an array");
    for (const json& r : d) {
      std::vector<double> row;
      for (const json& v : r) {
        // nlohmann maps NaN to null on output; treat it as NaN on input.
        row.push_back(v.is_null() ? std::nan("") : v.get<double>());
      }
      rows.push_back(std::move(row));
    }
    if (n_cars < 1 || n_slots < 1) {
      throw std::runtime_error("n_cars and n_slots must be positive");
    }
    if (static_cast<std::size_t>(n_cars) != rows.size()) {
      throw std::runtime_error("n_cars = " + std::to_string(n_cars) +
                               " but distances has " +
                               std::to_string(rows.size()) + " rows");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != static_cast<std::size_t>(n_slots)) {
        throw std::runtime_error(
            "row " + std::to_string(i + 1) + " has " +
            std::to_string(rows[i].size()) +
            " entries, expected n_slots = " + std::to_string(n_slots));
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed instance: ") + e.what());
  }
  const auto errors = Validate(rows);
  if (!errors.empty()) throw std::runtime_error(JoinErrors(errors));
  return Instance::FromRows(rows);
}

json InstanceToJson(const Instance& instance) {
  json j;
  j["n_cars"] = instance.num_cars();
  j["n_slots"] = instance.num_slots();
  j["distances"] = ToRows(instance);
  return j;
}

json PointsToJson(const std::vector<Point2>& points) {
  json arr = json::array();
  for (const auto& p : points) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Point2> PointsFromJson(const json& arr, const char* name) {
  if (!arr.is_array()) {
    throw std::runtime_error(std::string("\"") + name + "\" must be an array");
  }
  std::vector<Point2> points;
  for (const json& p : arr) {
    if (!p.is_array() || p.size() != 2) {
      throw std::runtime_error(std::string("\"") + name +
                               "\" entries must be [x, y] pairs");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return points;
}

}  // namespace

Instance::Instance(std::size_t n_cars, std::size_t n_slots,
                   std::vector<double> distances)
    : n_cars_(n_cars), n_slots_(n_slots), distances_(std::move(distances)) {
  if (n_cars_ < 1 || n_slots_ < 1) {
    throw std::invalid_argument("instance needs at least one car and slot");
  }
  if (n_cars_ > n_slots_) {
    throw std::invalid_argument(
        "dimension error: n_cars = " + std::to_string(n_cars_) +
        " exceeds n_slots = " + std::to_string(n_slots_));
  }
  if (distances_.size() != n_cars_ * n_slots_) {
    throw std::invalid_argument("distance matrix has wrong size");
  }
  for (std::size_t k = 0; k < distances_.size(); ++k) {
    const double d = distances_[k];
    if (!std::isfinite(d) || d < 0.0) {
      std::ostringstream msg;
      msg << "distance at row " << k / n_slots_ + 1 << ", column "
          << k % n_slots_ + 1 << " must be finite and >= 0, got " << d;
      throw std::invalid_argument(msg.str());
    }
  }
}

Instance Instance::FromRows(const std::vector<std::vector<double>>& rows) {
  const auto errors = Validate(rows);
  if (!errors.empty()) throw std::invalid_argument(JoinErrors(errors));
  std::vector<double> flat;
  flat.reserve(rows.size() * rows.front().size());
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return Instance(rows.size(), rows.front().size(), std::move(flat));
}

double Instance::max_distance() const {
  return *std::max_element(distances_.begin(), distances_.end());
}

Instance Instance::Scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("scale factor must be finite and positive");
  }
  std::vector<double> scaled(distances_);
  for (double& d : scaled) d *= factor;
  return Instance(n_cars_, n_slots_, std::move(scaled));
}

double Distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Instance GeometricInstance::ToInstance() const {
  std::vector<double> d;
  d.reserve(destinations.size() * slot_positions.size());
  for (const auto& dest : destinations) {
    for (const auto& slot : slot_positions) d.push_back(Distance(dest, slot));
  }
  return Instance(destinations.size(), slot_positions.size(), std::move(d));
}

Instance GenerateUniform(std::size_t n_cars, std::size_t n_slots, double lo,
                         double hi, std::uint64_t seed) {
  if (n_cars < 1 || n_cars > n_slots) {
    throw std::invalid_argument("dimension error: need 1 <= n_cars <= n_slots");
  }
  if (!(lo >= 0.0) || !(lo < hi) || !std::isfinite(hi)) {
    throw std::invalid_argument("invalid distance range: need 0 <= lo < hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> d(n_cars * n_slots);
  for (double& v : d) v = dist(rng);
  return Instance(n_cars, n_slots, std::move(d));
}

GeometricInstance GenerateGeometric(std::size_t n_cars, std::size_t n_slots,
                                    double area_side, std::uint64_t seed) {
  if (n_cars < 1 || n_cars > n_slots) {
    throw std::invalid_argument("dimension error: need 1 <= n_cars <= n_slots");
  }
  if (!(area_side > 0.0) || !std::isfinite(area_side)) {
    throw std::invalid_argument("area_side must be finite and positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, area_side);
  GeometricInstance g;
  g.slot_positions.resize(n_slots);
  g.destinations.resize(n_cars);
  for (auto& p : g.slot_positions) p = {coord(rng), coord(rng)};
  for (auto& p : g.destinations) p = {coord(rng), coord(rng)};
  return g;
}

void CheckAssignment(const Instance& instance, const Assignment& assignment) {
  if (assignment.size() != instance.num_cars()) {
    throw std::out_of_range(
        "assignment has " + std::to_string(assignment.size()) +
        " entries for " + std::to_string(instance.num_cars()) + " cars");
  }
  for (CarIndex i = 0; i < assignment.size(); ++i) {
    if (assignment.slot_of[i] >= instance.num_slots()) {
      throw std::out_of_range("car " + std::to_string(i + 1) +
                              " assigned to nonexistent slot " +
                              std::to_string(assignment.slot_of[i] + 1));
    }
  }
}

double MinMaxCost(const Instance& instance, const Assignment& assignment) {
  CheckAssignment(instance, assignment);
  double worst = 0.0;
  for (CarIndex i = 0; i < assignment.size(); ++i) {
    worst = std::max(worst, instance.distance(i, assignment.slot_of[i]));
  }
  return worst;
}

double TotalCost(const Instance& instance, const Assignment& assignment) {
  CheckAssignment(instance, assignment);
  double total = 0.0;
  for (CarIndex i = 0; i < assignment.size(); ++i) {
    total += instance.distance(i, assignment.slot_of[i]);
  }
  return total;
}

std::size_t ConflictCount(const Assignment& assignment, std::size_t n_slots) {
  std::vector<std::size_t> load(n_slots, 0);
  for (SlotIndex j : assignment.slot_of) {
    if (j >= n_slots) throw std::out_of_range("slot index out of range");
    ++load[j];
  }
  std::size_t conflicts = 0;
  for (std::size_t c : load) {
    if (c >= 2) conflicts += c;
  }
  return conflicts;
}

std::vector<std::string> Validate(
    const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> errors;
  if (rows.empty()) {
    errors.push_back("instance has no cars");
    return errors;
  }
  const std::size_t n_slots = rows.front().size();
  if (n_slots == 0) errors.push_back("instance has no slots");
  if (rows.size() > n_slots) {
    errors.push_back(
        "dimension error: n_cars = " + std::to_string(rows.size()) +
        " exceeds n_slots = " + std::to_string(n_slots));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n_slots) {
      errors.push_back("row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(n_slots));
      continue;
    }
    for (std::size_t j = 0; j < n_slots; ++j) {
      const double d = rows[i][j];
      if (std::isnan(d)) {
        errors.push_back("NaN distance at row " + std::to_string(i + 1) +
                         ", column " + std::to_string(j + 1));
      } else if (!std::isfinite(d)) {
        errors.push_back("infinite distance at row " + std::to_string(i + 1) +
                         ", column " + std::to_string(j + 1));
      } else if (d < 0.0) {
        std::ostringstream msg;
        msg << "negative distance " << d << " at row " << i + 1 << ", column "
            << j + 1;
        errors.push_back(msg.str());
      }
    }
  }
  return errors;
}

Instance ReadInstance(const std::filesystem::path& path) {
  return InstanceFromJson(ReadJson(path));
}

void WriteInstance(const Instance& instance,
                   const std::filesystem::path& path) {
  WriteJson(InstanceToJson(instance), path);
}

GeometricInstance ReadGeometricInstance(const std::filesystem::path& path) {
  const json j = ReadJson(path);
  const Instance declared = InstanceFromJson(j);
  if (!j.contains("slot_positions") || !j.contains("destinations")) {
    throw std::runtime_error(
        "geometric instance needs \"slot_positions\" and \"destinations\"");
  }
  GeometricInstance g;
  g.slot_positions = PointsFromJson(j.at("slot_positions"), "slot_positions");
  g.destinations = PointsFromJson(j.at("destinations"), "destinations");
  if (g.slot_positions.size() != declared.num_slots() ||
      g.destinations.size() != declared.num_cars()) {
    throw std::runtime_error("coordinate lists disagree with n_cars/n_slots");
  }
  return g;
}

void WriteGeometricInstance(const GeometricInstance& instance,
                            const std::filesystem::path& path) {
  json j = InstanceToJson(instance.ToInstance());
  j["slot_positions"] = PointsToJson(instance.slot_positions);
  j["destinations"] = PointsToJson(instance.destinations);
  WriteJson(j, path);
}

}  // namespace fairpark
