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

#include "fairpark/experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fairpark/baselines.h"
#include "fairpark/dcp.h"
#include "fairpark/instance.h"

namespace fairpark {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

std::vector<ExperimentRecord> RunSlot(const SweepConfig& config,
                                      std::size_t n_cars, std::size_t n_slots,
                                      int t) {
  const std::uint64_t seed = SlotSeed(config.seed, t);
  const Instance instance =
      GenerateUniform(n_cars, n_slots, config.lo, config.hi, seed);

  std::vector<ExperimentRecord> out;
  for (Method method : config.methods) {
    ExperimentRecord rec;
    rec.n_cars = n_cars;
    rec.n_slots = n_slots;
    rec.t = t;
    rec.method = method;
    switch (method) {
      case Method::kDcp: {
        DcpConfig dcp;
        dcp.max_iterations = config.iterations;
        dcp.alpha_min = config.alpha_min;
        dcp.alpha_max = config.alpha_max;
        dcp.seed = SplitMix64(seed);
        dcp.trace =
            config.record_traces ? TraceLevel::kSummary : TraceLevel::kNone;
        const auto start = Clock::now();
        DcpResult r = SolveDcp(instance, dcp);
        rec.wall_time_s = Seconds(Clock::now() - start);
        rec.objective = r.objective;
        rec.feasible_before_repair = !r.repaired;
        rec.first_feasible_iteration = r.first_feasible_iteration;
        rec.iterations = r.iterations_run;
        for (const auto& it : r.dual_trace) rec.p_cur_trace.push_back(it.p_cur);
        break;
      }
      case Method::kGreedy: {
        const auto start = Clock::now();
        const Assignment a = GreedyAssign(instance);
        rec.wall_time_s = Seconds(Clock::now() - start);
        rec.objective = MinMaxCost(instance, a);
        break;
      }
      case Method::kExact: {
        const auto start = Clock::now();
        const SolvedAssignment s = ExactBottleneck(instance);
        rec.wall_time_s = Seconds(Clock::now() - start);
        rec.objective = s.optimum;
        break;
      }
    }
    out.push_back(std::move(rec));
  }

  const auto exact = std::find_if(out.begin(), out.end(), [](const auto& r) {
    return r.method == Method::kExact;
  });
  if (exact != out.end()) {
    for (const auto& r : out) {
      if (r.objective < exact->objective) {
        throw std::logic_error(std::string("exact objective exceeds ") +
                               ToString(r.method) + " at slot " +
                               std::to_string(t + 1));
      }
    }
  }
  return out;
}

std::string Percent(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::optional<double> AverageOf(const SweepPoint& point, Method method) {
  const auto records = point.Of(method);
  if (records.empty()) return std::nullopt;
  return AverageFinalObjective(records);
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

}  // namespace

const char* ToString(Method method) {
  switch (method) {
    case Method::kDcp:
      return "dcp";
    case Method::kGreedy:
      return "greedy";
    case Method::kExact:
      return "exact";
  }
  return "unknown";
}

Method ParseMethod(const std::string& name) {
  if (name == "dcp") return Method::kDcp;
  if (name == "greedy") return Method::kGreedy;
  if (name == "exact") return Method::kExact;
  throw std::invalid_argument("unknown method: " + name);
}

void CheckSweepConfig(const SweepConfig& config) {
  if (config.n_cars_list.empty() || config.n_slots_list.empty()) {
    throw std::invalid_argument("sweep needs at least one N and one M");
  }
  for (std::size_t n : config.n_cars_list) {
    for (std::size_t m : config.n_slots_list) {
      if (n < 1 || n > m) {
        throw std::invalid_argument("sweep pair N = " + std::to_string(n) +
                                    ", M = " + std::to_string(m) +
                                    " violates 1 <= N <= M");
      }
    }
  }
  if (config.time_slots < 1) throw std::invalid_argument("T must be >= 1");
  if (config.iterations < 1) throw std::invalid_argument("K must be >= 1");
  if (!(config.lo >= 0.0) || !(config.lo < config.hi)) {
    throw std::invalid_argument("need 0 <= lo < hi");
  }
  if (config.methods.empty()) throw std::invalid_argument("no methods given");
  if (config.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t SlotSeed(std::uint64_t master_seed, int t) {
  // SplitMix64 adds the golden-ratio increment itself, so this is element
  // t + 1 of the SplitMix64 stream started at master_seed.
  return SplitMix64(master_seed +
                    static_cast<std::uint64_t>(t) * 0x9E3779B97F4A7C15ULL);
}

std::vector<ExperimentRecord> SweepPoint::Of(Method method) const {
  std::vector<ExperimentRecord> out;
  for (const auto& r : records) {
    if (r.method == method) out.push_back(r);
  }
  return out;
}

SweepPoint RunPoint(const SweepConfig& config, std::size_t n_cars,
                    std::size_t n_slots) {
  const int slots = config.time_slots;
  std::vector<std::vector<ExperimentRecord>> per_slot(slots);
  const int workers = std::min(config.threads, slots);
  if (workers <= 1) {
    for (int t = 0; t < slots; ++t) {
      per_slot[t] = RunSlot(config, n_cars, n_slots, t);
    }
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int t = next++; t < slots; t = next++) {
          try {
            per_slot[t] = RunSlot(config, n_cars, n_slots, t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  SweepPoint point{n_cars, n_slots, {}};
  for (auto& recs : per_slot) {
    for (auto& r : recs) point.records.push_back(std::move(r));
  }
  return point;
}

std::vector<SweepPoint> RunSweep(const SweepConfig& config) {
  CheckSweepConfig(config);
  std::vector<SweepPoint> points;
  for (std::size_t m : config.n_slots_list) {
    for (std::size_t n : config.n_cars_list) {
      points.push_back(RunPoint(config, n, m));
    }
  }
  return points;
}

double DegreeOfFeasibility(std::span<const ExperimentRecord> records, int k) {
  std::size_t total = 0;
  std::size_t feasible = 0;
  for (const auto& r : records) {
    if (r.method != Method::kDcp) continue;
    ++total;
    if (k == r.iterations) {
      feasible += r.feasible_before_repair ? 1 : 0;
    } else if (k >= 1 && static_cast<std::size_t>(k) <= r.p_cur_trace.size()) {
      feasible += std::isfinite(r.p_cur_trace[k - 1]) ? 1 : 0;
    } else {
      throw std::invalid_argument("no feasibility data at iteration " +
                                  std::to_string(k));
    }
  }
  if (total == 0) throw std::invalid_argument("no DCP records");
  return 100.0 * static_cast<double>(feasible) / static_cast<double>(total);
}

ObjectiveCurve AverageObjectiveCurve(std::span<const ExperimentRecord> records,
                                     int k) {
  if (k < 1) throw std::invalid_argument("curve length must be >= 1");
  ObjectiveCurve curve;
  curve.p_ave.assign(k, 0.0);
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.method != Method::kDcp) continue;
    if (r.p_cur_trace.size() < static_cast<std::size_t>(k)) {
      throw std::invalid_argument("p_cur traces missing or too short");
    }
    ++count;
    for (int i = 0; i < k; ++i) curve.p_ave[i] += r.p_cur_trace[i];
  }
  if (count == 0) throw std::invalid_argument("no DCP records");
  for (int i = 0; i < k; ++i) {
    curve.p_ave[i] /= static_cast<double>(count);
    if (!curve.first_all_finite_k && std::isfinite(curve.p_ave[i])) {
      curve.first_all_finite_k = i + 1;
    }
  }
  return curve;
}

double AverageFinalObjective(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to average");
  double sum = 0.0;
  for (const auto& r : records) sum += r.objective;
  return sum / static_cast<double>(records.size());
}

std::vector<std::pair<double, double>> TimingCdf(
    std::span<const ExperimentRecord> records, Method method) {
  std::vector<double> times;
  for (const auto& r : records) {
    if (r.method == method) times.push_back(r.wall_time_s);
  }
  if (times.empty()) throw std::invalid_argument("no timing records");
  std::sort(times.begin(), times.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    cdf.emplace_back(times[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

double MeanWallTime(std::span<const ExperimentRecord> records, Method method) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.method != method) continue;
    sum += r.wall_time_s;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("no timing records");
  return sum / static_cast<double>(n);
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void WriteRecordsCsv(std::ostream& out,
                     std::span<const ExperimentRecord> records) {
  out << "t,method,objective,feasible_before_repair,first_feasible_iter,"
         "wall_time_s\n";
  for (const auto& r : records) {
    out << r.t + 1 << ',' << ToString(r.method) << ','
        << FormatDouble(r.objective) << ','
        << (r.feasible_before_repair ? 1 : 0) << ',';
    if (r.first_feasible_iteration) out << *r.first_feasible_iteration;
    out << ',' << FormatDouble(r.wall_time_s) << '\n';
  }
}

void WriteTracesCsv(std::ostream& out,
                    std::span<const ExperimentRecord> records) {
  std::size_t k = 0;
  for (const auto& r : records) k = std::max(k, r.p_cur_trace.size());
  out << 't';
  for (std::size_t i = 1; i <= k; ++i) out << ",p_cur_" << i;
  out << '\n';
  for (const auto& r : records) {
    if (r.method != Method::kDcp) continue;
    out << r.t + 1;
    for (double p : r.p_cur_trace) out << ',' << FormatDouble(p);
    out << '\n';
  }
}

void WriteDfCsv(std::ostream& out, const SweepConfig& config,
                std::span<const SweepPoint> points) {
  out << "n_cars,n_slots,time_slots,iterations,df_percent\n";
  for (const auto& p : points) {
    out << p.n_cars << ',' << p.n_slots << ',' << config.time_slots << ','
        << config.iterations << ','
        << Percent(DegreeOfFeasibility(p.records, config.iterations)) << '\n';
  }
}

void WriteFinalCsv(std::ostream& out, const SweepConfig& config,
                   std::span<const SweepPoint> points) {
  out << "n_cars,n_slots,time_slots,iterations,dcp_avg,greedy_avg,exact_avg,"
         "dcp_gap_pct,greedy_gap_pct,df_percent\n";
  for (const auto& p : points) {
    const auto dcp = AverageOf(p, Method::kDcp);
    const auto greedy = AverageOf(p, Method::kGreedy);
    const auto exact = AverageOf(p, Method::kExact);
    auto gap = [&](const std::optional<double>& v) {
      if (!v || !exact || *exact == 0.0) return std::string();
      return Percent(100.0 * (*v - *exact) / *exact);
    };
    out << p.n_cars << ',' << p.n_slots << ',' << config.time_slots << ','
        << config.iterations << ',' << Optional(dcp) << ',' << Optional(greedy)
        << ',' << Optional(exact) << ',' << gap(dcp) << ',' << gap(greedy)
        << ',';
    if (dcp) out << Percent(DegreeOfFeasibility(p.records, config.iterations));
    out << '\n';
  }
}

void WriteConvergenceCsv(std::ostream& out, const SweepConfig& config,
                         std::span<const SweepPoint> points) {
  out << "n_cars,n_slots,k,p_ave_dcp,greedy_avg,exact_avg,first_all_finite_k\n";
  for (const auto& p : points) {
    const ObjectiveCurve curve =
        AverageObjectiveCurve(p.records, config.iterations);
    const auto greedy = AverageOf(p, Method::kGreedy);
    const auto exact = AverageOf(p, Method::kExact);
    if (!curve.first_all_finite_k) {
      // No k at which every slot is feasible: one row marks the point.
      out << p.n_cars << ',' << p.n_slots << ",,inf," << Optional(greedy) << ','
          << Optional(exact) << ",\n";
      continue;
    }
    for (int k = *curve.first_all_finite_k; k <= config.iterations; ++k) {
      out << p.n_cars << ',' << p.n_slots << ',' << k << ','
          << FormatDouble(curve.p_ave[k - 1]) << ',' << Optional(greedy) << ','
          << Optional(exact) << ',' << *curve.first_all_finite_k << '\n';
    }
  }
}

void WriteTimingCsv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "n_cars,n_slots,method,mean_wall_time_s,median_wall_time_s,"
         "max_wall_time_s\n";
  for (const auto& p : points) {
    for (Method m : {Method::kDcp, Method::kGreedy, Method::kExact}) {
      const auto recs = p.Of(m);
      if (recs.empty()) continue;
      const auto cdf = TimingCdf(recs, m);
      out << p.n_cars << ',' << p.n_slots << ',' << ToString(m) << ','
          << FormatDouble(MeanWallTime(recs, m)) << ','
          << FormatDouble(cdf[(cdf.size() - 1) / 2].first) << ','
          << FormatDouble(cdf.back().first) << '\n';
    }
  }
}

void WriteTimingCdfCsv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "n_cars,n_slots,method,wall_time_s,cdf\n";
  for (const auto& p : points) {
    for (Method m : {Method::kDcp, Method::kGreedy, Method::kExact}) {
      const auto recs = p.Of(m);
      if (recs.empty()) continue;
      for (const auto& [time, frac] : TimingCdf(recs, m)) {
        out << p.n_cars << ',' << p.n_slots << ',' << ToString(m) << ','
            << FormatDouble(time) << ',' << FormatDouble(frac) << '\n';
      }
    }
  }
}

}  // namespace fairpark
