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

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpark/baselines.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fairpark {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::StartsWith;

// SplitMix64 as a stateful stream, written from the published reference.
class SplitMixStream {
 public:
  explicit SplitMixStream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

SweepConfig Small() {
  SweepConfig config;
  config.n_cars_list = {2, 4};
  config.n_slots_list = {5};
  config.time_slots = 6;
  config.iterations = 40;
  config.seed = 3;
  return config;
}

ExperimentRecord DcpRecord(int t, double objective, std::vector<double> trace) {
  ExperimentRecord r;
  r.t = t;
  r.method = Method::kDcp;
  r.objective = objective;
  r.iterations = static_cast<int>(trace.size());
  r.feasible_before_repair = std::isfinite(trace.back());
  r.p_cur_trace = std::move(trace);
  return r;
}

TEST(SeedTest, SplitMixReferenceValues) {
  EXPECT_EQ(SplitMix64(0), 0xE220A8397B1DCDAFULL);
  SplitMixStream stream(1234567);
  for (int t = 0; t < 20; ++t) {
    EXPECT_EQ(SlotSeed(1234567, t), stream.Next()) << "t = " << t;
  }
}

TEST(MethodTest, NamesRoundTrip) {
  for (Method m : {Method::kDcp, Method::kGreedy, Method::kExact}) {
    EXPECT_EQ(ParseMethod(ToString(m)), m);
  }
  EXPECT_THROW(ParseMethod("cplex"), std::invalid_argument);
}

TEST(SweepConfigTest, Validation) {
  SweepConfig config = Small();
  EXPECT_NO_THROW(CheckSweepConfig(config));
  config.n_cars_list = {6};
  EXPECT_THROW(CheckSweepConfig(config), std::invalid_argument);
  config = Small();
  config.time_slots = 0;
  EXPECT_THROW(CheckSweepConfig(config), std::invalid_argument);
  config = Small();
  config.methods.clear();
  EXPECT_THROW(CheckSweepConfig(config), std::invalid_argument);
  config = Small();
  config.lo = 5;
  config.hi = 5;
  EXPECT_THROW(RunSweep(config), std::invalid_argument);
}

TEST(RunSweepTest, RecordsAreOrderedAndComplete) {
  const auto points = RunSweep(Small());
  ASSERT_EQ(points.size(), 2);
  EXPECT_EQ(points[0].n_cars, 2);
  EXPECT_EQ(points[1].n_cars, 4);
  for (const auto& p : points) {
    ASSERT_EQ(p.records.size(), 18);
    for (std::size_t r = 0; r < p.records.size(); ++r) {
      EXPECT_EQ(p.records[r].t, static_cast<int>(r / 3));
    }
    const auto dcp = p.Of(Method::kDcp);
    const auto exact = p.Of(Method::kExact);
    const auto greedy = p.Of(Method::kGreedy);
    for (std::size_t t = 0; t < exact.size(); ++t) {
      EXPECT_LE(exact[t].objective, dcp[t].objective);
      EXPECT_LE(exact[t].objective, greedy[t].objective);
      EXPECT_EQ(dcp[t].iterations, 40);
    }
  }
}

TEST(RunSweepTest, AnySlotCanBeRerunAlone) {
  const SweepConfig config = Small();
  const SweepPoint point = RunPoint(config, 4, 5);
  const auto exact = point.Of(Method::kExact);
  for (int t : {0, 4}) {
    const Instance inst =
        GenerateUniform(4, 5, config.lo, config.hi, SlotSeed(config.seed, t));
    EXPECT_EQ(ExactBottleneck(inst).optimum, exact[t].objective);
    DcpConfig dcp;
    dcp.max_iterations = config.iterations;
    dcp.seed = SplitMix64(SlotSeed(config.seed, t));
    EXPECT_EQ(SolveDcp(inst, dcp).objective,
              point.Of(Method::kDcp)[t].objective);
  }
}

TEST(RunSweepTest, ThreadCountDoesNotChangeResults) {
  SweepConfig config = Small();
  config.record_traces = true;
  const auto one = RunSweep(config);
  config.threads = 3;
  const auto three = RunSweep(config);
  std::ostringstream a, b;
  WriteFinalCsv(a, config, one);
  WriteConvergenceCsv(a, config, one);
  WriteFinalCsv(b, config, three);
  WriteConvergenceCsv(b, config, three);
  EXPECT_EQ(a.str(), b.str());
}

TEST(MetricsTest, DegreeOfFeasibility) {
  const std::vector<ExperimentRecord> records = {
      DcpRecord(0, 5, {kInfinity, 5, 5}),
      DcpRecord(1, 7, {kInfinity, kInfinity, kInfinity}),
      DcpRecord(2, 3, {4, 3, 3}), DcpRecord(3, 3, {kInfinity, kInfinity, 3})};
  EXPECT_DOUBLE_EQ(DegreeOfFeasibility(records, 3), 75.0);
  EXPECT_DOUBLE_EQ(DegreeOfFeasibility(records, 2), 50.0);
  EXPECT_DOUBLE_EQ(DegreeOfFeasibility(records, 1), 25.0);
  EXPECT_THROW(DegreeOfFeasibility(records, 4), std::invalid_argument);
  EXPECT_THROW(DegreeOfFeasibility({}, 1), std::invalid_argument);
}

TEST(MetricsTest, ObjectiveCurve) {
  const std::vector<ExperimentRecord> single = {
      DcpRecord(0, 2, {kInfinity, 4, 2})};
  const ObjectiveCurve one = AverageObjectiveCurve(single, 3);
  EXPECT_THAT(one.p_ave, ElementsAre(kInfinity, 4.0, 2.0));
  EXPECT_EQ(one.first_all_finite_k, 2);

  const std::vector<ExperimentRecord> two = {
      DcpRecord(0, 2, {kInfinity, 4, 2}),
      DcpRecord(1, 5, {kInfinity, kInfinity, 6})};
  const ObjectiveCurve curve = AverageObjectiveCurve(two, 3);
  EXPECT_EQ(curve.p_ave[1], kInfinity);
  EXPECT_DOUBLE_EQ(curve.p_ave[2], 4.0);
  EXPECT_EQ(curve.first_all_finite_k, 3);
  EXPECT_THROW(AverageObjectiveCurve(two, 4), std::invalid_argument);
}

TEST(MetricsTest, FinalObjectiveAndTiming) {
  std::vector<ExperimentRecord> records = {DcpRecord(0, 3, {3})};
  EXPECT_EQ(AverageFinalObjective(records), 3.0);
  records.push_back(DcpRecord(1, 5, {5}));
  EXPECT_EQ(AverageFinalObjective(records), 4.0);
  EXPECT_THROW(AverageFinalObjective({}), std::invalid_argument);

  records[0].wall_time_s = 0.2;
  records[1].wall_time_s = 0.1;
  const auto cdf = TimingCdf(records, Method::kDcp);
  ASSERT_EQ(cdf.size(), 2);
  EXPECT_EQ(cdf[0].first, 0.1);
  EXPECT_EQ(cdf[0].second, 0.5);
  EXPECT_EQ(cdf[1].second, 1.0);
  EXPECT_DOUBLE_EQ(MeanWallTime(records, Method::kDcp), 0.15);
  EXPECT_THROW(TimingCdf(records, Method::kExact), std::invalid_argument);
}

TEST(CsvTest, HeadersAndFormatting) {
  EXPECT_EQ(FormatDouble(kInfinity), "inf");
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  SweepConfig config = Small();
  config.n_cars_list = {2};
  config.time_slots = 2;
  config.record_traces = true;
  const auto points = RunSweep(config);

  std::ostringstream records;
  WriteRecordsCsv(records, points[0].records);
  EXPECT_THAT(records.str(),
              StartsWith("t,method,objective,feasible_before_repair,"
                         "first_feasible_iter,wall_time_s\n1,dcp,"));
  std::ostringstream traces;
  WriteTracesCsv(traces, points[0].Of(Method::kDcp));
  EXPECT_THAT(traces.str(), StartsWith("t,p_cur_1,p_cur_2,"));
  std::ostringstream df;
  WriteDfCsv(df, config, points);
  EXPECT_THAT(df.str(), StartsWith("n_cars,n_slots,time_slots,iterations,"
                                   "df_percent\n2,5,2,40,"));
  std::ostringstream final_csv;
  WriteFinalCsv(final_csv, config, points);
  EXPECT_THAT(final_csv.str(), HasSubstr("greedy_gap_pct"));
  std::ostringstream timing;
  WriteTimingCsv(timing, points);
  EXPECT_THAT(timing.str(), HasSubstr("2,5,exact,"));
}

TEST(CsvTest, RerunsAreByteIdentical) {
  SweepConfig config = Small();
  config.record_traces = true;
  std::ostringstream a, b;
  for (auto* out : {&a, &b}) {
    const auto points = RunSweep(config);
    WriteDfCsv(*out, config, points);
    WriteFinalCsv(*out, config, points);
    WriteConvergenceCsv(*out, config, points);
  }
  EXPECT_EQ(a.str(), b.str());
}

}  // namespace
}  // namespace fairpark
