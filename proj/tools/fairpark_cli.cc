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

// Command-line front end: instance generation, single solves, the benchmark
// sweeps and the privacy audit. Slot and car indices are 1-based on output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairpark/baselines.h"
#include "fairpark/dcp.h"
#include "fairpark/experiments.h"
#include "fairpark/instance.h"
#include "fairpark/privacy.h"
#include "json.hpp"

namespace {

using fairpark::Instance;
namespace fs = std::filesystem;

struct SweepFlags {
  std::vector<std::size_t> cars;
  std::vector<std::size_t> slots;
  int time_slots = 200;
  int iterations = 300;
  double lo = 0.0;
  double hi = 1000.0;
  std::uint64_t seed = 1;
  std::vector<std::string> methods = {"dcp", "greedy", "exact"};
  double alpha_min = fairpark::kDefaultAlphaMin;
  double alpha_max = fairpark::kDefaultAlphaMax;
  int threads = 1;
  std::string out_dir = ".";
};

void AddSweepFlags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--cars,-N", f.cars, "Car counts N")
      ->required()
      ->delimiter(',');
  cmd->add_option("--slots,-M", f.slots, "Slot counts M")
      ->required()
      ->delimiter(',');
  cmd->add_option("--time-slots,-T", f.time_slots, "Instances per point")
      ->capture_default_str();
  cmd->add_option("--iterations,-K", f.iterations, "DCP iterations")
      ->capture_default_str();
  cmd->add_option("--lo", f.lo, "Smallest distance")->capture_default_str();
  cmd->add_option("--hi", f.hi, "Largest distance")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--methods", f.methods, "Subset of dcp,greedy,exact")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--alpha-min", f.alpha_min)->capture_default_str();
  cmd->add_option("--alpha-max", f.alpha_max)->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads over time slots")
      ->capture_default_str();
  cmd->add_option("--out", f.out_dir, "Output directory")
      ->capture_default_str();
}

fairpark::SweepConfig ToSweepConfig(const SweepFlags& f) {
  fairpark::SweepConfig c;
  c.n_cars_list = f.cars;
  c.n_slots_list = f.slots;
  c.time_slots = f.time_slots;
  c.iterations = f.iterations;
  c.lo = f.lo;
  c.hi = f.hi;
  c.seed = f.seed;
  c.methods.clear();
  for (const auto& m : f.methods) c.methods.push_back(fairpark::ParseMethod(m));
  c.alpha_min = f.alpha_min;
  c.alpha_max = f.alpha_max;
  c.threads = f.threads;
  return c;
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string PointTag(const fairpark::SweepPoint& p) {
  return "N" + std::to_string(p.n_cars) + "_M" + std::to_string(p.n_slots);
}

void WritePerPoint(const fs::path& dir,
                   const std::vector<fairpark::SweepPoint>& points,
                   bool traces) {
  for (const auto& p : points) {
    auto rec = OpenOut(dir / ("records_" + PointTag(p) + ".csv"));
    fairpark::WriteRecordsCsv(rec, p.records);
    if (traces) {
      auto tr = OpenOut(dir / ("traces_" + PointTag(p) + ".csv"));
      fairpark::WriteTracesCsv(tr, p.Of(fairpark::Method::kDcp));
    }
  }
}

// Writes `name` in `dir` and echoes it to stdout.
template <typename Writer>
void WriteAggregate(const fs::path& dir, const std::string& name,
                    Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  auto out = OpenOut(dir / name);
  out << buf.str();
  std::cout << buf.str();
}

void PrintAssignment(const Instance& instance, const fairpark::Assignment& a) {
  std::cout << "assignment (car -> slot, distance):\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::cout << "  " << i + 1 << " -> " << a.slot_of[i] + 1 << "  "
              << fairpark::FormatDouble(instance.distance(i, a.slot_of[i]))
              << '\n';
  }
}

int RunSolve(const std::string& method, const std::string& path,
             const fairpark::DcpConfig& config, bool as_json) {
  const Instance instance = fairpark::ReadInstance(path);
  fairpark::Assignment assignment;
  nlohmann::json extra = nlohmann::json::object();
  if (method == "dcp") {
    const auto r = fairpark::SolveDcp(instance, config);
    assignment = r.assignment;
    extra["iterations_run"] = r.iterations_run;
    extra["repaired"] = r.repaired;
    extra["first_feasible_iteration"] =
        r.first_feasible_iteration ? nlohmann::json(*r.first_feasible_iteration)
                                   : nlohmann::json(nullptr);
  } else if (method == "greedy") {
    assignment = fairpark::GreedyAssign(instance);
  } else if (method == "exact") {
    assignment = fairpark::ExactBottleneck(instance).assignment;
  } else if (method == "brute") {
    assignment = fairpark::BruteForce(instance).assignment;
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  const double objective = fairpark::MinMaxCost(instance, assignment);
  if (as_json) {
    nlohmann::json j;
    j["method"] = method;
    j["objective"] = objective;
    j["total_distance"] = fairpark::TotalCost(instance, assignment);
    std::vector<std::size_t> slots;
    for (auto s : assignment.slot_of) slots.push_back(s + 1);
    j["assignment"] = slots;
    j.update(extra);
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "method: " << method << '\n'
            << "objective (max distance): " << fairpark::FormatDouble(objective)
            << '\n'
            << "total distance: "
            << fairpark::FormatDouble(fairpark::TotalCost(instance, assignment))
            << '\n';
  for (const auto& [key, value] : extra.items()) {
    std::cout << key << ": " << value.dump() << '\n';
  }
  PrintAssignment(instance, assignment);
  return 0;
}

int RunAudit(const std::string& instance_path, std::size_t adversary,
             const fairpark::DcpConfig& config, int ledger_k,
             const std::string& transcript_json) {
  const Instance instance = instance_path.empty()
                                ? Instance::FromRows({{1.0, 4.0}, {4.0, 5.0}})
                                : fairpark::ReadInstance(instance_path);
  if (adversary < 1 || adversary > instance.num_cars()) {
    throw std::invalid_argument("adversary must be a car index in 1..N");
  }

  std::cout << "Unknowns vs equations seen by car 2 about car 1 (2-car run)\n";
  std::printf("%6s %10s %10s %6s\n", "k", "unknowns", "equations", "gap");
  for (int k = 1; k <= ledger_k; ++k) {
    const auto ledger = fairpark::LedgerCounts(k);
    std::printf("%6d %10d %10d %6d\n", k, ledger.unknowns(), ledger.equations(),
                ledger.unknowns() - ledger.equations());
  }

  const auto audit = fairpark::AuditTranscript(instance, config, adversary - 1);
  const auto& scan = audit.scan;
  std::cout << "\nTranscript of car " << adversary << ": "
            << audit.transcript.entries.size() << " iterations, "
            << scan.values_scanned << " values\n"
            << "  fields per iteration: lambda_received, mu_received, u_sent, "
               "slot_sent\n"
            << "  foreign distances in mu/sent values: "
            << scan.mu_matches + scan.sent_matches << '\n'
            << "  foreign distances in lambda values: " << scan.lambda_matches
            << '\n'
            << "  iterations whose step size shows up in the next mu: "
            << audit.step_size_exposures << '\n'
            << "verdict: "
            << (scan.foreign_matches() == 0 ? "no foreign distance observed"
                                            : "foreign distance observed")
            << '\n';

  if (!transcript_json.empty()) {
    nlohmann::json j;
    j["car"] = adversary;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : audit.transcript.entries) {
      j["entries"].push_back({{"k", e.k},
                              {"lambda_received", e.lambda_received},
                              {"mu_received", e.mu_received},
                              {"u_sent", e.u_sent},
                              {"slot_sent", e.slot_sent + 1}});
    }
    auto out = OpenOut(transcript_json);
    out << j.dump(1) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Min-max fair parking assignment toolkit"};
  app.set_config("--config", "", "Key-value (TOML/INI) config file");
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance as JSON");
  std::size_t gen_cars = 4, gen_slots = 20;
  double gen_lo = 0.0, gen_hi = 1000.0, gen_area = 1000.0;
  std::uint64_t gen_seed = 1;
  bool gen_geometric = false;
  std::string gen_out;
  gen->add_option("--cars,-N", gen_cars)->capture_default_str();
  gen->add_option("--slots,-M", gen_slots)->capture_default_str();
  gen->add_option("--lo", gen_lo)->capture_default_str();
  gen->add_option("--hi", gen_hi)->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_flag("--geometric", gen_geometric,
                "Points in a square instead of i.i.d. distances");
  gen->add_option("--area", gen_area, "Square side for --geometric")
      ->capture_default_str();
  gen->add_option("--out,-o", gen_out, "Output file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  std::string solve_method = "dcp", solve_instance;
  fairpark::DcpConfig solve_cfg;
  bool solve_json = false;
  solve->add_option("--method", solve_method)
      ->check(CLI::IsMember({"dcp", "greedy", "exact", "brute"}))
      ->capture_default_str();
  solve->add_option("--instance", solve_instance)->required();
  solve->add_option("--k", solve_cfg.max_iterations)->capture_default_str();
  solve->add_option("--alpha-min", solve_cfg.alpha_min)->capture_default_str();
  solve->add_option("--alpha-max", solve_cfg.alpha_max)->capture_default_str();
  solve->add_option("--seed", solve_cfg.seed)->capture_default_str();
  solve->add_flag("--json", solve_json, "Print the result as JSON");

  // sweeps
  SweepFlags df_flags, conv_flags, final_flags, timing_flags;
  auto* sweep_df = app.add_subcommand("sweep-df", "Degree of feasibility");
  AddSweepFlags(sweep_df, df_flags);
  auto* sweep_conv = app.add_subcommand("sweep-convergence",
                                        "Average objective per iteration");
  AddSweepFlags(sweep_conv, conv_flags);
  auto* sweep_final =
      app.add_subcommand("sweep-final", "Average final objective per method");
  AddSweepFlags(sweep_final, final_flags);
  auto* timing = app.add_subcommand("timing", "Solver wall-time CDFs");
  AddSweepFlags(timing, timing_flags);

  // audit
  auto* audit =
      app.add_subcommand("audit", "Privacy ledger and transcript scan");
  std::string audit_instance, audit_json;
  std::size_t audit_adversary = 2;
  int audit_ledger_k = 3;
  fairpark::DcpConfig audit_cfg;
  audit_cfg.max_iterations = 50;
  audit->add_option("--instance", audit_instance,
                    "Instance file (default: the 2x2 example [[1,4],[4,5]])");
  audit->add_option("--adversary", audit_adversary, "Observing car (1-based)")
      ->capture_default_str();
  audit->add_option("--k", audit_cfg.max_iterations)->capture_default_str();
  audit->add_option("--alpha-min", audit_cfg.alpha_min)->capture_default_str();
  audit->add_option("--alpha-max", audit_cfg.alpha_max)->capture_default_str();
  audit->add_option("--seed", audit_cfg.seed)->capture_default_str();
  audit->add_option("--ledger-k", audit_ledger_k, "Ledger rows to print")
      ->capture_default_str();
  audit->add_option("--transcript-json", audit_json, "Dump the transcript");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_geometric) {
        fairpark::WriteGeometricInstance(
            fairpark::GenerateGeometric(gen_cars, gen_slots, gen_area,
                                        gen_seed),
            gen_out);
      } else {
        fairpark::WriteInstance(
            fairpark::GenerateUniform(gen_cars, gen_slots, gen_lo, gen_hi,
                                      gen_seed),
            gen_out);
      }
      return 0;
    }
    if (*solve) {
      return RunSolve(solve_method, solve_instance, solve_cfg, solve_json);
    }
    if (*audit) {
      return RunAudit(audit_instance, audit_adversary, audit_cfg,
                      audit_ledger_k, audit_json);
    }

    SweepFlags* flags = *sweep_df      ? &df_flags
                        : *sweep_conv  ? &conv_flags
                        : *sweep_final ? &final_flags
                                       : &timing_flags;
    fairpark::SweepConfig config = ToSweepConfig(*flags);
    const bool convergence = sweep_conv->parsed();
    config.record_traces = convergence;
    if (*timing) config.threads = 1;
    const fs::path dir = flags->out_dir;
    fs::create_directories(dir);
    const auto points = fairpark::RunSweep(config);
    WritePerPoint(dir, points, convergence);

    if (*sweep_df) {
      WriteAggregate(dir, "df.csv", [&](std::ostream& o) {
        fairpark::WriteDfCsv(o, config, points);
      });
    } else if (convergence) {
      WriteAggregate(dir, "convergence.csv", [&](std::ostream& o) {
        fairpark::WriteConvergenceCsv(o, config, points);
      });
    } else if (*sweep_final) {
      WriteAggregate(dir, "final.csv", [&](std::ostream& o) {
        fairpark::WriteFinalCsv(o, config, points);
      });
    } else {
      WriteAggregate(dir, "timing.csv", [&](std::ostream& o) {
        fairpark::WriteTimingCsv(o, points);
      });
      auto cdf = OpenOut(dir / "timing_cdf.csv");
      fairpark::WriteTimingCdfCsv(cdf, points);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
