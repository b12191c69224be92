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

// Privacy analysis of the DCP exchange.
//
// If one car learned (slot, distance) pairs of another car for three distinct
// slots, it could locate that car's destination by trilateration. Under DCP a
// car only ever sees its own lambda and the slot prices mu, and the relations
// it can write down between those observations have more unknowns than
// equations. This header provides the attack, a recorder for what one car
// sees during a run, and the constructive unknowns/equations count for the
// two-car case.

#ifndef FAIRPARK_PRIVACY_H_
#define FAIRPARK_PRIVACY_H_

#include <cstddef>
#include <string>
#include <vector>

#include "fairpark/dcp.h"
#include "fairpark/instance.h"

namespace fairpark {

struct RangeObservation {
  SlotIndex slot = 0;
  double distance = 0.0;
};

enum class TrilaterationStatus { kPoint, kAmbiguous, kInconsistent };

const char* ToString(TrilaterationStatus status);

struct TrilaterationResult {
  TrilaterationStatus status = TrilaterationStatus::kInconsistent;
  Point2 point;                    // kPoint only
  std::vector<Point2> candidates;  // kAmbiguous: the mirror pair
  double residual = 0.0;           // max circle misfit, normalized units
};

inline constexpr double kTrilaterationTolerance = 1e-6;

// Locates the common point of the circles (slot_positions[slot], distance).
// Coordinates are centered on the anchors and divided by their spread; the
// residual and `tolerance` are in those normalized units. Collinear anchors
// give kAmbiguous unless the point lies on their line. Throws
// std::invalid_argument with fewer than three distinct slots.
TrilaterationResult Trilaterate(
    const std::vector<RangeObservation>& observations,
    const std::vector<Point2>& slot_positions,
    double tolerance = kTrilaterationTolerance);

// Exhaustive variant for an adversary that only knows the distance values,
// not which slot each belongs to: every value is a circle around every slot
// except the adversary's own pick that iteration. Returns the points where
// circles from three different iterations meet. Combinatorial; M <= 12.
struct DistanceOnlyObservation {
  double distance = 0.0;
  SlotIndex excluded_slot = 0;
};

inline constexpr std::size_t kCircleSweepMaxSlots = 12;

std::vector<Point2> CircleSweepCandidates(
    const std::vector<DistanceOnlyObservation>& observations,
    const std::vector<Point2>& slot_positions, double tolerance = 1e-6);

// What one car receives and sends in one iteration; values are exactly those
// crossing the car <-> coordinator boundary (normalized distance units).
struct TranscriptEntry {
  int k = 0;
  double lambda_received = 0.0;
  std::vector<double> mu_received;
  double u_sent = 0.0;
  SlotIndex slot_sent = 0;
};

struct AdversaryTranscript {
  CarIndex car = 0;
  std::vector<TranscriptEntry> entries;
};

// Exact matches between the magnitude of values in a transcript and the other
// cars' distances, both raw and divided by `distance_scale` (the unit the
// cars compute in). Values that also occur in the observing car's own row are
// skipped, as are the boundary values lambda in {0, 1} and mu = 0 that the
// projections produce regardless of the data.
struct TranscriptScan {
  std::size_t values_scanned = 0;
  std::size_t lambda_matches = 0;
  std::size_t mu_matches = 0;
  std::size_t sent_matches = 0;

  std::size_t foreign_matches() const {
    return lambda_matches + mu_matches + sent_matches;
  }
};

TranscriptScan ScanTranscript(const AdversaryTranscript& transcript,
                              const Instance& instance,
                              double distance_scale = 1.0);

struct AuditResult {
  AdversaryTranscript transcript;
  TranscriptScan scan;
  DcpResult dcp;
  // See CountStepSizeExposures.
  std::size_t step_size_exposures = 0;
};

// Runs SolveDcp while recording the view of `adversary_car`. Throws
// std::logic_error if the transcript holds another car's raw distance outside
// the lambda channel.
AuditResult AuditTranscript(const Instance& instance, const DcpConfig& config,
                            CarIndex adversary_car);

// Number of iterations k whose step size alpha_k appears verbatim as an
// integer multiple in the mu broadcast of iteration k + 1. A slot first
// over-assigned by c cars in iteration k has mu^(k+1) = alpha_k (c - 1).
// Needs the coordinator's private alpha, so it is an auditor-side check.
std::size_t CountStepSizeExposures(const AdversaryTranscript& transcript,
                                   double alpha);

// Unknowns and equations the adversary (car 2) can write about car 1 after k
// iterations of a two-car run, assuming interior simplex projections.
struct LeakLedger {
  int k = 0;
  std::vector<std::string> unknown_names;
  std::vector<std::string> equation_names;

  int unknowns() const { return static_cast<int>(unknown_names.size()); }
  int equations() const { return static_cast<int>(equation_names.size()); }
};

LeakLedger LedgerCounts(int k);

}  // namespace fairpark

#endif  // FAIRPARK_PRIVACY_H_
