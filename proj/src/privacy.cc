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

#include "fairpark/privacy.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fairpark {
namespace {

constexpr double kCollinearRatio = 1e-9;

struct Frame {
  Eigen::Vector2d center;
  double spread = 1.0;

  Eigen::Vector2d ToLocal(const Point2& p) const {
    return (Eigen::Vector2d(p.x, p.y) - center) / spread;
  }
  Point2 ToWorld(const Eigen::Vector2d& p) const {
    const Eigen::Vector2d w = p * spread + center;
    return {w.x(), w.y()};
  }
};

double MaxMisfit(const Eigen::Vector2d& p,
                 const std::vector<Eigen::Vector2d>& anchors,
                 const std::vector<double>& radii) {
  double worst = 0.0;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    worst = std::max(worst, std::abs((p - anchors[k]).norm() - radii[k]));
  }
  return worst;
}

// Anchors on one line: the along-line coordinate is fixed by the circle
// differences, the offset from the line only up to sign.
TrilaterationResult SolveCollinear(const std::vector<Eigen::Vector2d>& anchors,
                                   const std::vector<double>& radii,
                                   const Eigen::Vector2d& direction,
                                   const Frame& frame, double tolerance) {
  const Eigen::Vector2d normal(-direction.y(), direction.x());
  std::vector<double> t(anchors.size());
  double offset = 0.0;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    t[k] = anchors[k].dot(direction);
    offset += anchors[k].dot(normal);
  }
  offset /= static_cast<double>(anchors.size());

  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 1; k < anchors.size(); ++k) {
    const double a = 2.0 * (t[k] - t[0]);
    const double b =
        radii[0] * radii[0] - radii[k] * radii[k] + t[k] * t[k] - t[0] * t[0];
    num += a * b;
    den += a * a;
  }
  const double along = num / den;
  double h2 = 0.0;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    h2 += radii[k] * radii[k] - (along - t[k]) * (along - t[k]);
  }
  h2 /= static_cast<double>(anchors.size());
  const double h = std::sqrt(std::max(0.0, h2));

  TrilaterationResult result;
  const Eigen::Vector2d plus = along * direction + (offset + h) * normal;
  const Eigen::Vector2d minus = along * direction + (offset - h) * normal;
  result.residual = MaxMisfit(plus, anchors, radii);
  if (result.residual >= tolerance) {
    result.status = TrilaterationStatus::kInconsistent;
  } else if (h <= tolerance) {
    result.status = TrilaterationStatus::kPoint;
    result.point = frame.ToWorld(along * direction + offset * normal);
  } else {
    result.status = TrilaterationStatus::kAmbiguous;
    result.candidates = {frame.ToWorld(plus), frame.ToWorld(minus)};
  }
  return result;
}

// 0, 1 or 2 intersection points of two circles.
std::vector<Point2> IntersectCircles(const Point2& c0, double r0,
                                     const Point2& c1, double r1,
                                     double tolerance) {
  const double dx = c1.x - c0.x;
  const double dy = c1.y - c0.y;
  const double d = std::hypot(dx, dy);
  if (d == 0.0 || d > r0 + r1 + tolerance ||
      d < std::abs(r0 - r1) - tolerance) {
    return {};
  }
  const double a = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, r0 * r0 - a * a));
  const double mx = c0.x + a * dx / d;
  const double my = c0.y + a * dy / d;
  if (h <= tolerance) return {{mx, my}};
  return {{mx - h * dy / d, my + h * dx / d},
          {mx + h * dy / d, my - h * dx / d}};
}

class TranscriptRecorder : public ExchangeObserver {
 public:
  explicit TranscriptRecorder(CarIndex car) { transcript_.car = car; }

  void OnExchange(int k, CarIndex car, double lambda,
                  std::span<const double> mu,
                  const CarReport& report) override {
    if (car != transcript_.car) return;
    transcript_.entries.push_back({k, lambda,
                                   std::vector<double>(mu.begin(), mu.end()),
                                   report.u, report.slot});
  }

  AdversaryTranscript Take() && { return std::move(transcript_); }

 private:
  AdversaryTranscript transcript_;
};

}  // namespace

const char* ToString(TrilaterationStatus status) {
  switch (status) {
    case TrilaterationStatus::kPoint:
      return "point";
    case TrilaterationStatus::kAmbiguous:
      return "ambiguous";
    case TrilaterationStatus::kInconsistent:
      return "inconsistent";
  }
  return "unknown";
}

TrilaterationResult Trilaterate(
    const std::vector<RangeObservation>& observations,
    const std::vector<Point2>& slot_positions, double tolerance) {
  std::map<SlotIndex, double> by_slot;
  bool contradictory = false;
  for (const auto& obs : observations) {
    if (obs.slot >= slot_positions.size()) {
      throw std::out_of_range("observation refers to an unknown slot");
    }
    if (!std::isfinite(obs.distance) || obs.distance < 0.0) {
      throw std::invalid_argument("observed distance must be finite and >= 0");
    }
    const auto [it, inserted] = by_slot.emplace(obs.slot, obs.distance);
    if (!inserted && it->second != obs.distance) contradictory = true;
  }
  if (by_slot.size() < 3) {
    throw std::invalid_argument("trilateration needs three distinct slots");
  }

  Frame frame;
  frame.center.setZero();
  for (const auto& [slot, d] : by_slot) {
    frame.center +=
        Eigen::Vector2d(slot_positions[slot].x, slot_positions[slot].y);
  }
  frame.center /= static_cast<double>(by_slot.size());
  double spread = 0.0;
  for (const auto& [slot, d] : by_slot) {
    spread = std::max(spread, (Eigen::Vector2d(slot_positions[slot].x,
                                               slot_positions[slot].y) -
                               frame.center)
                                  .norm());
  }
  frame.spread = spread > 0.0 ? spread : 1.0;

  std::vector<Eigen::Vector2d> anchors;
  std::vector<double> radii;
  for (const auto& [slot, d] : by_slot) {
    anchors.push_back(frame.ToLocal(slot_positions[slot]));
    radii.push_back(d / frame.spread);
  }

  TrilaterationResult result;
  if (contradictory) {
    result.status = TrilaterationStatus::kInconsistent;
    return result;
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(anchors.size()) - 1;
  Eigen::MatrixXd a(rows, 2);
  Eigen::VectorXd b(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const auto& s = anchors[k + 1];
    a.row(k) = 2.0 * (s - anchors[0]).transpose();
    b(k) = radii[0] * radii[0] - radii[k + 1] * radii[k + 1] + s.squaredNorm() -
           anchors[0].squaredNorm();
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto sigma = svd.singularValues();
  if (sigma(0) == 0.0) {
    // Every anchor at the same spot: a whole circle fits or nothing does.
    const bool same_radius = std::all_of(
        radii.begin(), radii.end(),
        [&](double r) { return std::abs(r - radii[0]) < tolerance; });
    result.status = same_radius ? TrilaterationStatus::kAmbiguous
                                : TrilaterationStatus::kInconsistent;
    return result;
  }
  if (sigma(1) <= kCollinearRatio * sigma(0)) {
    return SolveCollinear(anchors, radii, svd.matrixV().col(0).normalized(),
                          frame, tolerance);
  }

  const Eigen::Vector2d p = a.colPivHouseholderQr().solve(b);
  result.residual = MaxMisfit(p, anchors, radii);
  if (result.residual < tolerance) {
    result.status = TrilaterationStatus::kPoint;
    result.point = frame.ToWorld(p);
  } else {
    result.status = TrilaterationStatus::kInconsistent;
  }
  return result;
}

std::vector<Point2> CircleSweepCandidates(
    const std::vector<DistanceOnlyObservation>& observations,
    const std::vector<Point2>& slot_positions, double tolerance) {
  const std::size_t m = slot_positions.size();
  if (m > kCircleSweepMaxSlots) {
    throw std::invalid_argument("circle sweep limited to 12 slots");
  }
  double scale = 0.0;
  for (const auto& p : slot_positions) {
    scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  }
  const double tol = tolerance * std::max(scale, 1.0);

  std::vector<Point2> found;
  auto remember = [&](const Point2& p) {
    for (const auto& q : found) {
      if (Distance(p, q) <= 10.0 * tol) return;
    }
    found.push_back(p);
  };

  const std::size_t iters = observations.size();
  for (std::size_t l = 0; l < iters; ++l) {
    for (std::size_t q = l + 1; q < iters; ++q) {
      for (SlotIndex a = 0; a < m; ++a) {
        if (a == observations[l].excluded_slot) continue;
        for (SlotIndex b = 0; b < m; ++b) {
          if (b == a || b == observations[q].excluded_slot) continue;
          for (const Point2& pt : IntersectCircles(
                   slot_positions[a], observations[l].distance,
                   slot_positions[b], observations[q].distance, tol)) {
            bool third = false;
            for (std::size_t r = 0; r < iters && !third; ++r) {
              if (r == l || r == q) continue;
              for (SlotIndex c = 0; c < m && !third; ++c) {
                if (c == a || c == b || c == observations[r].excluded_slot) {
                  continue;
                }
                third = std::abs(Distance(pt, slot_positions[c]) -
                                 observations[r].distance) <= tol;
              }
            }
            if (third) remember(pt);
          }
        }
      }
    }
  }
  return found;
}

TranscriptScan ScanTranscript(const AdversaryTranscript& transcript,
                              const Instance& instance, double distance_scale) {
  if (!(distance_scale > 0.0)) {
    throw std::invalid_argument("distance_scale must be positive");
  }
  auto collect = [&](CarIndex car, std::vector<double>& into) {
    for (double d : instance.row(car)) {
      into.push_back(d);
      into.push_back(d / distance_scale);
    }
  };
  std::vector<double> own;
  collect(transcript.car, own);
  std::sort(own.begin(), own.end());
  std::vector<double> foreign;
  for (CarIndex m = 0; m < instance.num_cars(); ++m) {
    if (m != transcript.car) collect(m, foreign);
  }
  std::sort(foreign.begin(), foreign.end());
  auto is_foreign = [&](double v) {
    v = std::abs(v);
    return std::binary_search(foreign.begin(), foreign.end(), v) &&
           !std::binary_search(own.begin(), own.end(), v);
  };

  TranscriptScan scan;
  for (const auto& e : transcript.entries) {
    scan.values_scanned += 2 + e.mu_received.size();
    if (e.lambda_received != 0.0 && e.lambda_received != 1.0 &&
        is_foreign(e.lambda_received)) {
      ++scan.lambda_matches;
    }
    for (double mu : e.mu_received) {
      if (mu != 0.0 && is_foreign(mu)) ++scan.mu_matches;
    }
    if (is_foreign(e.u_sent)) ++scan.sent_matches;
  }
  return scan;
}

std::size_t CountStepSizeExposures(const AdversaryTranscript& transcript,
                                   double alpha) {
  std::size_t exposures = 0;
  for (std::size_t e = 0; e + 1 < transcript.entries.size(); ++e) {
    const auto& now = transcript.entries[e];
    const auto& next = transcript.entries[e + 1];
    const double step = alpha / static_cast<double>(now.k);
    bool exposed = false;
    for (std::size_t j = 0; j < now.mu_received.size() && !exposed; ++j) {
      if (now.mu_received[j] != 0.0 || next.mu_received[j] <= 0.0) continue;
      const double ratio = next.mu_received[j] / step;
      exposed = std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;
    }
    if (exposed) ++exposures;
  }
  return exposures;
}

AuditResult AuditTranscript(const Instance& instance, const DcpConfig& config,
                            CarIndex adversary_car) {
  if (adversary_car >= instance.num_cars()) {
    throw std::out_of_range("adversary car out of range");
  }
  TranscriptRecorder recorder(adversary_car);
  DcpCoordinator coordinator(instance, config, &recorder);
  while (coordinator.Step()) {
  }
  const double alpha = coordinator.alpha();
  const double scale = coordinator.distance_scale();
  AuditResult audit;
  audit.dcp = std::move(coordinator).Finish();
  audit.transcript = std::move(recorder).Take();
  if (audit.transcript.entries.size() !=
      static_cast<std::size_t>(audit.dcp.iterations_run)) {
    throw std::logic_error("transcript length differs from iterations run");
  }
  audit.scan = ScanTranscript(audit.transcript, instance, scale);
  if (audit.scan.mu_matches + audit.scan.sent_matches > 0) {
    throw std::logic_error("transcript carries another car's raw distance");
  }
  audit.step_size_exposures = CountStepSizeExposures(audit.transcript, alpha);
  return audit;
}

LeakLedger LedgerCounts(int k) {
  if (k < 1) throw std::invalid_argument("ledger iteration must be >= 1");
  LeakLedger ledger;
  ledger.k = k;
  const auto s = [](int v) { return std::to_string(v); };
  for (int m = 1; m <= k; ++m) {
    ledger.unknown_names.push_back("lambda_1^(" + s(m) + ")");
  }
  for (int m = 1; m < k; ++m) ledger.unknown_names.push_back("beta_" + s(m));
  for (int m = 1; m < k; ++m) ledger.unknown_names.push_back("alpha_" + s(m));
  for (int m = 1; m < k; ++m) {
    ledger.unknown_names.push_back("d_{1,j_1^" + s(m) + "}");
  }
  // (m.1): lambda_1^(m) + lambda_2^(m) = 1. (m.2), (m.3): the projected
  // updates of lambda_1 and lambda_2 from iteration m - 1, sharing the
  // projection offset beta_{m-1} and step alpha_{m-1}.
  for (int m = 1; m <= k; ++m) {
    ledger.equation_names.push_back("(" + s(m) + ".1)");
    if (m >= 2) {
      ledger.equation_names.push_back("(" + s(m) + ".2)");
      ledger.equation_names.push_back("(" + s(m) + ".3)");
    }
  }
  if (ledger.unknowns() - ledger.equations() != k - 1) {
    throw std::logic_error("ledger construction broke U - E = k - 1");
  }
  return ledger;
}

}  // namespace fairpark
