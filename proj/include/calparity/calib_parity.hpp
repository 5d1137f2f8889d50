/*
 * Copyright 2026 The calparity Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Equal-cost post-processing of calibrated classifiers by information
// withholding.
//
// Given calibrated h1, h2 with g1(h1) >= g2(h2), the lower-cost group G2 is
// served by the mixture
//
//   h2~(x) = mu2     with probability alpha
//          = h2(x)   with probability 1 - alpha,
//
// whose cost is the linear interpolation (1 - alpha) g2(h2) + alpha g2(h^mu2).
// Choosing alpha = (g1 - g2) / (g2(h^mu2) - g2) matches g1 exactly, which is
// possible iff g2(h2) <= g1(h1) <= g2(h^mu2). The mixture never increases the
// calibration gap: eps(h2~) <= (1 - alpha) eps(h2).

#ifndef CALPARITY_CALIB_PARITY_HPP_
#define CALPARITY_CALIB_PARITY_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "calparity/cost.hpp"
#include "calparity/dataset.hpp"
#include "calparity/metrics.hpp"

namespace calparity {

enum class FeasibilityReason { kOk, kCostOrderViolated, kExceedsTrivial };

std::string_view to_string(FeasibilityReason r) noexcept;

struct FeasibilityVerdict {
  bool feasible = false;
  double g1_cost = 0.0;
  double g2_cost = 0.0;
  double trivial2_cost = 0.0;
  FeasibilityReason reason = FeasibilityReason::kOk;
};

/// feasible iff g2_cost <= g1_cost <= trivial2_cost. An order violation is
/// reported first: the caller is expected to swap group roles.
FeasibilityVerdict feasibility(double g1_cost, double g2_cost, double trivial2_cost);

/// alpha = (g1 - g2) / (trivial2 - g2). Throws kInfeasible for infeasible
/// inputs and kDegenerate when g2 already sits at the trivial cost.
double compute_alpha(double g1_cost, double g2_cost, double trivial2_cost);

enum class MixtureMode { kDeterministic, kMonteCarlo };

struct InterpolationPlan {
  double alpha = 0.0;
  double trivial_output = 0.5;  // mu2
  MixtureMode mode = MixtureMode::kDeterministic;
  std::uint64_t seed = 0;  // kMonteCarlo only
};

/// Result of actually drawing the withholding coins for every sample.
struct Withholding {
  GroupData realized;
  std::vector<std::uint8_t> withheld;  // 1 where the score was replaced by mu2
};

/// Each sample independently keeps its score with probability 1 - alpha or is
/// replaced by plan.trivial_output. Coins come from one CounterRng(plan.seed)
/// stream consumed in sample order; labels are untouched.
Withholding withhold(const GroupData& g, const InterpolationPlan& plan);
GroupData apply_monte_carlo(const GroupData& g, const InterpolationPlan& plan);

/// A group paired with its withholding plan; `realized` is only populated in
/// Monte Carlo mode.
struct MixtureGroup {
  GroupData base;
  InterpolationPlan plan;
  std::optional<Withholding> realized;
};

MixtureGroup make_mixture(GroupData g, const InterpolationPlan& plan);

/// Exact distribution of the randomized classifier: every sample contributes
/// an atom at its own score with weight 1 - alpha and one at mu2 with weight
/// alpha.
std::vector<ScoreAtom> mixture_atoms(const GroupData& g, const InterpolationPlan& plan);

/// Expected rates of the mixture, from per-sample expected outputs.
RatePoint mixture_rate_point(const GroupData& g, const InterpolationPlan& plan);
double mixture_cost(const GroupData& g, const InterpolationPlan& plan, const CostSpec& spec);

/// Exact-unique calibration gap of the mixture distribution. Original mass
/// already sitting at mu2 is pooled with the withheld mass.
double mixture_calibration_gap(const GroupData& g, const InterpolationPlan& plan);

struct AuditVerdict {
  bool flagged = false;
  bool fp_beyond_margin = false;
  bool fn_beyond_margin = false;
  bool candidate_within_calibration = false;
  bool cost_not_lower = false;
  double fp_margin = 0.0;  // 4 delta / (1 - mu)
  double fn_margin = 0.0;  // 4 delta / mu
};

/// Flags a candidate that beats the reference's fp by more than
/// 4 delta / (1 - mu) (or its fn by more than 4 delta / mu) while staying
/// delta-calibrated and costing at least as much. For a delta-calibrated
/// reference that combination cannot occur, so a flag means one of the
/// inputs is misreported.
AuditVerdict optimality_audit(const RatePoint& candidate, const RatePoint& reference, double mu,
                              double delta_cal, const CostSpec& spec, double candidate_gap);

}  // namespace calparity

#endif  // CALPARITY_CALIB_PARITY_HPP_
