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

#include "calparity/calib_parity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calparity/error.hpp"
#include "calparity/rng.hpp"

namespace calparity {

std::string_view to_string(FeasibilityReason r) noexcept {
  switch (r) {
    case FeasibilityReason::kOk:
      return "ok";
    case FeasibilityReason::kCostOrderViolated:
      return "cost_order_violated";
    case FeasibilityReason::kExceedsTrivial:
      return "exceeds_trivial";
  }
  return "unknown";
}

FeasibilityVerdict feasibility(double g1_cost, double g2_cost, double trivial2_cost) {
  require(g1_cost >= 0.0 && g2_cost >= 0.0 && trivial2_cost >= 0.0,
          "costs must be non-negative");
  FeasibilityVerdict v{false, g1_cost, g2_cost, trivial2_cost, FeasibilityReason::kOk};
  if (g1_cost < g2_cost) {
    v.reason = FeasibilityReason::kCostOrderViolated;
  } else if (g1_cost > trivial2_cost) {
    v.reason = FeasibilityReason::kExceedsTrivial;
  } else {
    v.feasible = true;
  }
  return v;
}

double compute_alpha(double g1_cost, double g2_cost, double trivial2_cost) {
  const auto v = feasibility(g1_cost, g2_cost, trivial2_cost);
  if (!v.feasible) {
    fail(ErrorKind::kInfeasible,
         "no interpolation matches the costs: " + std::string(to_string(v.reason)));
  }
  if (!(trivial2_cost > g2_cost)) {
    fail(ErrorKind::kDegenerate, "already trivial: group 2 is at its trivial cost, alpha undefined");
  }
  const double alpha = (g1_cost - g2_cost) / (trivial2_cost - g2_cost);
  return std::min(alpha, 1.0);
}

namespace {

void validate(const InterpolationPlan& plan) {
  require(plan.alpha >= 0.0 && plan.alpha <= 1.0, "alpha must lie in [0,1]");
  require(plan.trivial_output > 0.0 && plan.trivial_output < 1.0,
          "trivial output must lie strictly between 0 and 1");
}

}  // namespace

Withholding withhold(const GroupData& g, const InterpolationPlan& plan) {
  validate(plan);
  CounterRng rng(plan.seed);
  std::vector<std::uint8_t> mask(g.size(), 0);
  std::vector<Sample> out(g.samples().begin(), g.samples().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.bernoulli(plan.alpha)) {
      mask[i] = 1;
      out[i].score = plan.trivial_output;
    }
  }
  return {GroupData(g.id(), std::move(out)), std::move(mask)};
}

GroupData apply_monte_carlo(const GroupData& g, const InterpolationPlan& plan) {
  return withhold(g, plan).realized;
}

MixtureGroup make_mixture(GroupData g, const InterpolationPlan& plan) {
  validate(plan);
  MixtureGroup m{std::move(g), plan, std::nullopt};
  if (plan.mode == MixtureMode::kMonteCarlo) m.realized = withhold(m.base, plan);
  return m;
}

std::vector<ScoreAtom> mixture_atoms(const GroupData& g, const InterpolationPlan& plan) {
  validate(plan);
  const double keep = 1.0 - plan.alpha;
  std::vector<ScoreAtom> atoms;
  atoms.reserve(2 * g.size());
  for (const auto& s : g.samples()) {
    const double y = static_cast<double>(s.label);
    if (keep > 0.0) atoms.push_back({s.score, keep, keep * y});
    if (plan.alpha > 0.0) atoms.push_back({plan.trivial_output, plan.alpha, plan.alpha * y});
  }
  return atoms;
}

RatePoint mixture_rate_point(const GroupData& g, const InterpolationPlan& plan) {
  validate(plan);
  const double keep = 1.0 - plan.alpha;
  double neg_sum = 0.0;
  double pos_sum = 0.0;
  for (const auto& s : g.samples()) {
    const double expected = keep * s.score + plan.alpha * plan.trivial_output;
    if (s.label == 0) {
      neg_sum += expected;
    } else {
      pos_sum += 1.0 - expected;
    }
  }
  return {neg_sum / static_cast<double>(g.negatives()),
          pos_sum / static_cast<double>(g.positives())};
}

double mixture_cost(const GroupData& g, const InterpolationPlan& plan, const CostSpec& spec) {
  return cost(mixture_rate_point(g, plan), spec);
}

double mixture_calibration_gap(const GroupData& g, const InterpolationPlan& plan) {
  const auto atoms = mixture_atoms(g, plan);
  return calibration_gap(atoms, Binning::exact_unique()).gap;
}

AuditVerdict optimality_audit(const RatePoint& candidate, const RatePoint& reference, double mu,
                              double delta_cal, const CostSpec& spec, double candidate_gap) {
  require(delta_cal >= 0.0, "delta_cal must be non-negative");
  require(mu > 0.0 && mu < 1.0, "base rate must lie strictly between 0 and 1");
  AuditVerdict v;
  v.fp_margin = 4.0 * delta_cal / (1.0 - mu);
  v.fn_margin = 4.0 * delta_cal / mu;
  v.fp_beyond_margin = candidate.fp < reference.fp - v.fp_margin;
  v.fn_beyond_margin = candidate.fn < reference.fn - v.fn_margin;
  v.candidate_within_calibration = candidate_gap <= delta_cal;
  v.cost_not_lower = cost(candidate, spec) >= cost(reference, spec);
  v.flagged = (v.fp_beyond_margin || v.fn_beyond_margin) && v.candidate_within_calibration &&
              v.cost_not_lower;
  return v;
}

}  // namespace calparity
