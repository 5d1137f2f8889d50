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

#ifndef CALPARITY_EO_HPP_
#define CALPARITY_EO_HPP_

#include <array>
#include <string_view>
#include <vector>

#include "calparity/dataset.hpp"
#include "calparity/metrics.hpp"

namespace calparity {

/// Scores at or above this value count as positive predictions.
inline constexpr double kDecisionThreshold = 0.5;

/// Flip probabilities of one group: a prediction below the threshold is
/// replaced by 1 - s with probability n2p, one at or above it with
/// probability p2n.
struct FlipRates {
  double n2p = 0.0;
  double p2n = 0.0;
};

struct FlipPlan {
  FlipRates group1;
  FlipRates group2;
};

/// Expected rates of the flipped classifier, by transforming every score to
/// its expected value (1 - q) s + q (1 - s).
RatePoint derived_rates(const GroupData& g, double q_n2p, double q_p2n);

/// L(h) = Pr[h >= 0.5 | y = 0] + Pr[h < 0.5 | y = 1] of the flipped
/// classifier, with the flip coins integrated out.
double thresholded_loss(const GroupData& g, double q_n2p, double q_p2n);

/// Coefficients of the rates and the loss as affine functions of (n2p, p2n):
/// value = constant + d_n2p * n2p + d_p2n * p2n.
struct AffineForm {
  double constant = 0.0;
  double d_n2p = 0.0;
  double d_p2n = 0.0;

  double at(double n2p, double p2n) const noexcept { return constant + d_n2p * n2p + d_p2n * p2n; }
};

struct FlipModel {
  AffineForm fp;
  AffineForm fn;
  AffineForm loss;
};

FlipModel flip_model(const GroupData& g);

enum class LpStatus { kOptimal, kInfeasible };

std::string_view to_string(LpStatus s) noexcept;

struct EOSolution {
  FlipPlan plan;
  RatePoint rates1;
  RatePoint rates2;
  double objective = 0.0;
  LpStatus status = LpStatus::kInfeasible;
};

/// Minimizes L(h1~) + L(h2~) over the four flip probabilities subject to
/// fp1 = fp2, fn1 = fn2 and the unit box.
///
/// The problem has four variables and two equality rows, so every vertex of
/// the feasible polytope fixes some variables at 0 or 1 and solves the
/// equalities uniquely for the rest. All 3^4 fixed/free assignments are
/// enumerated; ties on the objective go to the plan with the fewest flips.
EOSolution solve_eo(const GroupData& g1, const GroupData& g2);

/// Exact distribution of the randomized flipped classifier.
std::vector<ScoreAtom> flipped_atoms(const GroupData& g, const FlipRates& q);

/// Exact-unique calibration gap of the flipped classifier.
double eo_calibration_damage(const GroupData& g, const FlipRates& q);

/// The group with every score replaced by its expected flipped value.
GroupData expected_flipped_scores(const GroupData& g, const FlipRates& q);

}  // namespace calparity

#endif  // CALPARITY_EO_HPP_
