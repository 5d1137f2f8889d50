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

#ifndef CALPARITY_METRICS_HPP_
#define CALPARITY_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "calparity/dataset.hpp"

namespace calparity {

/// Position of a classifier in the generalized false-positive /
/// false-negative plane.
struct RatePoint {
  double fp = 0.0;  // E[h(x) | y = 0]
  double fn = 0.0;  // E[1 - h(x) | y = 1]

  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

struct Binning {
  enum class Kind { kExactUnique, kFixedWidth };

  Kind kind = Kind::kExactUnique;
  std::size_t bins = 0;  // only used by kFixedWidth

  static Binning exact_unique() { return {}; }
  static Binning fixed_width(std::size_t b) { return {Kind::kFixedWidth, b}; }
};

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean_score = 0.0;
  double positive_fraction = 0.0;
  double weight = 0.0;
};

struct CalibrationReport {
  double gap = 0.0;
  std::vector<double> bin_edges;
  std::vector<CalibrationBin> bins;  // non-empty bins only, in score order
};

/// Probability mass placed on one score value, with the part of that mass
/// that carries label 1. Lets randomized classifiers be evaluated exactly
/// without sampling.
struct ScoreAtom {
  double score = 0.0;
  double weight = 0.0;
  double positive_weight = 0.0;
};

double generalized_fp(std::span<const Sample> samples);
double generalized_fn(std::span<const Sample> samples);
double generalized_fp(const GroupData& g);
double generalized_fn(const GroupData& g);
RatePoint rate_point(const GroupData& g);

/// Weighted-average deviation between the positive fraction and the mean
/// score, summed over bins. In exact-unique mode every distinct score value
/// is its own bin, which is the exact calibration gap of the empirical
/// distribution.
CalibrationReport calibration_gap(const GroupData& g, Binning binning = Binning::exact_unique());
CalibrationReport calibration_gap(std::span<const ScoreAtom> atoms,
                                  Binning binning = Binning::exact_unique());

/// Rates predicted for a perfectly calibrated classifier from the raw
/// moments: ((E[h] - E[h^2]) / (1 - mu), (E[h] - E[h^2]) / mu).
RatePoint analytic_rates(const GroupData& g);

/// |mu * fn - (1 - mu) * fp|; at most twice the calibration gap.
double linearity_residual(const GroupData& g);

}  // namespace calparity

#endif  // CALPARITY_METRICS_HPP_
