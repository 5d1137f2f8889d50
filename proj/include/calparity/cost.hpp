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

#ifndef CALPARITY_COST_HPP_
#define CALPARITY_COST_HPP_

#include <optional>

#include "calparity/metrics.hpp"

namespace calparity {

/// Linear group cost g(h) = a * fp(h) + b * fn(h) with a, b >= 0, not both 0.
class CostSpec {
 public:
  CostSpec(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  friend bool operator==(const CostSpec&, const CostSpec&) = default;

 private:
  double a_;
  double b_;
};

/// Costs of the two groups in one equal-cost constraint g1(h1) = g2(h2).
struct CostPair {
  CostSpec first;
  CostSpec second;
};

struct Segment {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool is_point() const noexcept { return x0 == x1 && y0 == y1; }
};

double cost(const RatePoint& point, const CostSpec& spec) noexcept;

/// Cost of the constant predictor h(x) = mu, whose rate point is (mu, 1 - mu).
/// No perfectly calibrated classifier of a group with base rate mu costs more.
double trivial_cost(double mu, const CostSpec& spec);

/// Coefficients of the per-sample cost r_fp * h(x) * (1 - y) + r_fn * (1 - h(x)) * y
/// after taking expectations over a group with base rate mu.
CostSpec weighted_cost_spec(double r_fp, double r_fn, double mu);

/// Intersection of {a * fp + b * fn = c} with the unit square. Endpoints are
/// ordered by increasing fp; a single touching corner is returned as a
/// degenerate segment.
std::optional<Segment> level_curve(const CostSpec& spec, double c);

/// The set of perfectly calibrated classifiers of a group: the segment from the
/// perfect classifier (0,0) to the trivial one (mu, 1 - mu).
Segment calibrated_line(double mu);

/// The unique point of calibrated_line(mu) whose cost is c, if any.
std::optional<RatePoint> calibrated_point_at_cost(double mu, const CostSpec& spec, double c);

}  // namespace calparity

#endif  // CALPARITY_COST_HPP_
