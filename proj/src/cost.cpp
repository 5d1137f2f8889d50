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

#include "calparity/cost.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "calparity/error.hpp"

namespace calparity {

namespace {

void require_open_probability(double mu) {
  require(mu > 0.0 && mu < 1.0, "base rate must lie strictly between 0 and 1");
}

}  // namespace

CostSpec::CostSpec(double a, double b) : a_(a), b_(b) {
  require(std::isfinite(a) && std::isfinite(b), "cost coefficients must be finite");
  require(a >= 0.0 && b >= 0.0, "cost coefficients must be non-negative");
  require(a + b > 0.0, "at least one cost coefficient must be nonzero");
}

double cost(const RatePoint& point, const CostSpec& spec) noexcept {
  return spec.a() * point.fp + spec.b() * point.fn;
}

double trivial_cost(double mu, const CostSpec& spec) {
  require_open_probability(mu);
  return cost({mu, 1.0 - mu}, spec);
}

CostSpec weighted_cost_spec(double r_fp, double r_fn, double mu) {
  require(r_fp >= 0.0 && r_fn >= 0.0, "per-sample weights must be non-negative");
  require(r_fp + r_fn > 0.0, "per-sample weights cannot both be zero");
  require_open_probability(mu);
  return CostSpec(r_fp * (1.0 - mu), r_fn * mu);
}

std::optional<Segment> level_curve(const CostSpec& spec, double c) {
  require(c >= 0.0, "cost level must be non-negative");
  const double a = spec.a();
  const double b = spec.b();
  // Slack for boundary hits that miss [0,1] by rounding only.
  constexpr double kSlack = 1e-14;
  auto inside = [](double v) { return v >= -kSlack && v <= 1.0 + kSlack; };
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };

  if (b == 0.0) {
    const double x = c / a;
    if (!inside(x)) return std::nullopt;
    return Segment{clamp01(x), 1.0, clamp01(x), 0.0};
  }
  if (a == 0.0) {
    const double y = c / b;
    if (!inside(y)) return std::nullopt;
    return Segment{0.0, clamp01(y), 1.0, clamp01(y)};
  }

  std::vector<RatePoint> hits;
  auto add = [&](double x, double y) {
    if (inside(x) && inside(y)) hits.push_back({clamp01(x), clamp01(y)});
  };
  add(0.0, c / b);
  add(1.0, (c - a) / b);
  add(c / a, 0.0);
  add((c - b) / a, 1.0);
  if (hits.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(hits.begin(), hits.end(),
                                      [](const RatePoint& p, const RatePoint& q) { return p.fp < q.fp; });
  return Segment{lo->fp, lo->fn, hi->fp, hi->fn};
}

Segment calibrated_line(double mu) {
  require_open_probability(mu);
  return Segment{0.0, 0.0, mu, 1.0 - mu};
}

std::optional<RatePoint> calibrated_point_at_cost(double mu, const CostSpec& spec, double c) {
  const double top = trivial_cost(mu, spec);
  if (c < 0.0 || c > top) return std::nullopt;
  const double t = c / top;
  return RatePoint{t * mu, t * (1.0 - mu)};
}

}  // namespace calparity
