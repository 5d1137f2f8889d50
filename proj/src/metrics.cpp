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

#include "calparity/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "calparity/error.hpp"

namespace calparity {

double generalized_fp(std::span<const Sample> samples) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.label == 0) {
      sum += s.score;
      ++count;
    }
  }
  require(count > 0, "generalized false-positive rate needs at least one negative sample");
  return sum / static_cast<double>(count);
}

double generalized_fn(std::span<const Sample> samples) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.label == 1) {
      sum += 1.0 - s.score;
      ++count;
    }
  }
  require(count > 0, "generalized false-negative rate needs at least one positive sample");
  return sum / static_cast<double>(count);
}

double generalized_fp(const GroupData& g) { return generalized_fp(g.samples()); }
double generalized_fn(const GroupData& g) { return generalized_fn(g.samples()); }

RatePoint rate_point(const GroupData& g) {
  return {generalized_fp(g), generalized_fn(g)};
}

namespace {

struct BinAccumulator {
  double weight = 0.0;
  double positive_weight = 0.0;
  double score_weight = 0.0;  // sum of weight * score
};

// In exact-unique mode the bin mean is the bin's score itself (bounds are
// degenerate), which keeps calibrated inputs at a gap of exactly zero.
CalibrationReport finish(const std::vector<BinAccumulator>& acc, std::vector<double> edges,
                         const std::vector<std::pair<double, double>>& bounds, double total,
                         bool exact) {
  CalibrationReport report;
  report.bin_edges = std::move(edges);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const auto& a = acc[i];
    if (a.weight <= 0.0) continue;
    CalibrationBin bin;
    bin.lower = bounds[i].first;
    bin.upper = bounds[i].second;
    bin.mean_score = exact ? bounds[i].first : a.score_weight / a.weight;
    bin.positive_fraction = a.positive_weight / a.weight;
    bin.weight = a.weight / total;
    report.gap += std::abs(bin.positive_fraction - bin.mean_score) * bin.weight;
    report.bins.push_back(bin);
  }
  return report;
}

}  // namespace

CalibrationReport calibration_gap(std::span<const ScoreAtom> atoms, Binning binning) {
  if (binning.kind == Binning::Kind::kFixedWidth) {
    require(binning.bins >= 1, "fixed-width binning needs B >= 1");
  }
  double total = 0.0;
  for (const auto& a : atoms) {
    require(a.weight >= 0.0 && a.positive_weight >= 0.0 && a.positive_weight <= a.weight * (1 + 1e-15),
            "invalid score atom");
    total += a.weight;
  }
  require(total > 0.0, "calibration gap of an empty distribution");

  if (binning.kind == Binning::Kind::kExactUnique) {
    std::vector<ScoreAtom> sorted(atoms.begin(), atoms.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ScoreAtom& x, const ScoreAtom& y) { return x.score < y.score; });
    std::vector<BinAccumulator> acc;
    std::vector<double> edges;
    std::vector<std::pair<double, double>> bounds;
    for (const auto& a : sorted) {
      if (edges.empty() || edges.back() != a.score) {
        edges.push_back(a.score);
        bounds.emplace_back(a.score, a.score);
        acc.emplace_back();
      }
      acc.back().weight += a.weight;
      acc.back().positive_weight += a.positive_weight;
    }
    return finish(acc, std::move(edges), bounds, total, true);
  }

  const std::size_t b = binning.bins;
  std::vector<BinAccumulator> acc(b);
  std::vector<double> edges(b + 1);
  std::vector<std::pair<double, double>> bounds(b);
  for (std::size_t k = 0; k <= b; ++k) edges[k] = static_cast<double>(k) / static_cast<double>(b);
  for (std::size_t k = 0; k < b; ++k) bounds[k] = {edges[k], edges[k + 1]};
  for (const auto& a : atoms) {
    auto k = std::min(static_cast<std::size_t>(a.score * static_cast<double>(b)), b - 1);
    acc[k].weight += a.weight;
    acc[k].positive_weight += a.positive_weight;
    acc[k].score_weight += a.weight * a.score;
  }
  return finish(acc, std::move(edges), bounds, total, false);
}

CalibrationReport calibration_gap(const GroupData& g, Binning binning) {
  std::vector<ScoreAtom> atoms;
  atoms.reserve(g.size());
  for (const auto& s : g.samples()) {
    atoms.push_back({s.score, 1.0, static_cast<double>(s.label)});
  }
  return calibration_gap(atoms, binning);
}

RatePoint analytic_rates(const GroupData& g) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (const auto& s : g.samples()) {
    m1 += s.score;
    m2 += s.score * s.score;
  }
  const double n = static_cast<double>(g.size());
  const double spread = m1 / n - m2 / n;
  const double mu = g.base_rate();
  return {spread / (1.0 - mu), spread / mu};
}

double linearity_residual(const GroupData& g) {
  const auto r = rate_point(g);
  const double mu = g.base_rate();
  return std::abs(mu * r.fn - (1.0 - mu) * r.fp);
}

}  // namespace calparity
