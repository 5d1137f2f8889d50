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

#include "calparity/eo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "calparity/error.hpp"

namespace calparity {

namespace {

void require_probability(double q, const char* name) {
  require(q >= 0.0 && q <= 1.0, std::string(name) + " must lie in [0,1]");
}

bool predicted_positive(double s) { return s >= kDecisionThreshold; }

double flipped_expectation(double s, const FlipRates& q) {
  const double p = predicted_positive(s) ? q.p2n : q.n2p;
  return (1.0 - p) * s + p * (1.0 - s);
}

}  // namespace

std::string_view to_string(LpStatus s) noexcept {
  return s == LpStatus::kOptimal ? "optimal" : "infeasible";
}

RatePoint derived_rates(const GroupData& g, double q_n2p, double q_p2n) {
  require_probability(q_n2p, "q_n2p");
  require_probability(q_p2n, "q_p2n");
  const FlipRates q{q_n2p, q_p2n};
  double neg = 0.0;
  double pos = 0.0;
  for (const auto& s : g.samples()) {
    const double e = flipped_expectation(s.score, q);
    if (s.label == 0) {
      neg += e;
    } else {
      pos += 1.0 - e;
    }
  }
  return {neg / static_cast<double>(g.negatives()), pos / static_cast<double>(g.positives())};
}

double thresholded_loss(const GroupData& g, double q_n2p, double q_p2n) {
  require_probability(q_n2p, "q_n2p");
  require_probability(q_p2n, "q_p2n");
  double fp = 0.0;
  double fn = 0.0;
  for (const auto& s : g.samples()) {
    const bool pos = predicted_positive(s.score);
    const bool flipped_pos = predicted_positive(1.0 - s.score);
    const double p = pos ? q_p2n : q_n2p;
    const double pr_positive = (1.0 - p) * (pos ? 1.0 : 0.0) + p * (flipped_pos ? 1.0 : 0.0);
    if (s.label == 0) {
      fp += pr_positive;
    } else {
      fn += 1.0 - pr_positive;
    }
  }
  return fp / static_cast<double>(g.negatives()) + fn / static_cast<double>(g.positives());
}

FlipModel flip_model(const GroupData& g) {
  const double n_neg = static_cast<double>(g.negatives());
  const double n_pos = static_cast<double>(g.positives());
  FlipModel m;
  for (const auto& s : g.samples()) {
    const bool pos = predicted_positive(s.score);
    // Flipping moves the expected score by q * (1 - 2s).
    const double shift = 1.0 - 2.0 * s.score;
    const double ind = pos ? 1.0 : 0.0;
    const double ind_flip = predicted_positive(1.0 - s.score) ? 1.0 : 0.0;
    double& d_fp = pos ? m.fp.d_p2n : m.fp.d_n2p;
    double& d_fn = pos ? m.fn.d_p2n : m.fn.d_n2p;
    double& d_loss = pos ? m.loss.d_p2n : m.loss.d_n2p;
    if (s.label == 0) {
      m.fp.constant += s.score / n_neg;
      d_fp += shift / n_neg;
      m.loss.constant += ind / n_neg;
      d_loss += (ind_flip - ind) / n_neg;
    } else {
      m.fn.constant += (1.0 - s.score) / n_pos;
      d_fn -= shift / n_pos;
      m.loss.constant += (1.0 - ind) / n_pos;
      d_loss -= (ind_flip - ind) / n_pos;
    }
  }
  return m;
}

namespace {

struct Candidate {
  std::array<double, 4> q{};
  double objective = 0.0;
};

}  // namespace

EOSolution solve_eo(const GroupData& g1, const GroupData& g2) {
  const FlipModel m1 = flip_model(g1);
  const FlipModel m2 = flip_model(g2);

  // Variables: q = (n2p_1, p2n_1, n2p_2, p2n_2). Rows: fp1 - fp2 = 0 and
  // fn1 - fn2 = 0, written as E q = r.
  const std::array<std::array<double, 4>, 2> E = {{
      {m1.fp.d_n2p, m1.fp.d_p2n, -m2.fp.d_n2p, -m2.fp.d_p2n},
      {m1.fn.d_n2p, m1.fn.d_p2n, -m2.fn.d_n2p, -m2.fn.d_p2n},
  }};
  const std::array<double, 2> r = {m2.fp.constant - m1.fp.constant,
                                   m2.fn.constant - m1.fn.constant};
  const std::array<double, 4> c = {m1.loss.d_n2p, m1.loss.d_p2n, m2.loss.d_n2p, m2.loss.d_p2n};
  const double c0 = m1.loss.constant + m2.loss.constant;

  double scale = 1.0;
  for (const auto& row : E) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  const double residual_tol = 1e-13 * scale;
  const double box_tol = 1e-12;

  std::optional<Candidate> best;
  auto consider = [&](std::array<double, 4> q) {
    for (double& v : q) {
      if (v < -box_tol || v > 1.0 + box_tol) return;
      v = std::clamp(v, 0.0, 1.0);
    }
    for (int i = 0; i < 2; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < 4; ++j) lhs += E[i][j] * q[j];
      if (std::abs(lhs - r[i]) > residual_tol) return;
    }
    Candidate cand{q, c0};
    for (int j = 0; j < 4; ++j) cand.objective += c[j] * q[j];
    if (!best) {
      best = cand;
      return;
    }
    const double flips = q[0] + q[1] + q[2] + q[3];
    const double best_flips = best->q[0] + best->q[1] + best->q[2] + best->q[3];
    if (cand.objective < best->objective - 1e-12 ||
        (cand.objective <= best->objective + 1e-12 && flips < best_flips - 1e-12)) {
      best = cand;
    }
  };

  // assignment digit: 0 -> fixed at 0, 1 -> fixed at 1, 2 -> free.
  for (int code = 0; code < 81; ++code) {
    std::array<int, 4> state{};
    int rest = code;
    for (auto& st : state) {
      st = rest % 3;
      rest /= 3;
    }
    std::array<double, 4> q{};
    std::vector<int> free;
    for (int j = 0; j < 4; ++j) {
      if (state[j] == 2) {
        free.push_back(j);
      } else {
        q[j] = static_cast<double>(state[j]);
      }
    }
    if (free.size() > 2) continue;
    std::array<double, 2> rhs = r;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (state[j] != 2) rhs[i] -= E[i][j] * q[j];
      }
    }
    if (free.size() == 1) {
      const int j = free[0];
      const double norm2 = E[0][j] * E[0][j] + E[1][j] * E[1][j];
      if (norm2 <= 1e-24 * scale * scale) continue;
      q[j] = (E[0][j] * rhs[0] + E[1][j] * rhs[1]) / norm2;
    } else if (free.size() == 2) {
      const int j = free[0];
      const int k = free[1];
      const double det = E[0][j] * E[1][k] - E[0][k] * E[1][j];
      const double norm = std::hypot(E[0][j], E[1][j]) * std::hypot(E[0][k], E[1][k]);
      if (norm == 0.0 || std::abs(det) <= 1e-12 * norm) continue;
      q[j] = (rhs[0] * E[1][k] - E[0][k] * rhs[1]) / det;
      q[k] = (E[0][j] * rhs[1] - rhs[0] * E[1][j]) / det;
    }
    consider(q);
  }

  EOSolution sol;
  if (!best) return sol;
  sol.status = LpStatus::kOptimal;
  sol.plan.group1 = {best->q[0], best->q[1]};
  sol.plan.group2 = {best->q[2], best->q[3]};
  sol.rates1 = derived_rates(g1, best->q[0], best->q[1]);
  sol.rates2 = derived_rates(g2, best->q[2], best->q[3]);
  sol.objective = thresholded_loss(g1, best->q[0], best->q[1]) +
                  thresholded_loss(g2, best->q[2], best->q[3]);
  return sol;
}

std::vector<ScoreAtom> flipped_atoms(const GroupData& g, const FlipRates& q) {
  require_probability(q.n2p, "q_n2p");
  require_probability(q.p2n, "q_p2n");
  std::vector<ScoreAtom> atoms;
  atoms.reserve(2 * g.size());
  for (const auto& s : g.samples()) {
    const double p = predicted_positive(s.score) ? q.p2n : q.n2p;
    const double y = static_cast<double>(s.label);
    if (p < 1.0) atoms.push_back({s.score, 1.0 - p, (1.0 - p) * y});
    if (p > 0.0) atoms.push_back({1.0 - s.score, p, p * y});
  }
  return atoms;
}

double eo_calibration_damage(const GroupData& g, const FlipRates& q) {
  const auto atoms = flipped_atoms(g, q);
  return calibration_gap(atoms, Binning::exact_unique()).gap;
}

GroupData expected_flipped_scores(const GroupData& g, const FlipRates& q) {
  require_probability(q.n2p, "q_n2p");
  require_probability(q.p2n, "q_p2n");
  return g.with_scores([&](const Sample& s) {
    return std::clamp(flipped_expectation(s.score, q), 0.0, 1.0);
  });
}

}  // namespace calparity
