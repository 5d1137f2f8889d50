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

#include "calparity/impossibility.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "calparity/error.hpp"
#include "calparity/metrics.hpp"

namespace calparity {

namespace {

constexpr double kPivotTol = 1e-12;

void require_open_probability(double mu) {
  require(mu > 0.0 && mu < 1.0, "base rate must lie strictly between 0 and 1");
}

}  // namespace

double ConstraintMatrix::max_abs_entry() const noexcept {
  double m = 0.0;
  for (const auto& row : rows) {
    for (double v : row) m = std::max(m, std::abs(v));
  }
  return m;
}

int matrix_rank(const double* data, int rows, int cols, double tol) {
  std::vector<double> a(data, data + static_cast<std::ptrdiff_t>(rows) * cols);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * cols + j)]; };
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = rank;
    for (int i = rank + 1; i < rows; ++i) {
      if (std::abs(at(i, col)) > std::abs(at(pivot, col))) pivot = i;
    }
    if (std::abs(at(pivot, col)) <= tol) continue;
    for (int j = 0; j < cols; ++j) std::swap(at(pivot, j), at(rank, j));
    for (int i = rank + 1; i < rows; ++i) {
      const double f = at(i, col) / at(rank, col);
      for (int j = col; j < cols; ++j) at(i, j) -= f * at(rank, j);
    }
    ++rank;
  }
  return rank;
}

ConstraintMatrix build_matrix(double mu1, double mu2, const CostPair& pair,
                              const CostPair& pair_prime) {
  require_open_probability(mu1);
  require_open_probability(mu2);
  ConstraintMatrix m;
  m.mu1 = mu1;
  m.mu2 = mu2;
  m.rows[0] = {1.0, -mu1 / (1.0 - mu1), 0.0, 0.0};
  m.rows[1] = {0.0, 0.0, 1.0, -mu2 / (1.0 - mu2)};
  m.rows[2] = {pair.first.a(), pair.first.b(), -pair.second.a(), -pair.second.b()};
  m.rows[3] = {pair_prime.first.a(), pair_prime.first.b(), -pair_prime.second.a(),
               -pair_prime.second.b()};
  m.distinct = matrix_rank(m.rows[2].data(), 2, 4, kPivotTol) == 2;
  m.rank = matrix_rank(m.rows[0].data(), 4, 4, kPivotTol);
  return m;
}

Vector4 multiply(const ConstraintMatrix& m, const Vector4& q) noexcept {
  Vector4 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i] += m.rows[i][j] * q[j];
  }
  return out;
}

ImpossibilityCheck exact_impossibility_check(const GroupData& g1, const GroupData& g2,
                                             const CostPair& pair, const CostPair& pair_prime,
                                             double tol) {
  require(tol > 0.0, "tolerance must be positive");
  require(g1.base_rate() != g2.base_rate(), "impossibility check needs distinct base rates");
  const auto m = build_matrix(g1.base_rate(), g2.base_rate(), pair, pair_prime);
  if (!m.distinct) fail(ErrorKind::kDegenerate, "the two equal-cost constraints are not distinct");

  const auto r1 = rate_point(g1);
  const auto r2 = rate_point(g2);
  ImpossibilityCheck out;
  out.rates = {r1.fp, r1.fn, r2.fp, r2.fn};
  out.residuals = multiply(m, out.rates);
  out.satisfied = std::all_of(out.residuals.begin(), out.residuals.end(),
                              [&](double v) { return std::abs(v) <= tol; });
  out.max_rate = *std::max_element(out.rates.begin(), out.rates.end());
  return out;
}

ImpossibilityBound approximate_bound(const ConstraintMatrix& matrix, double delta_cal,
                                     double delta_cost, double max_entry,
                                     std::uint64_t denominator) {
  require(denominator > 0, "common denominator D must be a positive integer");
  require(delta_cal >= 0.0 && delta_cost >= 0.0, "slack parameters must be non-negative");
  require(max_entry >= matrix.max_abs_entry() * (1.0 - 1e-12),
          "asserted M is smaller than an entry of the constraint matrix");
  if (!matrix.distinct) fail(ErrorKind::kDegenerate, "the two equal-cost constraints are not distinct");

  ImpossibilityBound b;
  b.max_entry = max_entry;
  b.denominator = denominator;
  const double d = static_cast<double>(denominator);
  b.constant = 16.0 * max_entry * max_entry * max_entry * d * d * d * d;
  b.delta_cal = delta_cal;
  b.delta_cost = delta_cost;
  const double slack = std::max({2.0 * delta_cal / (1.0 - matrix.mu1),
                                 2.0 * delta_cal / (1.0 - matrix.mu2), delta_cost});
  b.rate_bound = b.constant * slack;
  return b;
}

}  // namespace calparity
