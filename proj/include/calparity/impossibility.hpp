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

#ifndef CALPARITY_IMPOSSIBILITY_HPP_
#define CALPARITY_IMPOSSIBILITY_HPP_

#include <array>
#include <cstdint>

#include "calparity/cost.hpp"
#include "calparity/dataset.hpp"

namespace calparity {

using Matrix4 = std::array<std::array<double, 4>, 4>;
using Vector4 = std::array<double, 4>;

/// Linear system over q = (fp1, fn1, fp2, fn2):
///
///   [ 1   -mu1/(1-mu1)   0    0            ]
///   [ 0    0             1   -mu2/(1-mu2)  ]
///   [ a1   b1           -a2  -b2           ]
///   [ a1'  b1'          -a2' -b2'          ]
///
/// The first two rows vanish for perfectly calibrated classifiers, the last
/// two for classifiers meeting both equal-cost constraints.
struct ConstraintMatrix {
  Matrix4 rows{};
  double mu1 = 0.5;
  double mu2 = 0.5;
  bool distinct = false;  // cost rows linearly independent
  int rank = 0;           // rank of the full 4x4 system

  double max_abs_entry() const noexcept;
};

/// Rank by Gaussian elimination with partial pivoting; pivots with magnitude
/// <= tol are treated as zero.
int matrix_rank(const double* data, int rows, int cols, double tol);

ConstraintMatrix build_matrix(double mu1, double mu2, const CostPair& pair,
                              const CostPair& pair_prime);

Vector4 multiply(const ConstraintMatrix& m, const Vector4& q) noexcept;

struct ImpossibilityCheck {
  bool satisfied = false;
  Vector4 rates{};      // (fp1, fn1, fp2, fn2)
  Vector4 residuals{};  // A q
  double max_rate = 0.0;
};

/// Evaluates both groups' rate points against the calibration-linearity rows
/// and both equal-cost rows; satisfied when every |residual| <= tol. With
/// distinct constraints and mu1 != mu2 only (near-)perfect classifiers pass.
ImpossibilityCheck exact_impossibility_check(const GroupData& g1, const GroupData& g2,
                                             const CostPair& pair, const CostPair& pair_prime,
                                             double tol);

struct ImpossibilityBound {
  double max_entry = 0.0;     // M
  std::uint64_t denominator = 1;  // D
  double constant = 0.0;      // L = 16 M^3 D^4
  double delta_cal = 0.0;
  double delta_cost = 0.0;
  double rate_bound = 0.0;
};

/// L * max{2 delta_cal / (1 - mu1), 2 delta_cal / (1 - mu2), delta_cost}.
/// M and D describe the exact rational system the caller has in mind; they
/// cannot be recovered from floating-point entries, but an M smaller than an
/// observed entry is rejected.
ImpossibilityBound approximate_bound(const ConstraintMatrix& matrix, double delta_cal,
                                     double delta_cost, double max_entry,
                                     std::uint64_t denominator);

}  // namespace calparity

#endif  // CALPARITY_IMPOSSIBILITY_HPP_
