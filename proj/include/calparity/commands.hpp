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

// Report-producing runs shared by the C API and the command-line tool. Every
// run is a pure function of (groups, options) and returns a JSON document
// with a stable field order.

#ifndef CALPARITY_COMMANDS_HPP_
#define CALPARITY_COMMANDS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "calparity/calib_parity.hpp"
#include "calparity/cost.hpp"
#include "calparity/dataset.hpp"
#include "calparity/eo.hpp"
#include "calparity/impossibility.hpp"
#include "calparity/metrics.hpp"
#include "calparity/scene.hpp"

namespace calparity {

using Json = nlohmann::ordered_json;

/// Either explicit coefficients (a1, b1, a2, b2) or the per-sample weighted
/// form (r_fp, r_fn), resolved against each group's base rate.
struct CostInput {
  enum class Form { kExplicit, kWeighted };
  Form form = Form::kExplicit;
  std::array<double, 4> values{1.0, 1.0, 1.0, 1.0};

  /// Specs for the groups currently in roles 1 and 2.
  std::array<CostSpec, 2> resolve(double mu_role1, double mu_role2) const;
};

struct RunOptions {
  std::optional<std::string> group1;
  std::optional<CostInput> cost;
  std::optional<CostInput> cost2;
  Binning binning = Binning::exact_unique();
  MixtureMode mode = MixtureMode::kDeterministic;
  std::optional<std::uint64_t> seed;
  double tol = 1e-9;
  std::optional<double> max_entry;
  std::optional<std::uint64_t> denominator;
  std::optional<double> delta_cal;
  std::optional<double> delta_cost;
  bool with_postprocess = false;
};

struct CommandResult {
  Json report;
  bool infeasible = false;
  std::optional<std::string> output_csv;
};

/// Value rounded to 12 significant digits, the precision used in reports.
double report_number(double v);

Json to_json(const CalibrationReport& r);
Json to_json(const FeasibilityVerdict& v);
Json to_json(const PlaneScene& scene);
Json to_json(const ImpossibilityBound& b);

/// The two groups in role order (G1 first). With exactly two groups and no
/// name the file order is used; otherwise `group1` selects G1.
std::array<const GroupData*, 2> select_roles(std::span<const GroupData> groups,
                                             const std::optional<std::string>& group1);

CommandResult run_stats(std::span<const GroupData> groups, const RunOptions& opt);
CommandResult run_calibrate_check(std::span<const GroupData> groups, const RunOptions& opt);
CommandResult run_postprocess_calibrated(std::span<const GroupData> groups, const RunOptions& opt);
CommandResult run_postprocess_eo(std::span<const GroupData> groups, const RunOptions& opt);
CommandResult run_diagnose(std::span<const GroupData> groups, const RunOptions& opt);
CommandResult run_plot_data(std::span<const GroupData> groups, const RunOptions& opt);

}  // namespace calparity

#endif  // CALPARITY_COMMANDS_HPP_
