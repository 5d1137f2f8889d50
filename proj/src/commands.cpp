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

#include "calparity/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "calparity/error.hpp"

namespace calparity {

std::array<CostSpec, 2> CostInput::resolve(double mu_role1, double mu_role2) const {
  if (form == Form::kWeighted) {
    return {weighted_cost_spec(values[0], values[1], mu_role1),
            weighted_cost_spec(values[0], values[1], mu_role2)};
  }
  return {CostSpec(values[0], values[1]), CostSpec(values[2], values[3])};
}

double report_number(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

namespace {

Json num(double v) { return report_number(v); }

Json point_json(const RatePoint& p) {
  Json j;
  j["fp"] = num(p.fp);
  j["fn"] = num(p.fn);
  return j;
}

Json spec_json(const CostSpec& s) {
  Json j;
  j["a"] = num(s.a());
  j["b"] = num(s.b());
  return j;
}

std::string binning_name(const Binning& b) {
  if (b.kind == Binning::Kind::kExactUnique) return "exact";
  return "fixed:" + std::to_string(b.bins);
}

const CostInput& require_cost(const std::optional<CostInput>& c, const char* flag) {
  if (!c) fail(ErrorKind::kInvalidArgument, std::string("a cost specification is required (") + flag + ")");
  return *c;
}

std::string csv_text(std::span<const GroupData> groups) {
  std::ostringstream out;
  write_csv(out, groups);
  return out.str();
}

struct OrderedRoles {
  const GroupData* g1;
  const GroupData* g2;
  CostSpec spec1;
  CostSpec spec2;
  bool swapped;
};

// G1 must be the higher-cost group; roles are swapped when needed and the
// specs travel with their groups.
OrderedRoles order_by_cost(const std::array<const GroupData*, 2>& roles, const CostInput& cost_in) {
  const auto specs = cost_in.resolve(roles[0]->base_rate(), roles[1]->base_rate());
  if (cost(rate_point(*roles[0]), specs[0]) < cost(rate_point(*roles[1]), specs[1])) {
    return {roles[1], roles[0], specs[1], specs[0], true};
  }
  return {roles[0], roles[1], specs[0], specs[1], false};
}

// Deterministic withholding plan for an ordered pair, if feasible.
std::optional<InterpolationPlan> deterministic_plan(const OrderedRoles& r) {
  const double c1 = cost(rate_point(*r.g1), r.spec1);
  const double c2 = cost(rate_point(*r.g2), r.spec2);
  const double triv2 = trivial_cost(r.g2->base_rate(), r.spec2);
  if (!feasibility(c1, c2, triv2).feasible) return std::nullopt;
  const double alpha = triv2 > c2 ? compute_alpha(c1, c2, triv2) : 0.0;
  return InterpolationPlan{alpha, r.g2->base_rate(), MixtureMode::kDeterministic, 0};
}

}  // namespace

Json to_json(const CalibrationReport& r) {
  Json j;
  j["gap"] = num(r.gap);
  Json bins = Json::array();
  for (const auto& b : r.bins) {
    Json e;
    e["lower"] = num(b.lower);
    e["upper"] = num(b.upper);
    e["mean_score"] = num(b.mean_score);
    e["positive_fraction"] = num(b.positive_fraction);
    e["weight"] = num(b.weight);
    bins.push_back(std::move(e));
  }
  j["bins"] = std::move(bins);
  return j;
}

Json to_json(const FeasibilityVerdict& v) {
  Json j;
  j["feasible"] = v.feasible;
  j["g1_cost"] = num(v.g1_cost);
  j["g2_cost"] = num(v.g2_cost);
  j["trivial2_cost"] = num(v.trivial2_cost);
  j["reason"] = std::string(to_string(v.reason));
  return j;
}

Json to_json(const PlaneScene& scene) {
  auto seg = [](Json& j, const Segment& s) {
    j["x0"] = num(s.x0);
    j["y0"] = num(s.y0);
    j["x1"] = num(s.x1);
    j["y1"] = num(s.y1);
  };
  Json j;
  Json points = Json::array();
  for (const auto& p : scene.points) {
    Json e;
    e["label"] = p.label;
    e["group"] = p.group;
    e["fp"] = num(p.point.fp);
    e["fn"] = num(p.point.fn);
    points.push_back(std::move(e));
  }
  j["points"] = std::move(points);
  Json lines = Json::array();
  for (const auto& l : scene.calibrated_lines) {
    Json e;
    e["group"] = l.group;
    seg(e, l.segment);
    lines.push_back(std::move(e));
  }
  j["lines"] = std::move(lines);
  Json curves = Json::array();
  for (const auto& c : scene.level_curves) {
    Json e;
    e["a"] = num(c.spec.a());
    e["b"] = num(c.spec.b());
    e["c"] = num(c.level);
    seg(e, c.segment);
    curves.push_back(std::move(e));
  }
  j["level_curves"] = std::move(curves);
  Json diag;
  seg(diag, scene.diagonal);
  j["diagonal"] = std::move(diag);
  return j;
}

Json to_json(const ImpossibilityBound& b) {
  Json j;
  j["M"] = num(b.max_entry);
  j["D"] = b.denominator;
  j["L"] = num(b.constant);
  j["delta_cal"] = num(b.delta_cal);
  j["delta_cost"] = num(b.delta_cost);
  j["rate_bound"] = num(b.rate_bound);
  return j;
}

std::array<const GroupData*, 2> select_roles(std::span<const GroupData> groups,
                                             const std::optional<std::string>& group1) {
  require(groups.size() == 2, "this command needs exactly two groups, found " +
                                  std::to_string(groups.size()));
  if (!group1) return {&groups[0], &groups[1]};
  if (groups[0].id() == *group1) return {&groups[0], &groups[1]};
  if (groups[1].id() == *group1) return {&groups[1], &groups[0]};
  fail(ErrorKind::kInvalidArgument, "no group named '" + *group1 + "'");
}

CommandResult run_stats(std::span<const GroupData> groups, const RunOptions& opt) {
  Json groups_json = Json::array();
  for (const auto& g : groups) {
    const auto r = rate_point(g);
    const auto a = analytic_rates(g);
    Json e;
    e["group"] = g.id();
    e["n"] = g.size();
    e["base_rate"] = num(g.base_rate());
    e["fp"] = num(r.fp);
    e["fn"] = num(r.fn);
    e["analytic_fp"] = num(a.fp);
    e["analytic_fn"] = num(a.fn);
    e["calibration_gap"] = num(calibration_gap(g, opt.binning).gap);
    e["linearity_residual"] = num(linearity_residual(g));
    groups_json.push_back(std::move(e));
  }
  CommandResult out;
  out.report["binning"] = binning_name(opt.binning);
  out.report["groups"] = std::move(groups_json);
  return out;
}

CommandResult run_calibrate_check(std::span<const GroupData> groups, const RunOptions& opt) {
  Json groups_json = Json::array();
  for (const auto& g : groups) {
    Json e;
    e["group"] = g.id();
    Json report = to_json(calibration_gap(g, opt.binning));
    e["gap"] = std::move(report["gap"]);
    e["bins"] = std::move(report["bins"]);
    groups_json.push_back(std::move(e));
  }
  CommandResult out;
  out.report["binning"] = binning_name(opt.binning);
  out.report["groups"] = std::move(groups_json);
  return out;
}

CommandResult run_postprocess_calibrated(std::span<const GroupData> groups, const RunOptions& opt) {
  const auto roles = select_roles(groups, opt.group1);
  const auto& cost_in = require_cost(opt.cost, "--cost or --weighted-cost");
  if (opt.mode == MixtureMode::kMonteCarlo && !opt.seed) {
    fail(ErrorKind::kInvalidArgument, "Monte Carlo mode requires an explicit seed");
  }
  const auto [g1, g2, spec1, spec2, swapped] = order_by_cost(roles, cost_in);
  const double c1 = cost(rate_point(*g1), spec1);
  const double c2 = cost(rate_point(*g2), spec2);
  const double mu2 = g2->base_rate();
  const double triv2 = trivial_cost(mu2, spec2);
  const auto verdict = feasibility(c1, c2, triv2);

  CommandResult out;
  Json& rep = out.report;
  rep["command"] = "postprocess-calibrated";
  rep["mode"] = opt.mode == MixtureMode::kDeterministic ? "deterministic" : "monte_carlo";
  rep["seed"] = opt.seed ? Json(*opt.seed) : Json(nullptr);
  rep["group1"] = g1->id();
  rep["group2"] = g2->id();
  rep["swapped"] = swapped;
  rep["degraded_group"] = g2->id();
  rep["cost_spec1"] = spec_json(spec1);
  rep["cost_spec2"] = spec_json(spec2);
  rep["verdict"] = to_json(verdict);
  if (!verdict.feasible) {
    out.infeasible = true;
    return out;
  }

  const bool already_trivial = !(triv2 > c2);
  const double alpha = already_trivial ? 0.0 : compute_alpha(c1, c2, triv2);
  const InterpolationPlan plan{alpha, mu2, opt.mode, opt.seed.value_or(0)};

  rep["alpha"] = already_trivial ? Json(nullptr) : Json(num(alpha));
  rep["already_trivial"] = already_trivial;
  rep["trivial_output"] = num(mu2);

  const double gap1 = calibration_gap(*g1).gap;
  const double gap2 = calibration_gap(*g2).gap;
  const double post_c2 = mixture_cost(*g2, plan, spec2);
  Json pre;
  pre["cost1"] = num(c1);
  pre["cost2"] = num(c2);
  pre["gap1"] = num(gap1);
  pre["gap2"] = num(gap2);
  rep["pre"] = std::move(pre);
  Json post;
  post["cost1"] = num(c1);
  post["cost2"] = num(post_c2);
  post["gap1"] = num(gap1);
  post["gap2"] = num(mixture_calibration_gap(*g2, plan));
  post["rates2"] = point_json(mixture_rate_point(*g2, plan));
  post["cost_difference"] = num(std::abs(post_c2 - c1));
  rep["post"] = std::move(post);

  if (opt.mode == MixtureMode::kMonteCarlo) {
    const auto w = withhold(*g2, plan);
    std::size_t count = 0;
    for (auto m : w.withheld) count += m;
    Json real;
    real["withheld"] = count;
    real["cost2"] = num(cost(rate_point(w.realized), spec2));
    real["gap2"] = num(calibration_gap(w.realized).gap);
    rep["realized"] = std::move(real);

    std::ostringstream csv;
    csv << "group,score,label,withheld\n";
    for (const auto& g : groups) {
      const bool degraded = &g == g2;
      const auto samples = degraded ? w.realized.samples() : g.samples();
      for (std::size_t i = 0; i < samples.size(); ++i) {
        csv << g.id() << ',' << format_double(samples[i].score) << ',' << samples[i].label << ','
            << (degraded ? static_cast<int>(w.withheld[i]) : 0) << '\n';
      }
    }
    out.output_csv = csv.str();
  } else {
    out.output_csv = csv_text(groups);
  }
  return out;
}

CommandResult run_postprocess_eo(std::span<const GroupData> groups, const RunOptions& opt) {
  const auto roles = select_roles(groups, opt.group1);
  const auto sol = solve_eo(*roles[0], *roles[1]);

  CommandResult out;
  Json& rep = out.report;
  rep["command"] = "postprocess-eo";
  rep["status"] = std::string(to_string(sol.status));
  if (sol.status != LpStatus::kOptimal) {
    out.infeasible = true;
    return out;
  }
  rep["objective"] = num(sol.objective);
  rep["base_objective"] = num(thresholded_loss(*roles[0], 0, 0) + thresholded_loss(*roles[1], 0, 0));

  const std::array<FlipRates, 2> flips = {sol.plan.group1, sol.plan.group2};
  const std::array<RatePoint, 2> rates = {sol.rates1, sol.rates2};
  Json per_group = Json::array();
  for (int t = 0; t < 2; ++t) {
    Json e;
    e["group"] = roles[t]->id();
    e["q_n2p"] = num(flips[t].n2p);
    e["q_p2n"] = num(flips[t].p2n);
    e["original"] = point_json(rate_point(*roles[t]));
    e["derived"] = point_json(rates[t]);
    e["gap_before"] = num(calibration_gap(*roles[t]).gap);
    e["calibration_damage"] = num(eo_calibration_damage(*roles[t], flips[t]));
    per_group.push_back(std::move(e));
  }
  rep["groups"] = std::move(per_group);
  Json diff;
  diff["fp"] = num(std::abs(sol.rates1.fp - sol.rates2.fp));
  diff["fn"] = num(std::abs(sol.rates1.fn - sol.rates2.fn));
  rep["rate_difference"] = std::move(diff);

  std::vector<GroupData> flipped;
  for (const auto& g : groups) {
    flipped.push_back(expected_flipped_scores(g, &g == roles[0] ? flips[0] : flips[1]));
  }
  out.output_csv = csv_text(flipped);
  return out;
}

CommandResult run_diagnose(std::span<const GroupData> groups, const RunOptions& opt) {
  const auto roles = select_roles(groups, opt.group1);
  const auto& first = require_cost(opt.cost, "--cost or --weighted-cost");
  const auto& second = require_cost(opt.cost2, "--cost2 or --weighted-cost2");
  const double mu1 = roles[0]->base_rate();
  const double mu2 = roles[1]->base_rate();
  const auto s = first.resolve(mu1, mu2);
  const auto sp = second.resolve(mu1, mu2);
  const CostPair pair{s[0], s[1]};
  const CostPair pair_prime{sp[0], sp[1]};

  const auto matrix = build_matrix(mu1, mu2, pair, pair_prime);
  if (!matrix.distinct) fail(ErrorKind::kDegenerate, "the two cost specifications are not distinct");
  const auto check = exact_impossibility_check(*roles[0], *roles[1], pair, pair_prime, opt.tol);

  const auto r1 = rate_point(*roles[0]);
  const auto r2 = rate_point(*roles[1]);
  const double measured_cal =
      std::max(calibration_gap(*roles[0]).gap, calibration_gap(*roles[1]).gap);
  const double measured_cost = std::max(std::abs(cost(r1, pair.first) - cost(r2, pair.second)),
                                        std::abs(cost(r1, pair_prime.first) - cost(r2, pair_prime.second)));

  CommandResult out;
  Json& rep = out.report;
  rep["command"] = "diagnose";
  rep["group1"] = roles[0]->id();
  rep["group2"] = roles[1]->id();
  rep["mu1"] = num(mu1);
  rep["mu2"] = num(mu2);
  Json rows = Json::array();
  for (const auto& row : matrix.rows) {
    Json r = Json::array();
    for (double v : row) r.push_back(num(v));
    rows.push_back(std::move(r));
  }
  rep["matrix"] = std::move(rows);
  rep["distinct"] = matrix.distinct;
  rep["rank"] = matrix.rank;

  Json ex;
  ex["tol"] = num(opt.tol);
  ex["satisfied"] = check.satisfied;
  Json rates = Json::array();
  Json res = Json::array();
  for (int i = 0; i < 4; ++i) {
    rates.push_back(num(check.rates[i]));
    res.push_back(num(check.residuals[i]));
  }
  ex["rates"] = std::move(rates);
  ex["residuals"] = std::move(res);
  rep["exact_check"] = std::move(ex);

  Json measured;
  measured["delta_cal"] = num(measured_cal);
  measured["delta_cost"] = num(measured_cost);
  rep["measured"] = std::move(measured);

  if (opt.max_entry && opt.denominator) {
    const double dcal = opt.delta_cal.value_or(measured_cal);
    const double dcost = opt.delta_cost.value_or(measured_cost);
    const auto bound = approximate_bound(matrix, dcal, dcost, *opt.max_entry, *opt.denominator);
    Json b = to_json(bound);
    b["max_rate"] = num(check.max_rate);
    b["rates_within_bound"] = check.max_rate <= bound.rate_bound;
    b["slack_assumptions_hold"] = measured_cal <= dcal && measured_cost <= dcost;
    rep["bound"] = std::move(b);
  } else {
    rep["bound"] = nullptr;
  }
  return out;
}

CommandResult run_plot_data(std::span<const GroupData> groups, const RunOptions& opt) {
  std::vector<CostSpec> specs;
  std::vector<GroupData> ordered(groups.begin(), groups.end());
  if (opt.cost) {
    const auto roles = select_roles(groups, opt.group1);
    const auto s = opt.cost->resolve(roles[0]->base_rate(), roles[1]->base_rate());
    ordered = {*roles[0], *roles[1]};
    specs = {s[0], s[1]};
  } else {
    for (std::size_t i = 0; i < groups.size(); ++i) specs.emplace_back(1.0, 1.0);
  }

  std::vector<ScenePoint> extra;
  if (opt.with_postprocess) {
    const auto roles = select_roles(groups, opt.group1);
    const auto ordered_roles = order_by_cost(roles, opt.cost.value_or(CostInput{}));
    if (auto plan = deterministic_plan(ordered_roles)) {
      extra.push_back({"postprocessed", ordered_roles.g2->id(),
                       mixture_rate_point(*ordered_roles.g2, *plan)});
    }
  }
  CommandResult out;
  out.report = to_json(build_scene(ordered, specs, extra));
  return out;
}

}  // namespace calparity
