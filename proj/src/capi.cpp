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

#include "calparity/calparity.h"

#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "calparity/calib_parity.hpp"
#include "calparity/commands.hpp"
#include "calparity/cost.hpp"
#include "calparity/dataset.hpp"
#include "calparity/eo.hpp"
#include "calparity/error.hpp"
#include "calparity/impossibility.hpp"
#include "calparity/metrics.hpp"
#include "calparity/rng.hpp"

struct cp_dataset {
  std::vector<calparity::GroupData> groups;
};

struct cp_report {
  std::string json;
  bool infeasible = false;
  std::optional<std::string> output_csv;
};

namespace {

using namespace calparity;

thread_local std::string g_last_error;

cp_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return CP_ERROR_INVALID_ARGUMENT;
    case ErrorKind::kParse:
      return CP_ERROR_PARSE;
    case ErrorKind::kIo:
      return CP_ERROR_IO;
    case ErrorKind::kInfeasible:
      return CP_ERROR_INFEASIBLE;
    case ErrorKind::kDegenerate:
      return CP_ERROR_DEGENERATE;
  }
  return CP_ERROR_INTERNAL;
}

template <class Fn>
cp_status guard(Fn&& fn) noexcept {
  try {
    fn();
    return CP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CP_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CP_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CP_ERROR_INTERNAL;
  }
}

void require_ptr(const void* p, const char* name) {
  require(p != nullptr, std::string(name) + " must not be NULL");
}

const GroupData& group_at(const cp_dataset* ds, size_t group) {
  require_ptr(ds, "dataset");
  require(group < ds->groups.size(), "group index out of range");
  return ds->groups[group];
}

Binning to_binning(cp_binning b) {
  if (b.kind == CP_BINNING_FIXED) return Binning::fixed_width(b.bins);
  require(b.kind == CP_BINNING_EXACT, "unknown binning kind");
  return Binning::exact_unique();
}

CostSpec to_spec(cp_cost_spec s) { return CostSpec(s.a, s.b); }

InterpolationPlan to_plan(cp_interpolation_plan p) {
  return {p.alpha, p.trivial_output,
          p.mode == CP_MODE_MONTE_CARLO ? MixtureMode::kMonteCarlo : MixtureMode::kDeterministic,
          p.seed};
}

std::optional<CostInput> to_cost_input(cp_cost_form form, const double* v) {
  if (form == CP_COST_NONE) return std::nullopt;
  require(form == CP_COST_EXPLICIT || form == CP_COST_WEIGHTED, "unknown cost form");
  CostInput c;
  c.form = form == CP_COST_WEIGHTED ? CostInput::Form::kWeighted : CostInput::Form::kExplicit;
  for (int i = 0; i < 4; ++i) c.values[i] = v[i];
  return c;
}

RunOptions to_options(const cp_run_options* opt) {
  cp_run_options defaults;
  cp_run_options_init(&defaults);
  const cp_run_options& o = opt ? *opt : defaults;
  RunOptions r;
  if (o.group1) r.group1 = std::string(o.group1);
  r.cost = to_cost_input(o.cost_form, o.cost);
  r.cost2 = to_cost_input(o.cost2_form, o.cost2);
  r.binning = to_binning(o.binning);
  r.mode = o.mode == CP_MODE_MONTE_CARLO ? MixtureMode::kMonteCarlo : MixtureMode::kDeterministic;
  if (o.has_seed) r.seed = o.seed;
  r.tol = o.tol;
  if (o.has_max_entry) r.max_entry = o.max_entry;
  if (o.denominator > 0) r.denominator = o.denominator;
  if (o.has_delta_cal) r.delta_cal = o.delta_cal;
  if (o.has_delta_cost) r.delta_cost = o.delta_cost;
  r.with_postprocess = o.with_postprocess != 0;
  return r;
}

template <class Run>
cp_status run_report(const cp_dataset* ds, const cp_run_options* opt, cp_report** out, Run&& run) {
  return guard([&] {
    require_ptr(ds, "dataset");
    require_ptr(out, "out");
    *out = nullptr;
    auto result = run(std::span<const GroupData>(ds->groups), to_options(opt));
    auto report = std::make_unique<cp_report>();
    report->json = result.report.dump(2) + "\n";
    report->infeasible = result.infeasible;
    report->output_csv = std::move(result.output_csv);
    *out = report.release();
  });
}

}  // namespace

extern "C" {

const char* cp_last_error(void) { return g_last_error.c_str(); }

const char* cp_status_name(cp_status status) {
  switch (status) {
    case CP_OK:
      return "ok";
    case CP_ERROR_INVALID_ARGUMENT:
      return "invalid_argument";
    case CP_ERROR_PARSE:
      return "parse_error";
    case CP_ERROR_IO:
      return "io_error";
    case CP_ERROR_INFEASIBLE:
      return "infeasible";
    case CP_ERROR_DEGENERATE:
      return "degenerate";
    case CP_ERROR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

const char* cp_version(void) { return "1.0.0"; }

cp_status cp_dataset_load_csv(const char* path, cp_dataset** out) {
  return guard([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = nullptr;
    auto ds = std::make_unique<cp_dataset>();
    ds->groups = load_csv(path);
    *out = ds.release();
  });
}

cp_status cp_dataset_parse_csv(const char* text, size_t length, cp_dataset** out) {
  return guard([&] {
    require_ptr(text, "text");
    require_ptr(out, "out");
    *out = nullptr;
    std::istringstream in(std::string(text, length));
    auto ds = std::make_unique<cp_dataset>();
    ds->groups = parse_csv(in);
    *out = ds.release();
  });
}

cp_status cp_dataset_create(const char* const* group_ids, const double* scores, const int* labels,
                            size_t n, cp_dataset** out) {
  return guard([&] {
    require_ptr(group_ids, "group_ids");
    require_ptr(scores, "scores");
    require_ptr(labels, "labels");
    require_ptr(out, "out");
    *out = nullptr;
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Sample>> rows;
    for (size_t i = 0; i < n; ++i) {
      require_ptr(group_ids[i], "group id");
      std::string id(group_ids[i]);
      auto [it, inserted] = rows.try_emplace(id);
      if (inserted) order.push_back(id);
      it->second.push_back({scores[i], labels[i]});
    }
    require(!order.empty(), "dataset needs at least one row");
    auto ds = std::make_unique<cp_dataset>();
    for (const auto& id : order) ds->groups.emplace_back(id, std::move(rows[id]));
    *out = ds.release();
  });
}

void cp_dataset_free(cp_dataset* ds) { delete ds; }

size_t cp_dataset_group_count(const cp_dataset* ds) { return ds ? ds->groups.size() : 0; }

const char* cp_dataset_group_id(const cp_dataset* ds, size_t group) {
  if (!ds || group >= ds->groups.size()) return nullptr;
  return ds->groups[group].id().c_str();
}

size_t cp_dataset_group_size(const cp_dataset* ds, size_t group) {
  if (!ds || group >= ds->groups.size()) return 0;
  return ds->groups[group].size();
}

cp_status cp_dataset_write_csv(const cp_dataset* ds, const char* path) {
  return guard([&] {
    require_ptr(ds, "dataset");
    require_ptr(path, "path");
    save_csv(path, ds->groups);
  });
}

cp_status cp_dataset_synthesize(const cp_synth_group* groups, size_t count, uint64_t seed,
                                cp_dataset** out) {
  return guard([&] {
    require_ptr(groups, "groups");
    require_ptr(out, "out");
    require(count > 0, "at least one synthetic group is required");
    *out = nullptr;
    const CounterRng root(seed);
    auto ds = std::make_unique<cp_dataset>();
    for (size_t k = 0; k < count; ++k) {
      const auto& g = groups[k];
      require_ptr(g.id, "group id");
      SynthSpec spec;
      spec.n = g.n;
      spec.miscalibration_shift = g.miscalibration_shift;
      spec.seed = root.split(k).seed();
      switch (g.family) {
        case CP_SCORES_POINT_MASS:
          spec.scores = PointMass{g.param_a};
          break;
        case CP_SCORES_GRID:
          require(g.grid != nullptr || g.grid_length == 0, "grid must not be NULL");
          spec.scores = UniformGrid{std::vector<double>(g.grid, g.grid + g.grid_length)};
          break;
        case CP_SCORES_KUMARASWAMY:
          spec.scores = Kumaraswamy{g.param_a, g.param_b};
          break;
        default:
          fail(ErrorKind::kInvalidArgument, "unknown score family");
      }
      ds->groups.push_back(synth_miscalibrated(spec, g.id));
    }
    *out = ds.release();
  });
}

cp_status cp_group_base_rate(const cp_dataset* ds, size_t group, double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = group_at(ds, group).base_rate();
  });
}

cp_status cp_group_rate_point(const cp_dataset* ds, size_t group, cp_rate_point* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto r = rate_point(group_at(ds, group));
    *out = {r.fp, r.fn};
  });
}

cp_status cp_group_analytic_rates(const cp_dataset* ds, size_t group, cp_rate_point* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto r = analytic_rates(group_at(ds, group));
    *out = {r.fp, r.fn};
  });
}

cp_status cp_group_calibration_gap(const cp_dataset* ds, size_t group, cp_binning binning,
                                   double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = calibration_gap(group_at(ds, group), to_binning(binning)).gap;
  });
}

cp_status cp_group_linearity_residual(const cp_dataset* ds, size_t group, double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = linearity_residual(group_at(ds, group));
  });
}

cp_status cp_cost(cp_rate_point point, cp_cost_spec spec, double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = cost({point.fp, point.fn}, to_spec(spec));
  });
}

cp_status cp_trivial_cost(double mu, cp_cost_spec spec, double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = trivial_cost(mu, to_spec(spec));
  });
}

cp_status cp_weighted_cost_spec(double r_fp, double r_fn, double mu, cp_cost_spec* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto s = weighted_cost_spec(r_fp, r_fn, mu);
    *out = {s.a(), s.b()};
  });
}

cp_status cp_feasibility(double g1_cost, double g2_cost, double trivial2_cost,
                         cp_feasibility_verdict* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto v = feasibility(g1_cost, g2_cost, trivial2_cost);
    out->feasible = v.feasible ? 1 : 0;
    out->g1_cost = v.g1_cost;
    out->g2_cost = v.g2_cost;
    out->trivial2_cost = v.trivial2_cost;
    out->reason = static_cast<cp_feasibility_reason>(static_cast<int>(v.reason));
  });
}

cp_status cp_compute_alpha(double g1_cost, double g2_cost, double trivial2_cost, double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = compute_alpha(g1_cost, g2_cost, trivial2_cost);
  });
}

cp_status cp_mixture_rate_point(const cp_dataset* ds, size_t group, cp_interpolation_plan plan,
                                cp_rate_point* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto r = mixture_rate_point(group_at(ds, group), to_plan(plan));
    *out = {r.fp, r.fn};
  });
}

cp_status cp_mixture_calibration_gap(const cp_dataset* ds, size_t group, cp_interpolation_plan plan,
                                     double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = mixture_calibration_gap(group_at(ds, group), to_plan(plan));
  });
}

cp_status cp_withholding_mask(const cp_dataset* ds, size_t group, cp_interpolation_plan plan,
                              uint8_t* withheld, size_t length) {
  return guard([&] {
    require_ptr(withheld, "withheld");
    const auto& g = group_at(ds, group);
    require(length == g.size(), "mask length must equal the group size");
    const auto w = withhold(g, to_plan(plan));
    std::copy(w.withheld.begin(), w.withheld.end(), withheld);
  });
}

cp_status cp_derived_rates(const cp_dataset* ds, size_t group, cp_flip_rates q, cp_rate_point* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto r = derived_rates(group_at(ds, group), q.n2p, q.p2n);
    *out = {r.fp, r.fn};
  });
}

cp_status cp_solve_eo(const cp_dataset* ds, size_t group1, size_t group2, cp_eo_solution* out) {
  return guard([&] {
    require_ptr(out, "out");
    const auto s = solve_eo(group_at(ds, group1), group_at(ds, group2));
    out->group1 = {s.plan.group1.n2p, s.plan.group1.p2n};
    out->group2 = {s.plan.group2.n2p, s.plan.group2.p2n};
    out->rates1 = {s.rates1.fp, s.rates1.fn};
    out->rates2 = {s.rates2.fp, s.rates2.fn};
    out->objective = s.objective;
    out->optimal = s.status == LpStatus::kOptimal ? 1 : 0;
  });
}

cp_status cp_eo_calibration_damage(const cp_dataset* ds, size_t group, cp_flip_rates q, double* out) {
  return guard([&] {
    require_ptr(out, "out");
    *out = eo_calibration_damage(group_at(ds, group), {q.n2p, q.p2n});
  });
}

cp_status cp_build_matrix(double mu1, double mu2, const cp_cost_spec pair[2],
                          const cp_cost_spec pair_prime[2], double* matrix, int* distinct) {
  return guard([&] {
    require_ptr(pair, "pair");
    require_ptr(pair_prime, "pair_prime");
    const auto m = build_matrix(mu1, mu2, {to_spec(pair[0]), to_spec(pair[1])},
                                {to_spec(pair_prime[0]), to_spec(pair_prime[1])});
    if (matrix) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) matrix[i * 4 + j] = m.rows[i][j];
      }
    }
    if (distinct) *distinct = m.distinct ? 1 : 0;
  });
}

cp_status cp_approximate_bound(double mu1, double mu2, const cp_cost_spec pair[2],
                               const cp_cost_spec pair_prime[2], double delta_cal,
                               double delta_cost, double max_entry, uint64_t denominator,
                               cp_impossibility_bound* out) {
  return guard([&] {
    require_ptr(pair, "pair");
    require_ptr(pair_prime, "pair_prime");
    require_ptr(out, "out");
    const auto m = build_matrix(mu1, mu2, {to_spec(pair[0]), to_spec(pair[1])},
                                {to_spec(pair_prime[0]), to_spec(pair_prime[1])});
    const auto b = approximate_bound(m, delta_cal, delta_cost, max_entry, denominator);
    *out = {b.max_entry, b.denominator, b.constant, b.delta_cal, b.delta_cost, b.rate_bound};
  });
}

void cp_run_options_init(cp_run_options* opt) {
  if (!opt) return;
  *opt = cp_run_options{};
  opt->group1 = nullptr;
  opt->cost_form = CP_COST_NONE;
  opt->cost2_form = CP_COST_NONE;
  opt->binning = {CP_BINNING_EXACT, 0};
  opt->mode = CP_MODE_DETERMINISTIC;
  opt->tol = 1e-9;
}

cp_status cp_run_stats(const cp_dataset* ds, const cp_run_options* opt, cp_report** out) {
  return run_report(ds, opt, out, [](auto g, const auto& o) { return run_stats(g, o); });
}

cp_status cp_run_calibrate_check(const cp_dataset* ds, const cp_run_options* opt, cp_report** out) {
  return run_report(ds, opt, out, [](auto g, const auto& o) { return run_calibrate_check(g, o); });
}

cp_status cp_run_postprocess_calibrated(const cp_dataset* ds, const cp_run_options* opt,
                                        cp_report** out) {
  return run_report(ds, opt, out,
                    [](auto g, const auto& o) { return run_postprocess_calibrated(g, o); });
}

cp_status cp_run_postprocess_eo(const cp_dataset* ds, const cp_run_options* opt, cp_report** out) {
  return run_report(ds, opt, out, [](auto g, const auto& o) { return run_postprocess_eo(g, o); });
}

cp_status cp_run_diagnose(const cp_dataset* ds, const cp_run_options* opt, cp_report** out) {
  return run_report(ds, opt, out, [](auto g, const auto& o) { return run_diagnose(g, o); });
}

cp_status cp_run_plot_data(const cp_dataset* ds, const cp_run_options* opt, cp_report** out) {
  return run_report(ds, opt, out, [](auto g, const auto& o) { return run_plot_data(g, o); });
}

const char* cp_report_json(const cp_report* report) { return report ? report->json.c_str() : nullptr; }

int cp_report_infeasible(const cp_report* report) { return report && report->infeasible ? 1 : 0; }

int cp_report_has_output(const cp_report* report) {
  return report && report->output_csv ? 1 : 0;
}

const char* cp_report_output_csv(const cp_report* report) {
  return report && report->output_csv ? report->output_csv->c_str() : nullptr;
}

cp_status cp_report_write_output(const cp_report* report, const char* path) {
  return guard([&] {
    require_ptr(report, "report");
    require_ptr(path, "path");
    require(report->output_csv.has_value(), "report has no output table");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::kIo, std::string("cannot write '") + path + "'");
    out << *report->output_csv;
    if (!out) fail(ErrorKind::kIo, std::string("failed writing '") + path + "'");
  });
}

void cp_report_free(cp_report* report) { delete report; }

}  // extern "C"
