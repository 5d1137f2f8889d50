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

// calparity command-line tool. Reports are JSON on stdout; diagnostics go
// to stderr. Exit codes: 0 success, 1 input or usage error, 2 infeasible.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "calparity/calparity.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ApiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(cp_status status) {
  if (status != CP_OK) {
    throw ApiError(std::string(cp_status_name(status)) + ": " + cp_last_error());
  }
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw UsageError("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw UsageError("invalid integer for " + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

cp_binning parse_binning(const std::string& text) {
  if (text == "exact") return {CP_BINNING_EXACT, 0};
  if (text.rfind("fixed:", 0) == 0) {
    const auto bins = parse_count(text.substr(6), "--binning");
    if (bins == 0) throw UsageError("--binning fixed:B needs B >= 1");
    return {CP_BINNING_FIXED, static_cast<size_t>(bins)};
  }
  throw UsageError("--binning must be 'exact' or 'fixed:B'");
}

struct CostFlags {
  std::vector<double> cost;
  std::vector<double> weighted;
};

void set_cost(const CostFlags& flags, const std::string& name, cp_cost_form* form, double* out) {
  if (!flags.cost.empty() && !flags.weighted.empty()) {
    throw UsageError("--" + name + " and --weighted-" + name + " are mutually exclusive");
  }
  if (!flags.cost.empty()) {
    if (flags.cost.size() != 4) throw UsageError("--" + name + " expects a1,b1,a2,b2");
    *form = CP_COST_EXPLICIT;
    for (int i = 0; i < 4; ++i) out[i] = flags.cost[i];
  } else if (!flags.weighted.empty()) {
    if (flags.weighted.size() != 2) throw UsageError("--weighted-" + name + " expects rfp,rfn");
    *form = CP_COST_WEIGHTED;
    out[0] = flags.weighted[0];
    out[1] = flags.weighted[1];
  }
}

// NAME,N,DIST[,SHIFT] with DIST one of point:P, grid:P1;P2;..., kumaraswamy:A:B.
struct SynthGroupArg {
  std::string id;
  cp_synth_group group{};
  std::vector<double> grid;
};

SynthGroupArg parse_synth_group(const std::string& text) {
  const auto fields = split(text, ',');
  if (fields.size() < 3 || fields.size() > 4) {
    throw UsageError("--group expects NAME,N,DIST[,SHIFT], got '" + text + "'");
  }
  SynthGroupArg arg;
  arg.id = fields[0];
  if (arg.id.empty()) throw UsageError("--group name must not be empty");
  arg.group.n = static_cast<size_t>(parse_count(fields[1], "--group N"));
  const auto dist = split(fields[2], ':');
  if (dist[0] == "point" && dist.size() == 2) {
    arg.group.family = CP_SCORES_POINT_MASS;
    arg.group.param_a = parse_double(dist[1], "point mass");
  } else if (dist[0] == "grid" && dist.size() == 2) {
    arg.group.family = CP_SCORES_GRID;
    for (const auto& p : split(dist[1], ';')) arg.grid.push_back(parse_double(p, "grid value"));
  } else if (dist[0] == "kumaraswamy" && dist.size() == 3) {
    arg.group.family = CP_SCORES_KUMARASWAMY;
    arg.group.param_a = parse_double(dist[1], "kumaraswamy a");
    arg.group.param_b = parse_double(dist[2], "kumaraswamy b");
  } else {
    throw UsageError("unknown score distribution '" + fields[2] + "'");
  }
  if (fields.size() == 4) arg.group.miscalibration_shift = parse_double(fields[3], "--group SHIFT");
  return arg;
}

struct Dataset {
  cp_dataset* handle = nullptr;
  Dataset() = default;
  Dataset(const Dataset&) = delete;
  Dataset& operator=(const Dataset&) = delete;
  ~Dataset() { cp_dataset_free(handle); }
};

struct Report {
  cp_report* handle = nullptr;
  Report() = default;
  Report(const Report&) = delete;
  Report& operator=(const Report&) = delete;
  ~Report() { cp_report_free(handle); }
};

using RunFn = cp_status (*)(const cp_dataset*, const cp_run_options*, cp_report**);

struct Settings {
  std::string input;
  std::string output;
  CostFlags cost;
  CostFlags cost2;
  std::string binning = "exact";
  std::string mode = "deterministic";
  std::optional<std::uint64_t> seed;
  std::string group1;
  double tol = 1e-9;
  std::optional<double> max_entry;
  std::optional<std::uint64_t> denominator;
  std::optional<double> delta_cal;
  std::optional<double> delta_cost;
  bool postprocess = false;
  std::vector<std::string> synth_groups;
};

int run_report(const Settings& s, RunFn run) {
  cp_run_options opt;
  cp_run_options_init(&opt);
  if (!s.group1.empty()) opt.group1 = s.group1.c_str();
  set_cost(s.cost, "cost", &opt.cost_form, opt.cost);
  set_cost(s.cost2, "cost2", &opt.cost2_form, opt.cost2);
  opt.binning = parse_binning(s.binning);
  opt.mode = s.mode == "mc" ? CP_MODE_MONTE_CARLO : CP_MODE_DETERMINISTIC;
  if (s.seed) {
    opt.has_seed = 1;
    opt.seed = *s.seed;
  }
  opt.tol = s.tol;
  if (s.max_entry) {
    opt.has_max_entry = 1;
    opt.max_entry = *s.max_entry;
  }
  if (s.denominator) {
    if (*s.denominator == 0) throw UsageError("--denominator must be positive");
    opt.denominator = *s.denominator;
  }
  if (s.delta_cal) {
    opt.has_delta_cal = 1;
    opt.delta_cal = *s.delta_cal;
  }
  if (s.delta_cost) {
    opt.has_delta_cost = 1;
    opt.delta_cost = *s.delta_cost;
  }
  opt.with_postprocess = s.postprocess ? 1 : 0;

  Dataset data;
  check(cp_dataset_load_csv(s.input.c_str(), &data.handle));
  Report report;
  check(run(data.handle, &opt, &report.handle));

  std::fputs(cp_report_json(report.handle), stdout);
  std::fflush(stdout);
  if (cp_report_infeasible(report.handle)) return kExitInfeasible;
  if (!s.output.empty()) {
    if (!cp_report_has_output(report.handle)) throw UsageError("this command does not produce an output table");
    check(cp_report_write_output(report.handle, s.output.c_str()));
  }
  return kExitOk;
}

int run_synth(const Settings& s) {
  if (s.synth_groups.empty()) throw UsageError("synth needs at least one --group");
  std::vector<SynthGroupArg> args;
  args.reserve(s.synth_groups.size());
  for (const auto& text : s.synth_groups) args.push_back(parse_synth_group(text));
  std::vector<cp_synth_group> groups;
  for (auto& a : args) {
    a.group.id = a.id.c_str();
    a.group.grid = a.grid.data();
    a.group.grid_length = a.grid.size();
    groups.push_back(a.group);
  }

  Dataset data;
  check(cp_dataset_synthesize(groups.data(), groups.size(), s.seed.value_or(0), &data.handle));
  check(cp_dataset_write_csv(data.handle, s.output.c_str()));

  nlohmann::ordered_json report;
  report["command"] = "synth";
  report["seed"] = s.seed.value_or(0);
  report["output"] = s.output;
  report["groups"] = nlohmann::ordered_json::array();
  for (size_t g = 0; g < cp_dataset_group_count(data.handle); ++g) {
    double mu = 0.0;
    check(cp_group_base_rate(data.handle, g, &mu));
    report["groups"].push_back({{"group", cp_dataset_group_id(data.handle, g)},
                                {"n", cp_dataset_group_size(data.handle, g)},
                                {"base_rate", mu}});
  }
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

void add_input(CLI::App* cmd, Settings& s) {
  cmd->add_option("--input", s.input, "CSV with header group,score,label")->required();
}

void add_common(CLI::App* cmd, Settings& s) {
  cmd->add_option("--group1", s.group1, "Group placed in role 1");
  cmd->add_option("--binning", s.binning, "exact | fixed:B");
}

void add_cost(CLI::App* cmd, CostFlags& flags, const std::string& name) {
  cmd->add_option("--" + name, flags.cost, "a1,b1,a2,b2")->delimiter(',');
  cmd->add_option("--weighted-" + name, flags.weighted, "rfp,rfn")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibration-preserving cost parity for probabilistic classifiers"};
  app.set_version_flag("--version", std::string(cp_version()));
  app.require_subcommand(1);

  Settings s;

  auto* stats = app.add_subcommand("stats", "Per-group base rate, rates, calibration gap");
  add_input(stats, s);
  add_common(stats, s);

  auto* calib = app.add_subcommand("calibrate-check", "Per-group calibration report");
  add_input(calib, s);
  add_common(calib, s);

  auto* post = app.add_subcommand("postprocess-calibrated", "Equal-cost withholding");
  add_input(post, s);
  add_common(post, s);
  add_cost(post, s.cost, "cost");
  post->add_option("--mode", s.mode, "deterministic | mc")
      ->check(CLI::IsMember({"deterministic", "mc"}));
  post->add_option("--seed", s.seed, "Seed for Monte Carlo withholding");
  post->add_option("--output", s.output, "Output CSV");

  auto* eo = app.add_subcommand("postprocess-eo", "Equalized odds flip-probability baseline");
  add_input(eo, s);
  add_common(eo, s);
  eo->add_option("--output", s.output, "Output CSV with expected flipped scores");

  auto* diag = app.add_subcommand("diagnose", "Impossibility diagnostics for two cost constraints");
  add_input(diag, s);
  add_common(diag, s);
  add_cost(diag, s.cost, "cost");
  add_cost(diag, s.cost2, "cost2");
  diag->add_option("--tol", s.tol, "Tolerance of the exact check")->check(CLI::PositiveNumber);
  diag->add_option("--max-entry", s.max_entry, "Asserted bound M on matrix entries");
  diag->add_option("--denominator", s.denominator, "Asserted common denominator D");
  diag->add_option("--delta-cal", s.delta_cal, "Asserted calibration slack");
  diag->add_option("--delta-cost", s.delta_cost, "Asserted cost slack");

  auto* plot = app.add_subcommand("plot-data", "Scene JSON for the FP/FN plane");
  add_input(plot, s);
  add_common(plot, s);
  add_cost(plot, s.cost, "cost");
  plot->add_flag("--postprocess", s.postprocess, "Include the post-processed point");

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--group", s.synth_groups, "NAME,N,DIST[,SHIFT]")->required();
  synth->add_option("--seed", s.seed, "Seed");
  synth->add_option("--output", s.output, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (stats->parsed()) return run_report(s, cp_run_stats);
    if (calib->parsed()) return run_report(s, cp_run_calibrate_check);
    if (post->parsed()) return run_report(s, cp_run_postprocess_calibrated);
    if (eo->parsed()) return run_report(s, cp_run_postprocess_eo);
    if (diag->parsed()) return run_report(s, cp_run_diagnose);
    if (plot->parsed()) return run_report(s, cp_run_plot_data);
    if (synth->parsed()) return run_synth(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
