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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "calparity/calib_parity.hpp"
#include "calparity/cost.hpp"
#include "calparity/dataset.hpp"
#include "calparity/eo.hpp"
#include "calparity/impossibility.hpp"
#include "calparity/metrics.hpp"
#include "calparity/rng.hpp"
#include "test_support.hpp"

namespace {

using namespace calparity;
namespace t = calparity::testing;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

CostSpec random_spec(CounterRng& rng) { return CostSpec(3.0 * rng.uniform(), 3.0 * rng.uniform()); }

CostSpec random_nonzero_spec(CounterRng& rng) {
  return CostSpec(0.05 + 3.0 * rng.uniform(), 0.05 + 3.0 * rng.uniform());
}

// Random group mixing continuous, discrete and calibrated generators.
GroupData varied_group(CounterRng& rng, const std::string& id) {
  switch (rng.next() % 3) {
    case 0:
      return t::random_group(rng, id, 50 + rng.next() % 300);
    case 1:
      return t::random_group(rng, id, 50 + rng.next() % 300, true);
    default:
      return t::random_calibrated_grid_group(rng, id);
  }
}

// 1. Mixture cost is the linear interpolation of the group and trivial costs.
Outcome interpolation_linearity() {
  CounterRng rng(101);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = varied_group(rng, "g");
    const double alpha = rng.uniform();
    const auto spec = random_spec(rng);
    const double mu = g.base_rate();
    const auto r = t::oracle_rates(g);
    const double g2 = spec.a() * r.fp + spec.b() * r.fn;
    const double triv = spec.a() * mu + spec.b() * (1.0 - mu);
    const double expected = (1.0 - alpha) * g2 + alpha * triv;
    const double got = mixture_cost(g, {alpha, mu, MixtureMode::kDeterministic, 0}, spec);
    worst = std::max(worst, std::abs(got - expected));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed <= 5.0, fmt("max |diff| = %.3g, runtime %.2f s", worst, elapsed)};
}

// 2. Post-processing equalizes the two costs.
Outcome equal_cost_exactness() {
  CounterRng rng(202);
  double worst = 0.0;
  int feasible = 0;
  int attempts = 0;
  while (feasible < 200 && attempts < 100000) {
    ++attempts;
    const auto a = varied_group(rng, "a");
    const auto b = varied_group(rng, "b");
    const auto sa = random_nonzero_spec(rng);
    const auto sb = random_nonzero_spec(rng);
    double ca = cost(rate_point(a), sa);
    double cb = cost(rate_point(b), sb);
    const bool a_first = ca >= cb;
    const GroupData& g1 = a_first ? a : b;
    const GroupData& g2 = a_first ? b : a;
    const CostSpec& s2 = a_first ? sb : sa;
    const double c1 = std::max(ca, cb);
    const double c2 = std::min(ca, cb);
    const double triv = trivial_cost(g2.base_rate(), s2);
    if (!feasibility(c1, c2, triv).feasible || triv <= c2) continue;
    ++feasible;
    const InterpolationPlan plan{compute_alpha(c1, c2, triv), g2.base_rate(),
                                 MixtureMode::kDeterministic, 0};
    worst = std::max(worst, std::abs(mixture_cost(g2, plan, s2) - c1));
  }
  return {feasible == 200 && worst <= 1e-12,
          fmt("%.0f feasible instances, max cost difference = %.3g", feasible, worst)};
}

// 3. Withholding contracts the calibration gap by (1 - alpha).
Outcome calibration_contraction() {
  CounterRng rng(303);
  double worst = -1.0;
  int cases = 0;
  for (int i = 0; i < 200; ++i) {
    const auto g = i % 2 == 0 ? t::random_group(rng, "g", 100 + rng.next() % 200, true)
                              : varied_group(rng, "g");
    const double gap = t::oracle_gap(g);
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double mixed =
          mixture_calibration_gap(g, {alpha, g.base_rate(), MixtureMode::kDeterministic, 0});
      worst = std::max(worst, mixed - (1.0 - alpha) * gap);
      ++cases;
    }
  }
  return {worst <= 1e-12, fmt("%.0f cases, max excess over (1-alpha)*gap = %.3g", cases, worst)};
}

// 4. No perfectly calibrated classifier costs more than the trivial one.
Outcome trivial_maximality() {
  CounterRng rng(404);
  double worst = -1.0;
  long long checks = 0;
  for (int k = 1; k <= 9; ++k) {
    for (int i = 0; i < 10000; ++i) {
      const auto g = t::calibrated_group_with_base_rate(rng, "g", k);
      const auto r = rate_point(g);
      for (int s = 0; s < 20; ++s) {
        const auto spec = random_spec(rng);
        worst = std::max(worst, cost(r, spec) - trivial_cost(g.base_rate(), spec));
        ++checks;
      }
    }
  }
  return {worst <= 1e-12, fmt("%.0f checks, max cost - trivial = %.3g", static_cast<double>(checks), worst)};
}

// 5. |mu * fn - (1 - mu) * fp| <= 2 * gap.
Outcome calibrated_linearity() {
  CounterRng rng(505);
  double worst = -1.0;
  for (int i = 0; i < 500; ++i) {
    GroupData g = [&] {
      switch (i % 4) {
        case 0:
          return t::random_calibrated_grid_group(rng, "g");
        case 1:
          return t::swap_label_pairs(rng, t::random_calibrated_grid_group(rng, "g"), 1 + rng.next() % 5);
        case 2:
          return t::random_group(rng, "g", 200, true);
        default:
          return t::random_group(rng, "g", 200);
      }
    }();
    const auto r = t::oracle_rates(g);
    const double mu = g.base_rate();
    const double lhs = std::abs(mu * r.fn - (1.0 - mu) * r.fp);
    worst = std::max(worst, lhs - 2.0 * t::oracle_gap(g));
  }
  return {worst <= 1e-12, fmt("max excess over 2*gap = %.3g", worst)};
}

// 6. Empirical rates of calibrated synthetic data match the analytic formulas.
Outcome exact_rate_formulas() {
  const std::size_t n = 100000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    ScoreDistribution dist;
    switch (seed % 3) {
      case 0:
        dist = Kumaraswamy{2.0, 3.0};
        break;
      case 1:
        dist = UniformGrid{{0.1, 0.35, 0.6, 0.85}};
        break;
      default:
        dist = Kumaraswamy{0.7, 0.9};
        break;
    }
    const auto g = synth_calibrated({n, dist, 0.0, seed}, "s");
    const auto r = rate_point(g);
    const auto a = analytic_rates(g);
    worst = std::max({worst, std::abs(r.fp - a.fp), std::abs(r.fn - a.fn)});
  }
  return {worst <= tol, fmt("max deviation = %.3g (tolerance %.3g)", worst, tol)};
}

// 7. The equalized-odds LP agrees with a coordinate-profiled grid oracle.
Outcome eo_lp_correctness() {
  CounterRng rng(707);
  const auto start = Clock::now();
  double worst_eq = 0.0;
  double worst_above = -1.0;
  double worst_gap_excess = -1.0;
  bool all_optimal = true;
  for (int i = 0; i < 50; ++i) {
    const auto g1 = t::random_group(rng, "a", 40 + rng.next() % 160, i % 2 == 0);
    const auto g2 = t::random_group(rng, "b", 40 + rng.next() % 160, i % 3 == 0);
    const auto sol = solve_eo(g1, g2);
    if (sol.status != LpStatus::kOptimal) {
      all_optimal = false;
      continue;
    }
    const auto o1 = t::oracle_flip(g1, sol.plan.group1.n2p, sol.plan.group1.p2n);
    const auto o2 = t::oracle_flip(g2, sol.plan.group2.n2p, sol.plan.group2.p2n);
    worst_eq = std::max({worst_eq, std::abs(o1.fp - o2.fp), std::abs(o1.fn - o2.fn)});
    const auto grid = t::eo_grid_oracle(g1, g2, 100);
    if (!grid.found) {
      all_optimal = false;
      continue;
    }
    const double obj = o1.loss + o2.loss;
    worst_above = std::max(worst_above, obj - grid.objective);
    worst_gap_excess = std::max(worst_gap_excess, grid.objective - obj - grid.bound);
  }
  const double elapsed = seconds_since(start);
  const bool pass = all_optimal && worst_eq <= 1e-9 && worst_above <= 1e-9 &&
                    worst_gap_excess <= 1e-9 && elapsed <= 60.0;
  return {pass, fmt("max rate mismatch = %.3g, max LP - oracle = %.3g, runtime %.2f s", worst_eq,
                    worst_above, elapsed)};
}

// 8. The command-line tool reports infeasibility with exit code 2.
Outcome infeasibility_reproduction() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "calparity_acceptance";
  fs::create_directories(dir);
  const fs::path input = dir / "infeasible.csv";
  {
    // Group "high" costs 0.5 under fp-only costs; "low" is perfect with base
    // rate 0.1, so its trivial cost is 0.1 < 0.5.
    std::ofstream out(input);
    out << "group,score,label\nhigh,0.5,1\nhigh,0.5,0\n";
    for (int i = 0; i < 9; ++i) out << "low,0,0\n";
    out << "low,1,1\n";
  }
  const std::string cmd = std::string("'") + CALPARITY_CLI_PATH + "' postprocess-calibrated --input '" +
                          input.string() + "' --cost 1,0,1,0 2>/dev/null";
  std::string text;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {false, "could not start the command-line tool"};
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
  const int status = pclose(pipe);
  fs::remove_all(dir);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::string reason = "<missing>";
  try {
    const auto j = nlohmann::json::parse(text);
    reason = j.at("verdict").at("reason").get<std::string>();
  } catch (const std::exception&) {
  }
  return {code == 2 && reason == "exceeds_trivial",
          "exit code " + std::to_string(code) + ", reason " + reason};
}

// Near-perfect group with exact label counts: positives scored 1 - e and
// negatives e, with e up to `noise`.
GroupData near_perfect(CounterRng& rng, const std::string& id, std::size_t pos, std::size_t neg,
                       double noise) {
  std::vector<Sample> s;
  for (std::size_t i = 0; i < pos; ++i) s.push_back({1.0 - noise * rng.uniform(), 1});
  for (std::size_t i = 0; i < neg; ++i) s.push_back({noise * rng.uniform(), 0});
  return GroupData(id, std::move(s));
}

// 9. Rates of approximately fair, approximately calibrated pairs obey the
// impossibility bound; perfect pairs pin it to zero.
Outcome approximate_impossibility() {
  CounterRng rng(909);
  // Base rates p / q; the slopes mu / (1 - mu) are in {1/3, 1/2, 1, 2, 3}.
  const std::array<std::array<int, 2>, 5> rates = {{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}}};
  const std::array<double, 5> entries = {0.0, 0.5, 1.0, 1.5, 2.0};
  const double M = 3.0;
  const std::uint64_t D = 6;
  double worst = -1.0;
  int instances = 0;
  bool zero_ok = true;
  while (instances < 100) {
    const auto r1 = rates[rng.next() % 5];
    auto r2 = rates[rng.next() % 5];
    if (r1 == r2) continue;
    auto pick = [&] { return entries[rng.next() % 5]; };
    const double ca = pick();
    const double cb = pick();
    const double cpa = pick();
    const double cpb = pick();
    if (ca + cb == 0.0 || cpa + cpb == 0.0) continue;
    const CostSpec c{ca, cb};
    const CostSpec cp{cpa, cpb};
    const CostPair pair{c, c};
    const CostPair pair_prime{cp, cp};
    const double mu1 = static_cast<double>(r1[0]) / r1[1];
    const double mu2 = static_cast<double>(r2[0]) / r2[1];
    const auto m = build_matrix(mu1, mu2, pair, pair_prime);
    if (!m.distinct || m.max_abs_entry() > M) continue;
    ++instances;

    const std::size_t k1 = 1 + rng.next() % 20;
    const std::size_t k2 = 1 + rng.next() % 20;
    const double noise = std::pow(10.0, -1.0 - 5.0 * rng.uniform());
    const auto g1 = near_perfect(rng, "a", k1 * r1[0], k1 * (r1[1] - r1[0]), noise);
    const auto g2 = near_perfect(rng, "b", k2 * r2[0], k2 * (r2[1] - r2[0]), noise);
    const auto p1 = t::oracle_rates(g1);
    const auto p2 = t::oracle_rates(g2);
    const double dcal = std::max(t::oracle_gap(g1), t::oracle_gap(g2));
    const double dcost = std::max(std::abs(c.a() * p1.fp + c.b() * p1.fn - c.a() * p2.fp - c.b() * p2.fn),
                                  std::abs(cp.a() * p1.fp + cp.b() * p1.fn - cp.a() * p2.fp - cp.b() * p2.fn));
    const auto bound = approximate_bound(m, dcal, dcost, M, D);
    for (double v : {p1.fp, p1.fn, p2.fp, p2.fn}) worst = std::max(worst, v - bound.rate_bound);

    const auto z1 = t::perfect_group("a", k1 * r1[0], k1 * (r1[1] - r1[0]));
    const auto z2 = t::perfect_group("b", k2 * r2[0], k2 * (r2[1] - r2[0]));
    const auto zero = approximate_bound(m, 0.0, 0.0, M, D);
    const auto q1 = rate_point(z1);
    const auto q2 = rate_point(z2);
    zero_ok = zero_ok && zero.rate_bound == 0.0 && q1.fp == 0.0 && q1.fn == 0.0 && q2.fp == 0.0 &&
              q2.fn == 0.0;
  }
  return {worst <= 0.0 && zero_ok,
          fmt("max rate - bound = %.3g, zero-slack bound exact: %s", worst) + (zero_ok ? "yes" : "no")};
}

// 10. Monte Carlo withholding matches the expected mixture rates.
Outcome monte_carlo_consistency() {
  const std::size_t n = 100000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  const auto g = synth_calibrated({n, Kumaraswamy{2.0, 2.0}, 0.0, 77}, "g");
  double worst = 0.0;
  bool masks_equal = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const InterpolationPlan plan{0.05 * static_cast<double>(seed) - 0.025, g.base_rate(),
                                 MixtureMode::kMonteCarlo, seed};
    const auto realized = rate_point(apply_monte_carlo(g, plan));
    const auto expected = mixture_rate_point(g, plan);
    worst = std::max({worst, std::abs(realized.fp - expected.fp), std::abs(realized.fn - expected.fn)});
    masks_equal = masks_equal && withhold(g, plan).withheld == withhold(g, plan).withheld;
  }
  return {worst <= tol && masks_equal,
          fmt("max deviation = %.3g (tolerance %.3g), identical seeds reproduce masks: ", worst, tol) +
              (masks_equal ? "yes" : "no")};
}

// 11. The cost/error audit never flags two delta-calibrated classifiers.
Outcome cost_error_relation() {
  CounterRng rng(1111);
  int flagged = 0;
  int beyond_margin = 0;
  for (int i = 0; i < 500; ++i) {
    const int k = 1 + static_cast<int>(rng.next() % 9);
    auto ref = t::calibrated_group_with_base_rate(rng, "r", k);
    auto cand = t::calibrated_group_with_base_rate(rng, "c", k);
    if (i % 2 == 1) {
      ref = t::swap_label_pairs(rng, ref, rng.next() % 4);
      cand = t::swap_label_pairs(rng, cand, rng.next() % 4);
    }
    const double mu = ref.base_rate();
    const double gap_ref = t::oracle_gap(ref);
    const double gap_cand = t::oracle_gap(cand);
    const double delta = std::max(gap_ref, gap_cand);
    const auto spec = random_nonzero_spec(rng);
    const auto v = optimality_audit(rate_point(cand), rate_point(ref), mu, delta, spec, gap_cand);
    if (v.flagged) ++flagged;
    if (v.fp_beyond_margin || v.fn_beyond_margin) ++beyond_margin;
  }
  return {flagged == 0, fmt("%.0f flagged of 500 (%.0f beat a margin but cost less)", flagged, beyond_margin)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"C1  interpolation linearity", interpolation_linearity},
      {"C2  equal-cost exactness", equal_cost_exactness},
      {"C3  calibration contraction", calibration_contraction},
      {"C4  trivial maximality", trivial_maximality},
      {"C5  calibrated linearity", calibrated_linearity},
      {"C6  exact-rate formulas", exact_rate_formulas},
      {"C7  equalized-odds LP", eo_lp_correctness},
      {"C8  infeasibility exit code", infeasibility_reproduction},
      {"C9  approximate impossibility", approximate_impossibility},
      {"C10 Monte Carlo consistency", monte_carlo_consistency},
      {"C11 cost-error relation", cost_error_relation},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
