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

#include "calparity/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "calparity/error.hpp"
#include "calparity/rng.hpp"

namespace calparity {

GroupData::GroupData(std::string id, std::vector<Sample> samples)
    : id_(std::move(id)), samples_(std::move(samples)) {
  require(!samples_.empty(), "group '" + id_ + "' has no samples");
  for (const auto& s : samples_) {
    require(std::isfinite(s.score) && s.score >= 0.0 && s.score <= 1.0,
            "group '" + id_ + "': score " + format_double(s.score) +
                " outside [0,1]");
    require(s.label == 0 || s.label == 1,
            "group '" + id_ + "': label must be 0 or 1");
    positives_ += static_cast<std::size_t>(s.label);
  }
  require(positives_ > 0 && positives_ < samples_.size(),
          "group '" + id_ + "' contains a single class (base rate 0 or 1)");
  base_rate_ = static_cast<double>(positives_) / static_cast<double>(samples_.size());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

std::vector<GroupData> parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) fail(ErrorKind::kParse, "empty input: missing header");
  ++line_no;
  std::string_view header = line;
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  auto cols = split_fields(header);
  if (cols.size() != 3 || cols[0] != "group" || cols[1] != "score" || cols[2] != "label") {
    parse_fail(line_no, "header must be 'group,score,label'");
  }

  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<Sample>> by_group;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 3) {
      parse_fail(line_no, "expected 3 columns, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) parse_fail(line_no, "empty group id");

    Sample s;
    auto sv = fields[1];
    auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), s.score);
    if (ec != std::errc() || p != sv.data() + sv.size() || sv.empty()) {
      parse_fail(line_no, "cannot parse score '" + std::string(sv) + "'");
    }
    if (!(s.score >= 0.0 && s.score <= 1.0)) {
      parse_fail(line_no, "score " + std::string(sv) + " out of range [0,1]");
    }
    if (fields[2] == "0") {
      s.label = 0;
    } else if (fields[2] == "1") {
      s.label = 1;
    } else {
      parse_fail(line_no, "label must be 0 or 1, got '" + std::string(fields[2]) + "'");
    }

    std::string gid(fields[0]);
    auto it = by_group.find(gid);
    if (it == by_group.end()) {
      order.push_back(gid);
      it = by_group.emplace(gid, std::vector<Sample>{}).first;
    }
    it->second.push_back(s);
  }

  if (order.empty()) fail(ErrorKind::kParse, "no data rows");

  std::vector<GroupData> groups;
  groups.reserve(order.size());
  for (const auto& gid : order) {
    auto& samples = by_group[gid];
    std::size_t pos = 0;
    for (const auto& s : samples) pos += static_cast<std::size_t>(s.label);
    if (pos == 0 || pos == samples.size()) {
      fail(ErrorKind::kParse,
           "group '" + gid + "' contains a single class (base rate " +
               (pos == 0 ? "0" : "1") + ")");
    }
    groups.emplace_back(gid, std::move(samples));
  }
  return groups;
}

std::vector<GroupData> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return parse_csv(in);
}

void write_csv(std::ostream& out, std::span<const GroupData> groups) {
  out << "group,score,label\n";
  for (const auto& g : groups) {
    for (const auto& s : g.samples()) {
      out << g.id() << ',' << format_double(s.score) << ',' << s.label << '\n';
    }
  }
}

void save_csv(const std::filesystem::path& path, std::span<const GroupData> groups) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  write_csv(out, groups);
}

// ---------------------------------------------------------------------------

namespace {

double kumaraswamy_quantile(const Kumaraswamy& k, double u) {
  return std::pow(1.0 - std::pow(1.0 - u, 1.0 / k.b), 1.0 / k.a);
}

void validate(const ScoreDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          require(d.p >= 0.0 && d.p <= 1.0, "point mass outside [0,1]");
        } else if constexpr (std::is_same_v<T, UniformGrid>) {
          require(!d.values.empty(), "empty score grid");
          for (double v : d.values) require(v >= 0.0 && v <= 1.0, "grid value outside [0,1]");
        } else {
          require(d.a > 0.0 && d.b > 0.0, "Kumaraswamy parameters must be positive");
        }
      },
      dist);
}

double label_probability(double p, double shift) {
  return std::clamp(p + shift, 0.0, 1.0);
}

// Expectation of f(p) under the score distribution. The continuous family is
// integrated with a midpoint rule on the quantile function.
template <class Fn>
double expect(const ScoreDistribution& dist, Fn&& f) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return f(d.p);
        } else if constexpr (std::is_same_v<T, UniformGrid>) {
          double acc = 0.0;
          for (double v : d.values) acc += f(v);
          return acc / static_cast<double>(d.values.size());
        } else {
          constexpr int kNodes = 200000;
          double acc = 0.0;
          for (int i = 0; i < kNodes; ++i) {
            acc += f(kumaraswamy_quantile(d, (i + 0.5) / kNodes));
          }
          return acc / kNodes;
        }
      },
      dist);
}

// True when every score in the support maps to a label probability of
// exactly 0 or exactly 1, so only one class can ever be drawn per score.
bool label_probabilities_degenerate(const ScoreDistribution& dist, double shift) {
  auto deg = [&](double p) {
    double q = label_probability(p, shift);
    return q <= 0.0 || q >= 1.0;
  };
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return deg(d.p);
        } else if constexpr (std::is_same_v<T, UniformGrid>) {
          return std::all_of(d.values.begin(), d.values.end(), deg);
        } else {
          return shift >= 1.0 || shift <= -1.0;
        }
      },
      dist);
}

double draw_score(const ScoreDistribution& dist, CounterRng& rng) {
  double u = rng.uniform();
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return d.p;
        } else if constexpr (std::is_same_v<T, UniformGrid>) {
          auto k = d.values.size();
          auto idx = std::min(static_cast<std::size_t>(u * static_cast<double>(k)), k - 1);
          return d.values[idx];
        } else {
          return kumaraswamy_quantile(d, u);
        }
      },
      dist);
}

GroupData generate(const SynthSpec& spec, std::string id) {
  require(spec.n >= 1, "synthetic group needs n >= 1");
  validate(spec.scores);
  if (label_probabilities_degenerate(spec.scores, spec.miscalibration_shift)) {
    fail(ErrorKind::kDegenerate,
         "score distribution yields a single class: every label probability is 0 or 1");
  }
  // Scores and labels come from separate streams so that changing the shift
  // leaves the drawn scores untouched.
  CounterRng root(spec.seed);
  CounterRng score_rng = root.split(1);
  CounterRng label_rng = root.split(2);
  std::vector<Sample> samples(spec.n);
  for (auto& s : samples) {
    s.score = draw_score(spec.scores, score_rng);
    s.label = label_rng.bernoulli(label_probability(s.score, spec.miscalibration_shift)) ? 1 : 0;
  }
  std::size_t pos = 0;
  for (const auto& s : samples) pos += static_cast<std::size_t>(s.label);
  if (pos == 0 || pos == samples.size()) {
    fail(ErrorKind::kDegenerate, "synthetic draw produced a single class; increase n or change seed");
  }
  return GroupData(std::move(id), std::move(samples));
}

}  // namespace

GroupData synth_calibrated(const SynthSpec& spec, std::string id) {
  require(spec.miscalibration_shift == 0.0, "synth_calibrated requires a zero miscalibration shift");
  return generate(spec, std::move(id));
}

GroupData synth_miscalibrated(const SynthSpec& spec, std::string id) {
  return generate(spec, std::move(id));
}

double expected_score(const ScoreDistribution& dist) {
  validate(dist);
  if (const auto* k = std::get_if<Kumaraswamy>(&dist)) {
    // b * B(1 + 1/a, b)
    const double x = 1.0 + 1.0 / k->a;
    return std::exp(std::log(k->b) + std::lgamma(x) + std::lgamma(k->b) - std::lgamma(x + k->b));
  }
  return expect(dist, [](double p) { return p; });
}

double population_calibration_gap(const SynthSpec& spec) {
  validate(spec.scores);
  return expect(spec.scores, [&](double p) {
    return std::abs(label_probability(p, spec.miscalibration_shift) - p);
  });
}

}  // namespace calparity
