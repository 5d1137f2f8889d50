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

#ifndef CALPARITY_DATASET_HPP_
#define CALPARITY_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace calparity {

/// One classifier output h(x) together with the observed outcome y.
struct Sample {
  double score = 0.0;
  int label = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Scores and labels of a single protected group.
///
/// Immutable after construction. The constructor rejects empty groups,
/// scores outside [0,1], non-binary labels and groups where only one class
/// is present, so every GroupData has 0 < base_rate() < 1.
class GroupData {
 public:
  GroupData(std::string id, std::vector<Sample> samples);

  const std::string& id() const noexcept { return id_; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t positives() const noexcept { return positives_; }
  std::size_t negatives() const noexcept { return samples_.size() - positives_; }

  /// Pr[y = 1], the arithmetic mean of the labels.
  double base_rate() const noexcept { return base_rate_; }

  /// Copy of this group with every score replaced by `fn(sample)`.
  template <class Fn>
  GroupData with_scores(Fn&& fn) const {
    std::vector<Sample> out(samples_.begin(), samples_.end());
    for (auto& s : out) s.score = fn(s);
    return GroupData(id_, std::move(out));
  }

 private:
  std::string id_;
  std::vector<Sample> samples_;
  std::size_t positives_ = 0;
  double base_rate_ = 0.0;
};

inline double base_rate(const GroupData& g) noexcept { return g.base_rate(); }

// ---------------------------------------------------------------------------
// CSV ingestion. Header `group,score,label`; `.` decimal separator; numbers
// are parsed with std::from_chars so the current locale never matters.

std::vector<GroupData> parse_csv(std::istream& in);
std::vector<GroupData> load_csv(const std::filesystem::path& path);

/// Writes groups back out in the same schema. Scores use the shortest
/// representation that round-trips, so load/write/load is bit-exact.
void write_csv(std::ostream& out, std::span<const GroupData> groups);
void save_csv(const std::filesystem::path& path, std::span<const GroupData> groups);

/// Shortest round-trip text for a double.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Seeded synthetic generators.

struct PointMass {
  double p = 0.5;
};

/// Scores drawn uniformly from a finite list of values.
struct UniformGrid {
  std::vector<double> values;
};

/// Kumaraswamy(a, b): a beta-like family on (0,1) with a closed-form
/// inverse CDF, x = (1 - (1 - u)^(1/b))^(1/a).
struct Kumaraswamy {
  double a = 1.0;
  double b = 1.0;
};

using ScoreDistribution = std::variant<PointMass, UniformGrid, Kumaraswamy>;

struct SynthSpec {
  std::size_t n = 1000;
  ScoreDistribution scores = PointMass{};
  /// Added to the score to get Pr[y=1 | score]; the sum is clamped to [0,1].
  double miscalibration_shift = 0.0;
  std::uint64_t seed = 0;
};

/// Draws p from the score distribution, then y ~ Bernoulli(p).
GroupData synth_calibrated(const SynthSpec& spec, std::string id = "synth");

/// Draws p, then y ~ Bernoulli(clamp(p + shift, 0, 1)). With shift == 0 this
/// is exactly synth_calibrated.
GroupData synth_miscalibrated(const SynthSpec& spec, std::string id = "synth");

/// Population-level E[p] of the score distribution.
double expected_score(const ScoreDistribution& dist);

/// Population-level calibration gap of the generator,
/// E_p |clamp(p + shift) - p|.
double population_calibration_gap(const SynthSpec& spec);

}  // namespace calparity

#endif  // CALPARITY_DATASET_HPP_
