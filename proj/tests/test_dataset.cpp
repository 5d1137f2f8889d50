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

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "calparity/dataset.hpp"
#include "calparity/error.hpp"
#include "calparity/metrics.hpp"
#include "calparity/rng.hpp"
#include "test_support.hpp"

namespace calparity {
namespace {

using testing::make_group;

std::vector<GroupData> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse failure";
  return ErrorKind::kInvalidArgument;
}

TEST(LoadCsv, SingleGroupBaseRate) {
  auto groups = parse("group,score,label\nA,0.2,0\nA,0.8,1\n");
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].id(), "A");
  EXPECT_EQ(groups[0].base_rate(), 0.5);
}

TEST(LoadCsv, GroupsInFirstAppearanceOrder) {
  auto groups = parse("group,score,label\nA,0.5,0\nB,0.5,1\nB,0.1,0\nA,0.5,1\n");
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].id(), "A");
  EXPECT_EQ(groups[1].id(), "B");
  EXPECT_EQ(groups[1].base_rate(), 0.5);
  EXPECT_EQ(groups[1].samples()[0], (Sample{0.5, 1}));
  EXPECT_EQ(groups[1].samples()[1], (Sample{0.1, 0}));
}

TEST(LoadCsv, SingleClassGroupRejected) {
  EXPECT_EQ(parse_error_kind("group,score,label\nA,0.5,0\nB,0.5,1\nB,0.1,0\n"), ErrorKind::kParse);
}

TEST(LoadCsv, ScoreOutOfRange) {
  try {
    parse("group,score,label\nA,1.2,0\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
}

TEST(LoadCsv, MalformedRows) {
  EXPECT_EQ(parse_error_kind(""), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,label,score\nA,0,0.5\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\nA,0.5\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\nA,0.5,0,1\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\nA,abc,0\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\nA,0.5,2\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\nA,-0.1,0\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\nA,nan,0\nA,0.5,1\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\n,0.5,0\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("group,score,label\n"), ErrorKind::kParse);
}

TEST(LoadCsv, ToleratesBomCrlfAndBlankLines) {
  auto groups = parse("\xEF\xBB\xBFgroup,score,label\r\nA,0.25,0\r\n\r\nA,1,1\r\n");
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].size(), 2u);
  EXPECT_EQ(groups[0].samples()[0].score, 0.25);
}

TEST(LoadCsv, MissingFileIsIoError) {
  try {
    load_csv("/nonexistent/calparity.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(LoadCsv, RoundTripIsBitExact) {
  CounterRng rng(99);
  std::vector<GroupData> groups{testing::random_group(rng, "x", 300),
                                testing::random_group(rng, "y", 200)};
  std::ostringstream out;
  write_csv(out, groups);
  auto back = parse(out.str());
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t g = 0; g < 2; ++g) {
    ASSERT_EQ(back[g].size(), groups[g].size());
    for (std::size_t i = 0; i < back[g].size(); ++i) {
      EXPECT_EQ(back[g].samples()[i], groups[g].samples()[i]);
    }
  }
  std::ostringstream again;
  write_csv(again, back);
  EXPECT_EQ(out.str(), again.str());
}

TEST(LoadCsv, SaveAndLoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "calparity_dataset_test.csv";
  std::vector<GroupData> groups{make_group("g", {{0.1, 0}, {0.3, 1}})};
  save_csv(path, groups);
  auto back = load_csv(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].samples()[1], (Sample{0.3, 1}));
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.0), "0");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(GroupData, BaseRate) {
  EXPECT_EQ(make_group("g", {{0.1, 0}, {0.1, 1}, {0.1, 1}, {0.1, 0}}).base_rate(), 0.5);
  EXPECT_EQ(make_group("g", {{0.1, 1}, {0.1, 1}, {0.1, 1}, {0.1, 0}}).base_rate(), 0.75);
  EXPECT_EQ(base_rate(make_group("g", {{0.1, 1}, {0.1, 0}, {0.1, 0}, {0.1, 0}})), 0.25);
}

TEST(GroupData, InvariantsEnforced) {
  EXPECT_THROW(GroupData("g", {}), Error);
  EXPECT_THROW(make_group("g", {{0.5, 1}, {0.5, 1}}), Error);
  EXPECT_THROW(make_group("g", {{0.5, 0}, {0.5, 0}}), Error);
  EXPECT_THROW(make_group("g", {{1.5, 0}, {0.5, 1}}), Error);
  EXPECT_THROW(make_group("g", {{0.5, 2}, {0.5, 1}}), Error);
  EXPECT_THROW(make_group("g", {{std::nan(""), 0}, {0.5, 1}}), Error);
}

TEST(GroupData, WithScoresKeepsLabels) {
  auto g = make_group("g", {{0.2, 0}, {0.9, 1}});
  auto h = g.with_scores([](const Sample& s) { return 1.0 - s.score; });
  EXPECT_EQ(h.id(), "g");
  EXPECT_DOUBLE_EQ(h.samples()[0].score, 0.8);
  EXPECT_EQ(h.samples()[1].label, 1);
  EXPECT_EQ(h.base_rate(), g.base_rate());
}

TEST(Rng, DeterministicAndSplittable) {
  CounterRng a(5);
  CounterRng b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  CounterRng c(5);
  EXPECT_NE(c.split(1).next(), c.split(2).next());
  EXPECT_EQ(c.counter(), 0u);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Synth, PointMassBaseRate) {
  SynthSpec spec;
  spec.n = 10000;
  spec.scores = PointMass{0.5};
  spec.seed = 7;
  auto g = synth_calibrated(spec);
  EXPECT_EQ(g.size(), 10000u);
  EXPECT_NEAR(g.base_rate(), 0.5, 0.02);
  for (const auto& s : g.samples()) EXPECT_EQ(s.score, 0.5);
}

TEST(Synth, BaseRateTracksExpectedScore) {
  SynthSpec spec;
  spec.n = 20000;
  spec.scores = UniformGrid{{0.1, 0.2, 0.3, 0.4, 0.5}};
  EXPECT_DOUBLE_EQ(expected_score(spec.scores), 0.3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.seed = seed;
    EXPECT_NEAR(synth_calibrated(spec).base_rate(), 0.3, 3.0 / std::sqrt(20000.0));
  }
}

TEST(Synth, GridGapShrinks) {
  SynthSpec spec;
  spec.n = 100000;
  spec.scores = UniformGrid{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}};
  spec.seed = 3;
  auto g = synth_calibrated(spec);
  const double gap = calibration_gap(g).gap;
  EXPECT_LE(gap, 0.02);
  EXPECT_LE(gap, 4.0 * std::sqrt(9.0 / 100000.0));
}

TEST(Synth, GapBoundAcrossSeedsAndSizes) {
  const std::vector<double> grid{0.05, 0.25, 0.5, 0.75};
  for (std::size_t n : {10000u, 40000u}) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
      SynthSpec spec{n, UniformGrid{grid}, 0.0, seed};
      EXPECT_LE(calibration_gap(synth_calibrated(spec)).gap, 4.0 * std::sqrt(4.0 / n));
    }
  }
}

TEST(Synth, Deterministic) {
  SynthSpec spec{5000, Kumaraswamy{2.0, 3.0}, 0.0, 11};
  auto a = synth_calibrated(spec);
  auto b = synth_calibrated(spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.samples()[i], b.samples()[i]);
  spec.seed = 12;
  auto c = synth_calibrated(spec);
  EXPECT_NE(a.samples()[0].score, c.samples()[0].score);
}

TEST(Synth, KumaraswamyScoresInUnitInterval) {
  SynthSpec spec{20000, Kumaraswamy{0.5, 0.5}, 0.0, 4};
  auto g = synth_calibrated(spec);
  for (const auto& s : g.samples()) {
    EXPECT_GE(s.score, 0.0);
    EXPECT_LE(s.score, 1.0);
  }
  // Mean of Kumaraswamy(1, b) is 1 / (1 + b).
  EXPECT_NEAR(expected_score(Kumaraswamy{1.0, 3.0}), 0.25, 1e-9);
}

TEST(Synth, MiscalibratedShift) {
  SynthSpec spec{100000, PointMass{0.5}, 0.2, 8};
  EXPECT_DOUBLE_EQ(population_calibration_gap(spec), 0.2);
  EXPECT_NEAR(calibration_gap(synth_miscalibrated(spec)).gap, 0.2, 4.0 / std::sqrt(100000.0));
  spec.miscalibration_shift = -0.3;
  EXPECT_NEAR(calibration_gap(synth_miscalibrated(spec)).gap, 0.3, 4.0 / std::sqrt(100000.0));
}

TEST(Synth, ShiftZeroMatchesCalibrated) {
  SynthSpec spec{3000, UniformGrid{{0.2, 0.6}}, 0.0, 21};
  auto a = synth_calibrated(spec);
  auto b = synth_miscalibrated(spec);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.samples()[i], b.samples()[i]);
}

TEST(Synth, ClampedShift) {
  SynthSpec spec{1000, PointMass{0.9}, 0.2, 1};
  EXPECT_NEAR(population_calibration_gap(spec), 0.1, 1e-15);
  // Every label probability clamps to 1, so no draw can contain negatives.
  try {
    synth_miscalibrated(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
  }
}

TEST(Synth, InvalidSpecs) {
  EXPECT_THROW(synth_calibrated({0, PointMass{0.5}, 0.0, 1}), Error);
  EXPECT_THROW(synth_calibrated({10, PointMass{1.5}, 0.0, 1}), Error);
  EXPECT_THROW(synth_calibrated({10, PointMass{0.5}, 0.1, 1}), Error);
  EXPECT_THROW(synth_calibrated({10, UniformGrid{{}}, 0.0, 1}), Error);
  EXPECT_THROW(synth_calibrated({10, Kumaraswamy{0.0, 1.0}, 0.0, 1}), Error);
  EXPECT_THROW(synth_calibrated({10, PointMass{0.0}, 0.0, 1}), Error);
}

TEST(Synth, PopulationGapOfKumaraswamy) {
  // Without clamping the gap is |shift| whatever the score law.
  SynthSpec spec{10, Kumaraswamy{3.0, 3.0}, 0.0, 0};
  EXPECT_NEAR(population_calibration_gap(spec), 0.0, 1e-15);
  spec.scores = UniformGrid{{0.3, 0.4}};
  spec.miscalibration_shift = 0.1;
  EXPECT_NEAR(population_calibration_gap(spec), 0.1, 1e-15);
}

}  // namespace
}  // namespace calparity
