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

#ifndef CALPARITY_SCENE_HPP_
#define CALPARITY_SCENE_HPP_

#include <span>
#include <string>
#include <vector>

#include "calparity/cost.hpp"
#include "calparity/dataset.hpp"
#include "calparity/metrics.hpp"

namespace calparity {

struct ScenePoint {
  std::string label;
  std::string group;
  RatePoint point;
};

struct SceneLine {
  std::string group;
  Segment segment;
};

struct SceneLevelCurve {
  CostSpec spec;
  double level = 0.0;
  Segment segment;
};

/// Plot data for the generalized FP/FN plane.
struct PlaneScene {
  std::vector<ScenePoint> points;
  std::vector<SceneLine> calibrated_lines;
  std::vector<SceneLevelCurve> level_curves;
  Segment diagonal{0.0, 1.0, 1.0, 0.0};  // fp + fn = 1, the trivial classifiers
};

/// One "original" point and one calibrated line per group, plus each group's
/// level curve at the highest group cost (the cost the others would have to
/// match). `specs` is parallel to `groups`; duplicate level curves are
/// emitted once.
PlaneScene build_scene(std::span<const GroupData> groups, std::span<const CostSpec> specs,
                       std::span<const ScenePoint> extra_points = {});

}  // namespace calparity

#endif  // CALPARITY_SCENE_HPP_
