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

#include "calparity/scene.hpp"

#include <algorithm>

#include "calparity/error.hpp"

namespace calparity {

PlaneScene build_scene(std::span<const GroupData> groups, std::span<const CostSpec> specs,
                       std::span<const ScenePoint> extra_points) {
  require(!groups.empty(), "scene needs at least one group");
  require(specs.size() == groups.size(), "one cost spec per group is required");

  PlaneScene scene;
  double reference = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto r = rate_point(groups[i]);
    scene.points.push_back({"original", groups[i].id(), r});
    scene.calibrated_lines.push_back({groups[i].id(), calibrated_line(groups[i].base_rate())});
    reference = std::max(reference, cost(r, specs[i]));
  }
  for (const auto& p : extra_points) scene.points.push_back(p);

  for (const auto& spec : specs) {
    const bool seen = std::any_of(scene.level_curves.begin(), scene.level_curves.end(),
                                  [&](const SceneLevelCurve& lc) { return lc.spec == spec; });
    if (seen) continue;
    if (auto seg = level_curve(spec, reference)) {
      scene.level_curves.push_back({spec, reference, *seg});
    }
  }
  return scene;
}

}  // namespace calparity
