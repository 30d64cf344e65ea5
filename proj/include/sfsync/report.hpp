// Copyright 2026 The sfsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// SVG line plots of a trajectory: outputs on top, error series below.

#include <string>

#include "sfsync/sim.hpp"

namespace sfsync {

struct SvgOptions {
  int width = 900;
  int panel_height = 300;
  // Samples are decimated to at most this many points per series.
  std::size_t max_points = 2000;
};

// Self-contained SVG document. The error panel uses a log10 axis.
std::string render_svg(const Trajectory& traj, const SvgOptions& opts = {});

}  // namespace sfsync
