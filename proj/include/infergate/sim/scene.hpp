/*
 * Copyright 2026 The Infergate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Synthetic scenes: flat-colored rectangles moving linearly over a flat
// background. Rendering is deterministic and ground truth equals the
// painted rectangle extents exactly, which is what makes oracle-mode
// end-to-end runs checkable.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "infergate/box.hpp"
#include "infergate/detect/postprocess.hpp"
#include "infergate/wire/protocol.hpp"

namespace infergate::sim {

class SceneError : public std::runtime_error {
 public:
  explicit SceneError(const std::string& what) : std::runtime_error(what) {}
};

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct SceneObject {
  uint16_t label_id = 0;
  int x0 = 0, y0 = 0;      // top-left at frame index 0
  int w = 0, h = 0;
  double vx = 0.0, vy = 0.0;  // pixels per frame index
  Rgb color;

  Box box_at(uint32_t index) const;
};

struct SceneSpec {
  uint16_t width = 640;
  uint16_t height = 480;
  Rgb background{32, 32, 32};
  uint32_t period = 300;  // frame indices wrap modulo period
  std::vector<SceneObject> objects;

  // Throws SceneError unless every object stays inside the frame for all
  // indices in [0, period).
  void validate() const;
};

// Renders index `index mod period`. Ground truth boxes equal the painted
// rectangles; objects are painted in order, so overlapping later objects
// occlude earlier ones in pixels but not in truth.
struct RenderedFrame {
  wire::FramePayload frame;
  std::vector<detect::Detection> truth;  // confidence 1.0
};

RenderedFrame render_frame(const SceneSpec& scene, uint32_t index);

// K objects with seeded positions, sizes, velocities and labels. Objects
// are laid out on a jittered grid, which keeps them disjoint while the
// grid has room; beyond that they may overlap (the crowded regime).
SceneSpec make_scene(uint16_t width, uint16_t height, uint32_t num_objects,
                     uint32_t num_classes, uint64_t seed,
                     uint32_t period = 300, bool moving = true);

// Text serialization, shared between the sim CLI and the gateway's
// oracle detector.
void save_scene(const SceneSpec& scene, const std::string& path);
SceneSpec load_scene(const std::string& path);

}  // namespace infergate::sim
