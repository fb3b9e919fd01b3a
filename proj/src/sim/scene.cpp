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

#include "infergate/sim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace infergate::sim {

Box SceneObject::box_at(uint32_t index) const {
  const int x = x0 + static_cast<int>(std::lround(vx * index));
  const int y = y0 + static_cast<int>(std::lround(vy * index));
  return Box{x, y, x + w, y + h};
}

void SceneSpec::validate() const {
  if (width == 0 || height == 0) throw SceneError("zero frame geometry");
  if (period == 0) throw SceneError("period must be >= 1");
  for (size_t i = 0; i < objects.size(); ++i) {
    const SceneObject& o = objects[i];
    if (o.w <= 0 || o.h <= 0)
      throw SceneError("object " + std::to_string(i) + ": empty rectangle");
    // Motion is linear in the index, so the extreme positions are at the
    // endpoints of [0, period).
    for (uint32_t idx : {0u, period - 1}) {
      const Box b = o.box_at(idx);
      if (b.x1 < 0 || b.y1 < 0 || b.x2 > width || b.y2 > height)
        throw SceneError("object " + std::to_string(i) +
                         " leaves the frame at index " + std::to_string(idx));
    }
  }
}

RenderedFrame render_frame(const SceneSpec& scene, uint32_t index) {
  const uint32_t idx = index % scene.period;
  RenderedFrame out;
  out.frame.width = scene.width;
  out.frame.height = scene.height;
  out.frame.pixel_format = wire::PixelFormat::RGB24;
  out.frame.pixels.resize(static_cast<size_t>(scene.width) * scene.height * 3);

  uint8_t* px = out.frame.pixels.data();
  for (size_t i = 0; i < out.frame.pixels.size(); i += 3) {
    px[i] = scene.background.r;
    px[i + 1] = scene.background.g;
    px[i + 2] = scene.background.b;
  }

  for (const SceneObject& o : scene.objects) {
    const Box b = o.box_at(idx);
    for (int y = b.y1; y < b.y2; ++y) {
      uint8_t* row = px + (static_cast<size_t>(y) * scene.width + b.x1) * 3;
      for (int x = b.x1; x < b.x2; ++x) {
        *row++ = o.color.r;
        *row++ = o.color.g;
        *row++ = o.color.b;
      }
    }
    detect::Detection d;
    d.label_id = o.label_id;
    d.confidence = 1.0f;
    d.box = b;
    out.truth.push_back(d);
  }
  return out;
}

SceneSpec make_scene(uint16_t width, uint16_t height, uint32_t num_objects,
                     uint32_t num_classes, uint64_t seed, uint32_t period,
                     bool moving) {
  if (num_classes == 0) throw SceneError("need at least one class");
  std::mt19937_64 rng(seed);
  SceneSpec scene;
  scene.width = width;
  scene.height = height;
  scene.period = period;
  scene.background = Rgb{24, 28, 36};

  // Grid cells big enough for one object plus motion margin.
  const uint32_t cols = std::max(1, width / 64);
  const uint32_t rows = std::max(1, height / 64);
  std::vector<uint32_t> cells(static_cast<size_t>(cols) * rows);
  for (uint32_t i = 0; i < cells.size(); ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), rng);

  std::uniform_int_distribution<int> size_dist(12, 40);
  std::uniform_int_distribution<uint32_t> label_dist(0, num_classes - 1);
  std::uniform_real_distribution<double> v_dist(-0.5, 0.5);
  std::uniform_int_distribution<int> color_dist(64, 255);

  for (uint32_t i = 0; i < num_objects; ++i) {
    SceneObject o;
    o.label_id = static_cast<uint16_t>(label_dist(rng));
    o.w = std::min<int>(size_dist(rng), width - 2);
    o.h = std::min<int>(size_dist(rng), height - 2);
    o.color = Rgb{static_cast<uint8_t>(color_dist(rng)),
                  static_cast<uint8_t>(color_dist(rng)),
                  static_cast<uint8_t>(color_dist(rng))};
    if (moving) {
      o.vx = v_dist(rng);
      o.vy = v_dist(rng);
    }

    // Travel over the whole period determines the safe placement window.
    const int dx = static_cast<int>(std::lround(o.vx * (period - 1)));
    const int dy = static_cast<int>(std::lround(o.vy * (period - 1)));
    const int lo_x = std::max(0, -dx);
    const int hi_x = std::min<int>(width - o.w, width - o.w - dx);
    const int lo_y = std::max(0, -dy);
    const int hi_y = std::min<int>(height - o.h, height - o.h - dy);
    if (hi_x < lo_x || hi_y < lo_y) {
      o.vx = o.vy = 0.0;
    }

    const uint32_t cell = cells[i % cells.size()];
    const int cell_x = static_cast<int>(cell % cols) * (width / cols);
    const int cell_y = static_cast<int>(cell / cols) * (height / rows);
    const int wl = std::max(lo_x, std::min<int>(cell_x, std::max(lo_x, hi_x)));
    const int wt = std::max(lo_y, std::min<int>(cell_y, std::max(lo_y, hi_y)));
    o.x0 = std::clamp(wl, lo_x, std::max(lo_x, hi_x));
    o.y0 = std::clamp(wt, lo_y, std::max(lo_y, hi_y));
    scene.objects.push_back(o);
  }
  scene.validate();
  return scene;
}

void save_scene(const SceneSpec& scene, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw SceneError("cannot open " + path + " for writing");
  f << "# infergate-scene v1\n";
  f << "size " << scene.width << ' ' << scene.height << '\n';
  f << "bg " << int(scene.background.r) << ' ' << int(scene.background.g) << ' '
    << int(scene.background.b) << '\n';
  f << "period " << scene.period << '\n';
  for (const SceneObject& o : scene.objects) {
    f << "object " << o.label_id << ' ' << o.x0 << ' ' << o.y0 << ' ' << o.w
      << ' ' << o.h << ' ' << o.vx << ' ' << o.vy << ' ' << int(o.color.r)
      << ' ' << int(o.color.g) << ' ' << int(o.color.b) << '\n';
  }
  if (!f) throw SceneError("write failed for " + path);
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SceneError("cannot open " + path);
  SceneSpec scene;
  scene.objects.clear();
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    auto fail = [&] {
      throw SceneError(path + ":" + std::to_string(lineno) + ": bad " + key +
                       " line");
    };
    if (key == "size") {
      if (!(is >> scene.width >> scene.height)) fail();
    } else if (key == "bg") {
      int r, g, b;
      if (!(is >> r >> g >> b)) fail();
      scene.background = Rgb{static_cast<uint8_t>(r), static_cast<uint8_t>(g),
                             static_cast<uint8_t>(b)};
    } else if (key == "period") {
      if (!(is >> scene.period)) fail();
    } else if (key == "object") {
      SceneObject o;
      int r, g, b;
      if (!(is >> o.label_id >> o.x0 >> o.y0 >> o.w >> o.h >> o.vx >> o.vy >>
            r >> g >> b))
        fail();
      o.color = Rgb{static_cast<uint8_t>(r), static_cast<uint8_t>(g),
                    static_cast<uint8_t>(b)};
      scene.objects.push_back(o);
    } else {
      throw SceneError(path + ":" + std::to_string(lineno) +
                       ": unknown key " + key);
    }
  }
  scene.validate();
  return scene;
}

}  // namespace infergate::sim
