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

#pragma once

#include <algorithm>
#include <cstdint>

namespace infergate {

// Axis-aligned box in pixel coordinates, half-open: [x1, x2) x [y1, y2).
// A valid box has x1 < x2 and y1 < y2.
struct Box {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool operator==(const Box&) const = default;

  long long area() const {
    if (x2 <= x1 || y2 <= y1) return 0;
    return static_cast<long long>(x2 - x1) * (y2 - y1);
  }
  bool valid() const { return x1 < x2 && y1 < y2; }
};

// Intersection-over-union; 0 when either box is degenerate or the boxes
// are disjoint.
inline double box_iou(const Box& a, const Box& b) {
  const long long area_a = a.area();
  const long long area_b = b.area();
  if (area_a == 0 || area_b == 0) return 0.0;
  const int ix1 = std::max(a.x1, b.x1);
  const int iy1 = std::max(a.y1, b.y1);
  const int ix2 = std::min(a.x2, b.x2);
  const int iy2 = std::min(a.y2, b.y2);
  if (ix2 <= ix1 || iy2 <= iy1) return 0.0;
  const long long inter = static_cast<long long>(ix2 - ix1) * (iy2 - iy1);
  return static_cast<double>(inter) /
         static_cast<double>(area_a + area_b - inter);
}

}  // namespace infergate
