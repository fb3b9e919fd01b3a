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

// Monitoring overlay: each detection gets a 2-px border drawn just
// inside its box in the class color, and its label text (white, 5x7
// bitmap glyphs) above the top-left corner, clamped into the frame.
// Every other pixel is left untouched.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infergate/detect/postprocess.hpp"
#include "infergate/frame.hpp"
#include "infergate/wire/protocol.hpp"

namespace infergate::gateway {

inline constexpr int kBorderPx = 2;
inline constexpr int kGlyphW = 5;
inline constexpr int kGlyphH = 7;
inline constexpr int kGlyphAdvance = 6;  // 5-px glyph + 1-px gap

struct Color {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  bool operator==(const Color&) const = default;
};

// Stable per-class palette (8 entries, wraps by modulo).
Color class_color(uint16_t label_id);

// Rasterizes ASCII text (case-insensitive; unknown glyphs become a
// filled box) with its top-left at (x, y); pixels outside the frame are
// clipped.
void draw_text(wire::FramePayload& frame, int x, int y,
               const std::string& text, Color color);

// src pixels plus per-detection borders and labels. class_names[i] is
// label i's text; out-of-range labels render as "c<id>".
wire::FramePayload overlay(const wire::FramePayload& src,
                           const std::vector<detect::Detection>& detections,
                           const std::vector<std::string>& class_names);
wire::FramePayload overlay(const Frame& src,
                           const std::vector<detect::Detection>& detections,
                           const std::vector<std::string>& class_names);

}  // namespace infergate::gateway
