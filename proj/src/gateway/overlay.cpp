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

#include "infergate/gateway/overlay.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace infergate::gateway {

namespace {

constexpr std::array<Color, 8> kPalette = {{
    {230, 60, 60},    // red
    {60, 200, 60},    // green
    {70, 110, 240},   // blue
    {230, 200, 40},   // yellow
    {220, 70, 220},   // magenta
    {50, 210, 210},   // cyan
    {240, 140, 40},   // orange
    {150, 80, 230},   // violet
}};

// 5x7 glyphs, one byte per row, low 5 bits used, bit 4 = leftmost column.
struct Glyph {
  char ch;
  std::array<uint8_t, 7> rows;
};

constexpr Glyph kGlyphs[] = {
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x13, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x1B, 0x11}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
};

constexpr std::array<uint8_t, 7> kUnknownGlyph = {0x1F, 0x1F, 0x1F, 0x1F,
                                                  0x1F, 0x1F, 0x1F};

const std::array<uint8_t, 7>& glyph_rows(char c) {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const Glyph& g : kGlyphs)
    if (g.ch == up) return g.rows;
  return kUnknownGlyph;
}

void put_pixel(wire::FramePayload& frame, int x, int y, Color c) {
  if (x < 0 || y < 0 || x >= frame.width || y >= frame.height) return;
  uint8_t* p =
      frame.pixels.data() + (static_cast<size_t>(y) * frame.width + x) * 3;
  p[0] = c.r;
  p[1] = c.g;
  p[2] = c.b;
}

void fill_rows(wire::FramePayload& frame, int y0, int y1, int x0, int x1,
               Color c) {
  y0 = std::max(y0, 0);
  y1 = std::min<int>(y1, frame.height);
  x0 = std::max(x0, 0);
  x1 = std::min<int>(x1, frame.width);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) put_pixel(frame, x, y, c);
}

}  // namespace

Color class_color(uint16_t label_id) { return kPalette[label_id % kPalette.size()]; }

void draw_text(wire::FramePayload& frame, int x, int y,
               const std::string& text, Color color) {
  int cx = x;
  for (char ch : text) {
    const auto& rows = glyph_rows(ch);
    for (int ry = 0; ry < kGlyphH; ++ry)
      for (int rx = 0; rx < kGlyphW; ++rx)
        if (rows[ry] & (1u << (kGlyphW - 1 - rx)))
          put_pixel(frame, cx + rx, y + ry, color);
    cx += kGlyphAdvance;
  }
}

wire::FramePayload overlay(const wire::FramePayload& src,
                           const std::vector<detect::Detection>& detections,
                           const std::vector<std::string>& class_names) {
  wire::FramePayload out = src;
  for (const detect::Detection& d : detections) {
    const Color c = class_color(d.label_id);
    const Box& b = d.box;
    // Borders sit inside the box so the painted extent equals the
    // reported coordinates exactly.
    const int inner_top = std::min(b.y1 + kBorderPx, b.y2);
    const int inner_bot = std::max(b.y2 - kBorderPx, inner_top);
    fill_rows(out, b.y1, inner_top, b.x1, b.x2, c);                // top
    fill_rows(out, inner_bot, b.y2, b.x1, b.x2, c);                // bottom
    const int inner_left = std::min(b.x1 + kBorderPx, b.x2);
    const int inner_right = std::max(b.x2 - kBorderPx, inner_left);
    fill_rows(out, inner_top, inner_bot, b.x1, inner_left, c);     // left
    fill_rows(out, inner_top, inner_bot, inner_right, b.x2, c);    // right

    const std::string label = d.label_id < class_names.size()
                                  ? class_names[d.label_id]
                                  : "c" + std::to_string(d.label_id);
    const int ty = std::max(0, b.y1 - (kGlyphH + 1));
    const int tx = std::max(0, b.x1);
    draw_text(out, tx, ty, label, Color{255, 255, 255});
  }
  return out;
}

wire::FramePayload overlay(const Frame& src,
                           const std::vector<detect::Detection>& detections,
                           const std::vector<std::string>& class_names) {
  wire::FramePayload payload;
  payload.width = src.width;
  payload.height = src.height;
  payload.pixel_format = wire::PixelFormat::RGB24;
  payload.pixels = src.pixels;
  return overlay(payload, detections, class_names);
}

}  // namespace infergate::gateway
