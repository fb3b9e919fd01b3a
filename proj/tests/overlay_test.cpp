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

#include <algorithm>

#include "doctest.h"
#include "infergate/gateway/overlay.hpp"

using namespace infergate;
using namespace infergate::gateway;

namespace {

wire::FramePayload blank(uint16_t w, uint16_t h) {
  wire::FramePayload f;
  f.width = w;
  f.height = h;
  f.pixel_format = wire::PixelFormat::RGB24;
  f.pixels.assign(static_cast<size_t>(w) * h * 3, 0);
  return f;
}

Color pixel_at(const wire::FramePayload& f, int x, int y) {
  const uint8_t* p = f.pixels.data() + (static_cast<size_t>(y) * f.width + x) * 3;
  return Color{p[0], p[1], p[2]};
}

detect::Detection det(uint16_t label, const Box& box) {
  detect::Detection d;
  d.label_id = label;
  d.confidence = 0.9f;
  d.box = box;
  return d;
}

// The monitoring-fidelity primitive: find the painted border's extent.
Box recover_rect(const wire::FramePayload& f, Color c) {
  int min_x = f.width, min_y = f.height, max_x = -1, max_y = -1;
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      if (pixel_at(f, x, y) == c) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
      }
  REQUIRE(max_x >= 0);
  return Box{min_x, min_y, max_x + 1, max_y + 1};
}

}  // namespace

TEST_SUITE("overlay") {

TEST_CASE("no detections leave the frame untouched") {
  wire::FramePayload src = blank(32, 24);
  src.pixels[100] = 77;  // a non-background byte must survive too
  wire::FramePayload out = overlay(src, {}, {"ball"});
  CHECK(out.pixels == src.pixels);
  CHECK(out.width == src.width);
  CHECK(out.height == src.height);
}

TEST_CASE("border paints exactly the reported extent") {
  wire::FramePayload src = blank(100, 80);
  const Box box{20, 15, 60, 45};
  wire::FramePayload out = overlay(src, {det(3, box)}, {});
  const Color ring = class_color(3);

  // Recovered rectangle equals the detection coordinates exactly; this
  // is what lets a monitor client check results against pixels.
  CHECK(recover_rect(out, ring) == box);

  // Interior is untouched; every painted pixel is ring color on the
  // 2-px border or white in the text band above the corner.
  const std::string label_text = "c3";  // no class list configured
  const int tx = box.x1, ty = box.y1 - (kGlyphH + 1);
  const int text_w = static_cast<int>(label_text.size()) * kGlyphAdvance;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      const Color c = pixel_at(out, x, y);
      const bool in_box = x >= box.x1 && x < box.x2 && y >= box.y1 && y < box.y2;
      const bool in_interior = x >= box.x1 + kBorderPx && x < box.x2 - kBorderPx &&
                               y >= box.y1 + kBorderPx && y < box.y2 - kBorderPx;
      if (in_box && !in_interior) {
        CHECK(c == ring);
      } else if (c == Color{255, 255, 255}) {
        CHECK(x >= tx);
        CHECK(x < tx + text_w);
        CHECK(y >= ty);
        CHECK(y < ty + kGlyphH);
      } else {
        CHECK(c == Color{0, 0, 0});
      }
    }
}

TEST_CASE("boxes flush with the frame edges clip safely") {
  wire::FramePayload src = blank(40, 30);
  const Box box{0, 0, 40, 30};
  wire::FramePayload out = overlay(src, {det(0, box)}, {});
  REQUIRE(out.pixels.size() == src.pixels.size());

  // Far corner and mid-edges show the border; the center is untouched.
  CHECK(pixel_at(out, 39, 29) == class_color(0));
  CHECK(pixel_at(out, 39, 15) == class_color(0));
  CHECK(pixel_at(out, 20, 29) == class_color(0));
  CHECK(pixel_at(out, 20, 15) == Color{0, 0, 0});
}

TEST_CASE("degenerate-thin boxes do not explode") {
  wire::FramePayload src = blank(40, 30);
  // 3px wide: inner_left/inner_right cross over; the fill must clamp.
  wire::FramePayload out = overlay(src, {det(1, Box{10, 10, 13, 20})}, {});
  CHECK(recover_rect(out, class_color(1)) == Box{10, 10, 13, 20});
}

TEST_CASE("label text lands above the corner and clamps at the top") {
  wire::FramePayload src = blank(64, 48);
  const Box box{10, 5, 30, 25};  // y1 - 8 would be negative
  wire::FramePayload out = overlay(src, {det(0, box)}, {});

  bool any_white = false;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      if (pixel_at(out, x, y) == Color{255, 255, 255}) {
        any_white = true;
        CHECK(x >= 10);
        CHECK(x < 10 + 2 * kGlyphAdvance);  // "c0"
        CHECK(y >= 0);
        CHECK(y < kGlyphH);
      }
  CHECK(any_white);
}

TEST_CASE("configured class names drive the label text") {
  wire::FramePayload src = blank(64, 48);
  const Box box{10, 20, 40, 40};
  wire::FramePayload a = overlay(src, {det(0, box)}, {"ball"});
  wire::FramePayload b = overlay(src, {det(0, box)}, {"cup"});
  CHECK(a.pixels != b.pixels);  // different text, same geometry

  wire::FramePayload c = overlay(src, {det(0, box)}, {"BALL"});
  CHECK(a.pixels == c.pixels);  // glyphs are case-insensitive
}

TEST_CASE("palette wraps and stays distinct within a cycle") {
  CHECK(class_color(0) == class_color(8));
  CHECK(class_color(3) == class_color(11));
  for (uint16_t i = 0; i < 8; ++i)
    for (uint16_t j = static_cast<uint16_t>(i + 1); j < 8; ++j)
      CHECK(!(class_color(i) == class_color(j)));
}

TEST_CASE("glyph rendering hits the expected pixels") {
  wire::FramePayload f = blank(16, 12);
  draw_text(f, 2, 3, "I", Color{255, 255, 255});
  // 'I' top row is .###. ; the serif row spans columns 1..3.
  CHECK(pixel_at(f, 2, 3) == Color{0, 0, 0});
  CHECK(pixel_at(f, 3, 3) == Color{255, 255, 255});
  CHECK(pixel_at(f, 4, 3) == Color{255, 255, 255});
  CHECK(pixel_at(f, 5, 3) == Color{255, 255, 255});
  CHECK(pixel_at(f, 6, 3) == Color{0, 0, 0});
  // Stem: center column set mid-glyph.
  CHECK(pixel_at(f, 4, 6) == Color{255, 255, 255});
  CHECK(pixel_at(f, 3, 6) == Color{0, 0, 0});

  // Unknown characters render as a filled block rather than vanishing.
  wire::FramePayload g = blank(16, 12);
  draw_text(g, 0, 0, "?", Color{255, 255, 255});
  for (int y = 0; y < kGlyphH; ++y)
    for (int x = 0; x < kGlyphW; ++x)
      CHECK(pixel_at(g, x, y) == Color{255, 255, 255});

  // Clipping: drawing at a negative origin must not crash or wrap.
  wire::FramePayload h = blank(8, 8);
  draw_text(h, -3, -3, "W", Color{255, 255, 255});
  CHECK(h.pixels.size() == 8u * 8u * 3u);
}

TEST_CASE("frame-struct overlay carries geometry through") {
  Frame f;
  f.width = 20;
  f.height = 10;
  f.pixels.assign(20 * 10 * 3, 0);
  wire::FramePayload out = overlay(f, {det(2, Box{2, 2, 10, 8})}, {"a", "b", "x"});
  CHECK(out.width == 20);
  CHECK(out.height == 10);
  CHECK(out.pixel_format == wire::PixelFormat::RGB24);
  CHECK(recover_rect(out, class_color(2)) == Box{2, 2, 10, 8});
}

}  // TEST_SUITE("overlay")
