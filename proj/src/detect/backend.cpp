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

#include "infergate/detect/backend.hpp"

#include <algorithm>
#include <cmath>

namespace infergate::detect {

namespace {

// Center-sampling nearest neighbour: dst pixel x maps to
// floor((x + 0.5) * src / dst).
std::vector<float> resize_to_chw(const Frame& frame, uint16_t dst_h,
                                 uint16_t dst_w, uint16_t channels) {
  const size_t expected = static_cast<size_t>(frame.width) * frame.height * 3;
  if (frame.width == 0 || frame.height == 0 || frame.pixels.size() != expected)
    throw DimensionError("frame pixel buffer does not match its geometry");
  if (channels != 3)
    throw DimensionError("detector input must be 3-channel");

  std::vector<float> chw(static_cast<size_t>(channels) * dst_h * dst_w);
  constexpr float kInv255 = 1.0f / 255.0f;
  for (uint32_t y = 0; y < dst_h; ++y) {
    const uint32_t sy = (2u * y + 1u) * frame.height / (2u * dst_h);
    for (uint32_t x = 0; x < dst_w; ++x) {
      const uint32_t sx = (2u * x + 1u) * frame.width / (2u * dst_w);
      const uint8_t* p = frame.pixels.data() +
                         (static_cast<size_t>(sy) * frame.width + sx) * 3;
      for (uint32_t c = 0; c < channels; ++c)
        chw[(static_cast<size_t>(c) * dst_h + y) * dst_w + x] = p[c] * kInv255;
    }
  }
  return chw;
}

}  // namespace

MicroCnnDetector::MicroCnnDetector(LayerStack stack, DetectOptions opts)
    : stack_(std::move(stack)), opts_(opts) {
  const size_t out = stack_.output_size();  // validates composition
  if (opts_.num_classes == 0 ||
      out % (RawPrediction::kBoxFields + 1 + opts_.num_classes) != 0)
    throw DimensionError("head size does not fit the configured class count");
}

std::vector<Detection> MicroCnnDetector::detect(const Frame& frame) {
  const std::vector<float> input =
      resize_to_chw(frame, stack_.input_h, stack_.input_w, stack_.input_c);
  const RawPrediction raw =
      opts_.run_quantized
          ? forward_quantized(stack_, input, opts_.num_classes)
          : forward(stack_, input, opts_.num_classes);
  std::vector<Detection> dets =
      decode(raw, opts_.confidence_threshold, frame.width, frame.height);
  return nms(std::move(dets), opts_.nms_iou_threshold);
}

std::string MicroCnnDetector::name() const {
  return opts_.run_quantized ? "micro-cnn-int8" : "micro-cnn-fp32";
}

OracleDetector::OracleDetector(sim::SceneSpec scene, OracleOptions opts)
    : scene_(std::move(scene)), opts_(opts), rng_(opts.seed) {
  scene_.validate();
}

std::vector<Detection> OracleDetector::detect(const Frame& frame) {
  const uint32_t idx = static_cast<uint32_t>(frame.seq % scene_.period);
  std::vector<Detection> out;
  std::normal_distribution<double> noise(0.0, opts_.jitter_sigma);
  const double clamp = 3.0 * opts_.jitter_sigma;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const sim::SceneObject& o : scene_.objects) {
    Box b = o.box_at(idx);
    if (opts_.jitter_sigma > 0.0) {
      auto jitter = [&](int v) {
        const double n = std::clamp(noise(rng_), -clamp, clamp);
        return static_cast<int>(std::lround(v + n));
      };
      b = Box{jitter(b.x1), jitter(b.y1), jitter(b.x2), jitter(b.y2)};
      b.x1 = std::clamp(b.x1, 0, static_cast<int>(scene_.width));
      b.x2 = std::clamp(b.x2, 0, static_cast<int>(scene_.width));
      b.y1 = std::clamp(b.y1, 0, static_cast<int>(scene_.height));
      b.y2 = std::clamp(b.y2, 0, static_cast<int>(scene_.height));
      if (!b.valid()) continue;
    }
    Detection d;
    d.label_id = o.label_id;
    d.confidence =
        opts_.jitter_sigma > 0.0
            ? static_cast<float>(0.7 + 0.3 * unit(rng_))
            : 1.0f;
    d.box = b;
    out.push_back(d);
  }

  if (opts_.fp_rate > 0.0 && unit(rng_) < opts_.fp_rate) {
    std::uniform_int_distribution<int> wd(8, 40);
    const int w = std::min<int>(wd(rng_), scene_.width - 1);
    const int h = std::min<int>(wd(rng_), scene_.height - 1);
    std::uniform_int_distribution<int> xd(0, scene_.width - w - 1);
    std::uniform_int_distribution<int> yd(0, scene_.height - h - 1);
    uint16_t max_label = 0;
    for (const sim::SceneObject& o : scene_.objects)
      max_label = std::max(max_label, o.label_id);
    std::uniform_int_distribution<int> ld(0, max_label);
    Detection fp;
    fp.label_id = static_cast<uint16_t>(ld(rng_));
    const int x = xd(rng_);
    const int y = yd(rng_);
    fp.box = Box{x, y, x + w, y + h};
    fp.confidence = static_cast<float>(0.3 + 0.35 * unit(rng_));
    out.push_back(fp);
  }
  return out;
}

std::string OracleDetector::name() const { return "oracle"; }

}  // namespace infergate::detect
