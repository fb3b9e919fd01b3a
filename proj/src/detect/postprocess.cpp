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

#include "infergate/detect/postprocess.hpp"

#include <algorithm>
#include <cmath>

namespace infergate::detect {

float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

RawPrediction to_prediction(std::span<const float> flat, uint32_t num_classes) {
  const size_t stride = RawPrediction::kBoxFields + 1 + num_classes;
  if (flat.empty() || flat.size() % stride != 0)
    throw DimensionError("head output length " + std::to_string(flat.size()) +
                         " is not a multiple of " + std::to_string(stride));
  RawPrediction raw;
  raw.num_classes = num_classes;
  raw.num_boxes = static_cast<uint32_t>(flat.size() / stride);
  raw.values.assign(flat.begin(), flat.end());
  for (uint32_t b = 0; b < raw.num_boxes; ++b) {
    float* slot = raw.values.data() + b * stride;
    for (size_t i = 0; i < RawPrediction::kBoxFields; ++i)
      slot[i] = sigmoid(slot[i]);
  }
  return raw;
}

RawPrediction forward(const LayerStack& stack, std::span<const float> image,
                      uint32_t num_classes) {
  return to_prediction(forward_raw(stack, image), num_classes);
}

RawPrediction forward_quantized(const LayerStack& stack,
                                std::span<const float> image,
                                uint32_t num_classes,
                                const QuantRunOptions& opts) {
  return to_prediction(forward_raw_quantized(stack, image, opts), num_classes);
}

std::vector<Detection> decode(const RawPrediction& raw, float conf_threshold,
                              int frame_w, int frame_h) {
  std::vector<Detection> out;
  const size_t stride = raw.slot_stride();
  for (uint32_t b = 0; b < raw.num_boxes; ++b) {
    const float* slot = raw.values.data() + b * stride;
    const float cx = slot[0], cy = slot[1], w = slot[2], h = slot[3];
    const float obj = slot[4];
    const float* cls = slot + 5;

    // Softmax over class logits, computed against the max for stability.
    uint32_t best = 0;
    float best_logit = cls[0];
    for (uint32_t c = 1; c < raw.num_classes; ++c) {
      if (cls[c] > best_logit) {
        best_logit = cls[c];
        best = c;
      }
    }
    float denom = 0.0f;
    for (uint32_t c = 0; c < raw.num_classes; ++c)
      denom += std::exp(cls[c] - best_logit);
    const float class_prob = 1.0f / denom;

    const float confidence = sigmoid(obj) * class_prob;
    if (confidence < conf_threshold) continue;

    Detection d;
    d.label_id = static_cast<uint16_t>(best);
    d.confidence = confidence;
    d.box.x1 = std::clamp(static_cast<int>(std::lround((cx - w / 2) * frame_w)), 0, frame_w);
    d.box.x2 = std::clamp(static_cast<int>(std::lround((cx + w / 2) * frame_w)), 0, frame_w);
    d.box.y1 = std::clamp(static_cast<int>(std::lround((cy - h / 2) * frame_h)), 0, frame_h);
    d.box.y2 = std::clamp(static_cast<int>(std::lround((cy + h / 2) * frame_h)), 0, frame_h);
    if (!d.box.valid()) continue;
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold) {
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<Detection> kept;
  for (const Detection& d : dets) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.label_id == d.label_id && box_iou(k.box, d.box) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

}  // namespace infergate::detect
