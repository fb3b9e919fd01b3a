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

#include <cstdint>
#include <span>
#include <vector>

#include "infergate/box.hpp"
#include "infergate/detect/layer_stack.hpp"

namespace infergate::detect {

struct Detection {
  uint16_t label_id = 0;
  float confidence = 0.0f;  // in [0,1]
  Box box;

  bool operator==(const Detection&) const = default;
};

// Head output reshaped into box slots. Each slot holds
// (cx, cy, w, h) already squashed to [0,1], an objectness logit and
// num_classes class logits.
struct RawPrediction {
  uint32_t num_boxes = 0;
  uint32_t num_classes = 0;
  std::vector<float> values;  // num_boxes * (5 + num_classes)

  static constexpr size_t kBoxFields = 4;

  size_t slot_stride() const { return kBoxFields + 1 + num_classes; }
  const float* slot(uint32_t b) const { return values.data() + b * slot_stride(); }
};

float sigmoid(float x);

// Reshapes a flat head output into prediction slots, applying sigmoid to
// the four box fields. Throws DimensionError when the length is not a
// multiple of (5 + num_classes).
RawPrediction to_prediction(std::span<const float> flat, uint32_t num_classes);

// Full float-path prediction: forward_raw then to_prediction.
RawPrediction forward(const LayerStack& stack, std::span<const float> image,
                      uint32_t num_classes);
RawPrediction forward_quantized(const LayerStack& stack,
                                std::span<const float> image,
                                uint32_t num_classes,
                                const QuantRunOptions& opts = {});

// Slots to pixel-space detections. confidence =
// sigmoid(objectness) * max softmax class probability; slots under the
// threshold and boxes with zero area after clamping are omitted.
std::vector<Detection> decode(const RawPrediction& raw, float conf_threshold,
                              int frame_w, int frame_h);

// Greedy same-label suppression: sort by confidence descending, keep a
// detection iff its IoU with every kept detection of the same label is
// below the threshold.
std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold);

}  // namespace infergate::detect
