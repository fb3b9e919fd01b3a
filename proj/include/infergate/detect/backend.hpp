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

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "infergate/detect/postprocess.hpp"
#include "infergate/frame.hpp"
#include "infergate/sim/scene.hpp"

namespace infergate::detect {

// Pluggable inference engine. detect() maps a raw frame to labelled
// boxes in that frame's own pixel coordinates. Implementations are
// driven from a single inference thread and need not be thread-safe.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  virtual std::vector<Detection> detect(const Frame& frame) = 0;
  virtual std::string name() const = 0;
};

struct DetectOptions {
  float confidence_threshold = 0.25f;
  double nms_iou_threshold = 0.45;
  uint32_t num_classes = 4;
  bool run_quantized = false;  // use the int8 kernels where weights allow
};

// Runs the layer-stack network: nearest-neighbour resize to the model
// input, scale to [0,1] CHW, forward, decode at the frame's resolution,
// then greedy NMS.
class MicroCnnDetector : public DetectorBackend {
 public:
  MicroCnnDetector(LayerStack stack, DetectOptions opts = {});

  std::vector<Detection> detect(const Frame& frame) override;
  std::string name() const override;

  const LayerStack& stack() const { return stack_; }
  LayerStack& stack() { return stack_; }
  const DetectOptions& options() const { return opts_; }

 private:
  LayerStack stack_;
  DetectOptions opts_;
};

struct OracleOptions {
  double jitter_sigma = 0.0;  // px noise on box corners, clamped to +-3 sigma
  double fp_rate = 0.0;       // chance per frame of one spurious box
  uint64_t seed = 1;
};

// Replays scene ground truth for the frame's sequence number instead of
// looking at the pixels. With jitter and false positives switched off
// the output is exactly the rendered truth, which makes end-to-end
// transport and bookkeeping testable without a trained model.
class OracleDetector : public DetectorBackend {
 public:
  OracleDetector(sim::SceneSpec scene, OracleOptions opts = {});

  std::vector<Detection> detect(const Frame& frame) override;
  std::string name() const override;

  const sim::SceneSpec& scene() const { return scene_; }

 private:
  sim::SceneSpec scene_;
  OracleOptions opts_;
  std::mt19937_64 rng_;
};

}  // namespace infergate::detect
