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

// Q8M1 model file codec. Little-endian layout, documented in
// docs/model-format.md:
//
//   magic "Q8M1"
//   u16 input_h, u16 input_w, u16 input_c
//   u32 layer_count
//   per layer:
//     u8  type (1=CONV 2=MAXPOOL 3=FC 4=RELU)
//     u8  ndims, u32 dims[ndims]
//     u8  quantized flag
//     if quantized: f32 scale, i8 zero_point
//     weight bytes (i8[n] quantized, f32[n] otherwise)
//     u32 bias_len, f32 bias[bias_len]

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "infergate/detect/layer_stack.hpp"

namespace infergate::detect {

class ModelIoError : public std::runtime_error {
 public:
  explicit ModelIoError(const std::string& what) : std::runtime_error(what) {}
};

void save_model(const LayerStack& stack, const std::string& path);
LayerStack load_model(const std::string& path);

struct MicroModelConfig {
  uint16_t input_size = 64;       // square input
  uint32_t num_classes = 4;
  uint32_t num_boxes = 8;
  uint64_t seed = 1;
};

// Default desk-scale architecture: 4 conv segments (widths 8, 16, 32, 32),
// each conv+relu+maxpool, then a 3-layer fully connected head ending in
// num_boxes * (5 + num_classes) outputs. Weights are seeded random.
LayerStack make_micro_model(const MicroModelConfig& cfg = {});

// Small random stack for oracle-equivalence testing: up to max_conv conv
// segments with channel widths <= max_width, square input.
LayerStack make_random_stack(uint16_t input_size, uint16_t input_c,
                             int num_conv, const std::vector<uint32_t>& widths,
                             const std::vector<uint32_t>& fc_sizes,
                             uint64_t seed);

}  // namespace infergate::detect
