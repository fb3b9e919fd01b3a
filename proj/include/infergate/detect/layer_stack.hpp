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

// Desk-scale detector network: stacked conv segments with 2x2 stride-2
// maxpools and a fully-connected head. Layer vocabulary:
//
//   CONV     3x3, stride 1, zero padding 1, weight shape {out_c, in_c, 3, 3}
//   MAXPOOL  2x2, stride 2, floor output dims
//   FC       weight shape {out, in}, flattens its input
//   RELU
//
// The float path is the reference; the quantized path runs int8 weight x
// int8 activation dot products with 32-bit accumulators, rescaling to
// float between layers. Activations are quantized per invocation from
// their own min/max (widened to include zero, so padded zeros and ReLU
// zeros map to an exact code).

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "infergate/quant/quantize.hpp"

namespace infergate::detect {

enum class LayerType : uint8_t {
  Conv = 1,
  MaxPool = 2,
  Fc = 3,
  Relu = 4,
};

struct Layer {
  LayerType type = LayerType::Relu;
  std::vector<uint32_t> weight_shape;  // Conv {out_c,in_c,3,3}; Fc {out,in}
  std::vector<float> weights;          // float master copy; empty when loaded quantized
  std::vector<float> bias;
  bool quantized = false;
  quant::QuantizedTensor qweights;

  bool has_weights() const {
    return type == LayerType::Conv || type == LayerType::Fc;
  }
  uint64_t param_count() const;
};

class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct LayerStack {
  uint16_t input_h = 64;
  uint16_t input_w = 64;
  uint16_t input_c = 3;
  std::vector<Layer> layers;

  // Walks the stack checking that consecutive layer shapes compose;
  // returns the flat output length. Throws DimensionError.
  size_t output_size() const;
  uint64_t param_count() const;
};

// Per-layer record of the scales the quantized path actually used, plus
// the dequantized activations fed to each integer kernel. Enough to
// reconstruct an analytic error bound for a given run.
struct QuantLayerTrace {
  size_t layer_index = 0;
  float weight_scale = 0.0f;
  float act_scale = 0.0f;
  std::vector<float> dequant_input;    // values fed to the integer kernel
  std::vector<uint32_t> input_shape;   // {c,h,w} for conv, {n} for fc
};

struct QuantTrace {
  std::vector<QuantLayerTrace> layers;
};

struct QuantRunOptions {
  // Multiplies the calibrated activation range; >1 widens it (coarser
  // quantization), used to study how the error bound scales.
  float act_range_inflation = 1.0f;
  QuantTrace* trace = nullptr;
};

// Float forward pass over the raw layer stack. `image` is {c,h,w}
// row-major and must match the stack's input dims.
std::vector<float> forward_raw(const LayerStack& stack,
                               std::span<const float> image);

// Integer-arithmetic forward pass. Layers without quantized weights fall
// back to the float kernel.
std::vector<float> forward_raw_quantized(const LayerStack& stack,
                                         std::span<const float> image,
                                         const QuantRunOptions& opts = {});

// Quantizes the weights of every Conv/Fc layer selected by `mask`
// (indices into stack.layers); calibration is per-tensor min/max.
void quantize_layers(LayerStack& stack, const std::vector<size_t>& indices);
std::vector<size_t> conv_layer_indices(const LayerStack& stack);
std::vector<size_t> weight_layer_indices(const LayerStack& stack);

}  // namespace infergate::detect
