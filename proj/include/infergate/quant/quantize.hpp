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

// Affine 8-bit weight quantization with per-tensor scale/zero-point.
//
//   q = clamp(round(x / scale) + zero_point, -128, 127)
//   x' = (q - zero_point) * scale
//
// Calibration picks scale/zero_point from the value range so that every
// x inside it round-trips with error at most scale/2.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace infergate::quant {

struct QuantParams {
  float scale = 1.0f;     // > 0
  int8_t zero_point = 0;

  bool operator==(const QuantParams&) const = default;
};

struct QuantizedTensor {
  std::vector<uint32_t> shape;
  std::vector<int8_t> data;  // row-major, data.size() == product(shape)
  QuantParams params;
};

class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

// Derives per-tensor params from the value range. The calibrated window
// always contains zero so that zero quantizes exactly and the zero_point
// never needs clamping; a tensor with max == min keeps scale 1.0.
// Throws CalibrationError on an empty tensor or non-finite values.
QuantParams calibrate(std::span<const float> values);

int8_t quantize_value(float x, const QuantParams& p);
float dequantize_value(int8_t q, const QuantParams& p);

QuantizedTensor quantize_tensor(std::span<const float> values,
                                const std::vector<uint32_t>& shape,
                                const QuantParams& p);
std::vector<float> dequantize_tensor(const QuantizedTensor& q);

// Storage accounting for a weight stack under a per-layer quantize mask.
// Quantized layers cost 1 byte per parameter plus kParamsOverheadBytes for
// the stored scale/zero_point; float layers cost 4 bytes per parameter.
constexpr uint64_t kParamsOverheadBytes = 5;  // f32 scale + i8 zero_point

struct ModelSizeReport {
  uint64_t fp32_bytes = 0;
  uint64_t quantized_bytes = 0;
  double ratio = 0.0;  // fp32_bytes / quantized_bytes
};

ModelSizeReport model_size_report(const std::vector<uint64_t>& layer_param_counts,
                                  const std::vector<bool>& quantize_mask);

// Parameter-count variant for planning: `masked_params` of `total_params`
// stored as int8 spread over `masked_tensors` tensors, the rest as fp32.
ModelSizeReport size_report_for_counts(uint64_t total_params,
                                       uint64_t masked_params,
                                       uint64_t masked_tensors);

// Fraction of parameters that must be quantized for the ideal (overhead-free)
// size ratio 4 / (4 - 3q) to equal `target_ratio`. Clamped to [0, 1].
double mask_fraction_for_ratio(double target_ratio);
// The same relation forwards: ideal ratio for a given quantized fraction.
double ratio_for_mask_fraction(double fraction);

}  // namespace infergate::quant
