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

#include "infergate/quant/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace infergate::quant {

QuantParams calibrate(std::span<const float> values) {
  if (values.empty()) throw CalibrationError("cannot calibrate empty tensor");
  float lo = values[0];
  float hi = values[0];
  for (float v : values) {
    if (!std::isfinite(v)) throw CalibrationError("non-finite value in tensor");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  QuantParams p;
  if (lo == hi) {
    // Degenerate range: scale 1.0, values land on one integer code.
    p.scale = 1.0f;
    const double zp = std::round(-128.0 - static_cast<double>(lo));
    p.zero_point = static_cast<int8_t>(std::clamp(zp, -128.0, 127.0));
    return p;
  }

  // Widen the window to include zero: zero then maps to an exact code and
  // the zero_point stays inside int8 without clamping.
  lo = std::min(lo, 0.0f);
  hi = std::max(hi, 0.0f);
  p.scale = (hi - lo) / 255.0f;
  const double zp = std::round(-128.0 - static_cast<double>(lo) / p.scale);
  p.zero_point = static_cast<int8_t>(std::clamp(zp, -128.0, 127.0));
  return p;
}

int8_t quantize_value(float x, const QuantParams& p) {
  const double q = std::round(static_cast<double>(x) / p.scale) + p.zero_point;
  return static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
}

float dequantize_value(int8_t q, const QuantParams& p) {
  return static_cast<float>(q - static_cast<int>(p.zero_point)) * p.scale;
}

QuantizedTensor quantize_tensor(std::span<const float> values,
                                const std::vector<uint32_t>& shape,
                                const QuantParams& p) {
  if (p.scale <= 0.0f) throw CalibrationError("scale must be positive");
  uint64_t count = 1;
  for (uint32_t d : shape) count *= d;
  if (count != values.size())
    throw CalibrationError("shape does not match value count");

  QuantizedTensor t;
  t.shape = shape;
  t.params = p;
  t.data.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    t.data[i] = quantize_value(values[i], p);
  return t;
}

std::vector<float> dequantize_tensor(const QuantizedTensor& q) {
  std::vector<float> out(q.data.size());
  for (size_t i = 0; i < q.data.size(); ++i)
    out[i] = dequantize_value(q.data[i], q.params);
  return out;
}

ModelSizeReport model_size_report(const std::vector<uint64_t>& layer_param_counts,
                                  const std::vector<bool>& quantize_mask) {
  ModelSizeReport r;
  for (size_t i = 0; i < layer_param_counts.size(); ++i) {
    const uint64_t n = layer_param_counts[i];
    r.fp32_bytes += 4 * n;
    const bool quantized = i < quantize_mask.size() && quantize_mask[i];
    r.quantized_bytes += quantized ? n + kParamsOverheadBytes : 4 * n;
  }
  r.ratio = r.quantized_bytes == 0
                ? 0.0
                : static_cast<double>(r.fp32_bytes) / static_cast<double>(r.quantized_bytes);
  return r;
}

ModelSizeReport size_report_for_counts(uint64_t total_params,
                                       uint64_t masked_params,
                                       uint64_t masked_tensors) {
  ModelSizeReport r;
  masked_params = std::min(masked_params, total_params);
  r.fp32_bytes = 4 * total_params;
  r.quantized_bytes = 4 * (total_params - masked_params) + masked_params +
                      masked_tensors * kParamsOverheadBytes;
  r.ratio = r.quantized_bytes == 0
                ? 0.0
                : static_cast<double>(r.fp32_bytes) /
                      static_cast<double>(r.quantized_bytes);
  return r;
}

double mask_fraction_for_ratio(double target_ratio) {
  // Ideal bytes with fraction q quantized: q*N + (1-q)*4N, so the ratio is
  // 4 / (4 - 3q); invert for q.
  if (target_ratio <= 1.0) return 0.0;
  const double q = (4.0 - 4.0 / target_ratio) / 3.0;
  return std::clamp(q, 0.0, 1.0);
}

double ratio_for_mask_fraction(double fraction) {
  const double q = std::clamp(fraction, 0.0, 1.0);
  return 4.0 / (4.0 - 3.0 * q);
}

}  // namespace infergate::quant
