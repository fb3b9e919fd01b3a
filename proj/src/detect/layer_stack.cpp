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

#include "infergate/detect/layer_stack.hpp"

#include <algorithm>
#include <cmath>

namespace infergate::detect {

namespace {

struct Shape {
  bool flat = false;
  uint32_t c = 0, h = 0, w = 0;  // when !flat
  uint32_t n = 0;                // when flat

  size_t count() const {
    return flat ? n : static_cast<size_t>(c) * h * w;
  }
};

Shape advance_shape(const Shape& in, const Layer& layer, size_t idx) {
  switch (layer.type) {
    case LayerType::Conv: {
      if (in.flat)
        throw DimensionError("layer " + std::to_string(idx) +
                             ": conv after flatten");
      if (layer.weight_shape.size() != 4 || layer.weight_shape[2] != 3 ||
          layer.weight_shape[3] != 3)
        throw DimensionError("layer " + std::to_string(idx) +
                             ": conv weights must be {out,in,3,3}");
      if (layer.weight_shape[1] != in.c)
        throw DimensionError("layer " + std::to_string(idx) + ": conv expects " +
                             std::to_string(layer.weight_shape[1]) +
                             " input channels, got " + std::to_string(in.c));
      if (layer.bias.size() != layer.weight_shape[0])
        throw DimensionError("layer " + std::to_string(idx) + ": conv bias size");
      return {false, layer.weight_shape[0], in.h, in.w, 0};
    }
    case LayerType::MaxPool: {
      if (in.flat)
        throw DimensionError("layer " + std::to_string(idx) +
                             ": maxpool after flatten");
      if (in.h < 2 || in.w < 2)
        throw DimensionError("layer " + std::to_string(idx) +
                             ": maxpool input smaller than 2x2");
      return {false, in.c, in.h / 2, in.w / 2, 0};
    }
    case LayerType::Fc: {
      if (layer.weight_shape.size() != 2)
        throw DimensionError("layer " + std::to_string(idx) +
                             ": fc weights must be {out,in}");
      if (layer.weight_shape[1] != in.count())
        throw DimensionError("layer " + std::to_string(idx) + ": fc expects " +
                             std::to_string(layer.weight_shape[1]) +
                             " inputs, got " + std::to_string(in.count()));
      if (layer.bias.size() != layer.weight_shape[0])
        throw DimensionError("layer " + std::to_string(idx) + ": fc bias size");
      return {true, 0, 0, 0, layer.weight_shape[0]};
    }
    case LayerType::Relu:
      return in;
  }
  throw DimensionError("layer " + std::to_string(idx) + ": unknown type");
}

void conv_float(const Layer& layer, const std::vector<float>& in, uint32_t in_c,
                uint32_t h, uint32_t w, std::vector<float>& out) {
  const uint32_t out_c = layer.weight_shape[0];
  out.assign(static_cast<size_t>(out_c) * h * w, 0.0f);
  for (uint32_t oc = 0; oc < out_c; ++oc) {
    const float* wbase = layer.weights.data() +
                         static_cast<size_t>(oc) * in_c * 9;
    for (uint32_t y = 0; y < h; ++y) {
      for (uint32_t x = 0; x < w; ++x) {
        float acc = layer.bias[oc];
        for (uint32_t ic = 0; ic < in_c; ++ic) {
          const float* wk = wbase + static_cast<size_t>(ic) * 9;
          const float* plane = in.data() + static_cast<size_t>(ic) * h * w;
          for (int ky = -1; ky <= 1; ++ky) {
            const int iy = static_cast<int>(y) + ky;
            if (iy < 0 || iy >= static_cast<int>(h)) continue;
            for (int kx = -1; kx <= 1; ++kx) {
              const int ix = static_cast<int>(x) + kx;
              if (ix < 0 || ix >= static_cast<int>(w)) continue;
              acc += wk[(ky + 1) * 3 + (kx + 1)] *
                     plane[static_cast<size_t>(iy) * w + ix];
            }
          }
        }
        out[(static_cast<size_t>(oc) * h + y) * w + x] = acc;
      }
    }
  }
}

void maxpool(const std::vector<float>& in, uint32_t c, uint32_t h, uint32_t w,
             std::vector<float>& out) {
  const uint32_t oh = h / 2, ow = w / 2;
  out.resize(static_cast<size_t>(c) * oh * ow);
  for (uint32_t ch = 0; ch < c; ++ch) {
    const float* plane = in.data() + static_cast<size_t>(ch) * h * w;
    float* oplane = out.data() + static_cast<size_t>(ch) * oh * ow;
    for (uint32_t y = 0; y < oh; ++y) {
      for (uint32_t x = 0; x < ow; ++x) {
        const float* p = plane + static_cast<size_t>(2 * y) * w + 2 * x;
        oplane[static_cast<size_t>(y) * ow + x] =
            std::max(std::max(p[0], p[1]), std::max(p[w], p[w + 1]));
      }
    }
  }
}

void fc_float(const Layer& layer, const std::vector<float>& in,
              std::vector<float>& out) {
  const uint32_t n_out = layer.weight_shape[0];
  const uint32_t n_in = layer.weight_shape[1];
  out.resize(n_out);
  for (uint32_t o = 0; o < n_out; ++o) {
    const float* wrow = layer.weights.data() + static_cast<size_t>(o) * n_in;
    float acc = layer.bias[o];
    for (uint32_t i = 0; i < n_in; ++i) acc += wrow[i] * in[i];
    out[o] = acc;
  }
}

quant::QuantParams calibrate_activations(const std::vector<float>& values,
                                         float inflation) {
  float lo = 0.0f, hi = 0.0f;
  for (float v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    // All zero (the window already includes zero): one exact code.
    return {1.0f, -128};
  }
  lo *= inflation;
  hi *= inflation;
  quant::QuantParams p;
  p.scale = (hi - lo) / 255.0f;
  p.zero_point = static_cast<int8_t>(std::clamp(
      std::round(-128.0 - static_cast<double>(lo) / p.scale), -128.0, 127.0));
  return p;
}

void conv_int8(const Layer& layer, const std::vector<int8_t>& in_q,
               const quant::QuantParams& act, uint32_t in_c, uint32_t h,
               uint32_t w, std::vector<float>& out) {
  const uint32_t out_c = layer.weight_shape[0];
  const int zw = layer.qweights.params.zero_point;
  const int zx = act.zero_point;
  const float rescale = layer.qweights.params.scale * act.scale;
  out.assign(static_cast<size_t>(out_c) * h * w, 0.0f);
  for (uint32_t oc = 0; oc < out_c; ++oc) {
    const int8_t* wbase =
        layer.qweights.data.data() + static_cast<size_t>(oc) * in_c * 9;
    for (uint32_t y = 0; y < h; ++y) {
      for (uint32_t x = 0; x < w; ++x) {
        int32_t acc = 0;
        for (uint32_t ic = 0; ic < in_c; ++ic) {
          const int8_t* wk = wbase + static_cast<size_t>(ic) * 9;
          const int8_t* plane = in_q.data() + static_cast<size_t>(ic) * h * w;
          for (int ky = -1; ky <= 1; ++ky) {
            const int iy = static_cast<int>(y) + ky;
            if (iy < 0 || iy >= static_cast<int>(h)) continue;
            for (int kx = -1; kx <= 1; ++kx) {
              const int ix = static_cast<int>(x) + kx;
              if (ix < 0 || ix >= static_cast<int>(w)) continue;
              // Padded taps contribute exactly zero and are skipped.
              acc += (static_cast<int>(wk[(ky + 1) * 3 + (kx + 1)]) - zw) *
                     (static_cast<int>(plane[static_cast<size_t>(iy) * w + ix]) - zx);
            }
          }
        }
        out[(static_cast<size_t>(oc) * h + y) * w + x] =
            static_cast<float>(acc) * rescale + layer.bias[oc];
      }
    }
  }
}

void fc_int8(const Layer& layer, const std::vector<int8_t>& in_q,
             const quant::QuantParams& act, std::vector<float>& out) {
  const uint32_t n_out = layer.weight_shape[0];
  const uint32_t n_in = layer.weight_shape[1];
  const int zw = layer.qweights.params.zero_point;
  const int zx = act.zero_point;
  const float rescale = layer.qweights.params.scale * act.scale;
  out.resize(n_out);
  for (uint32_t o = 0; o < n_out; ++o) {
    const int8_t* wrow =
        layer.qweights.data.data() + static_cast<size_t>(o) * n_in;
    int32_t acc = 0;
    for (uint32_t i = 0; i < n_in; ++i)
      acc += (static_cast<int>(wrow[i]) - zw) * (static_cast<int>(in_q[i]) - zx);
    out[o] = static_cast<float>(acc) * rescale + layer.bias[o];
  }
}

}  // namespace

uint64_t Layer::param_count() const {
  if (!has_weights()) return 0;
  uint64_t n = 1;
  for (uint32_t d : weight_shape) n *= d;
  return n + bias.size();
}

size_t LayerStack::output_size() const {
  Shape s{false, input_c, input_h, input_w, 0};
  for (size_t i = 0; i < layers.size(); ++i) s = advance_shape(s, layers[i], i);
  return s.count();
}

uint64_t LayerStack::param_count() const {
  uint64_t n = 0;
  for (const Layer& l : layers) n += l.param_count();
  return n;
}

std::vector<float> forward_raw(const LayerStack& stack,
                               std::span<const float> image) {
  const size_t expected =
      static_cast<size_t>(stack.input_c) * stack.input_h * stack.input_w;
  if (image.size() != expected)
    throw DimensionError("input has " + std::to_string(image.size()) +
                         " values, stack expects " + std::to_string(expected));
  stack.output_size();  // validate composition up front

  Shape s{false, stack.input_c, stack.input_h, stack.input_w, 0};
  std::vector<float> cur(image.begin(), image.end());
  std::vector<float> next;
  for (size_t i = 0; i < stack.layers.size(); ++i) {
    const Layer& layer = stack.layers[i];
    switch (layer.type) {
      case LayerType::Conv: {
        const Layer* l = &layer;
        std::vector<float> deq;
        Layer tmp;
        if (layer.weights.empty() && layer.quantized) {
          // Float path over a quantized-only layer runs on the
          // dequantized weights.
          tmp = layer;
          tmp.weights = quant::dequantize_tensor(layer.qweights);
          l = &tmp;
        }
        conv_float(*l, cur, s.c, s.h, s.w, next);
        cur.swap(next);
        break;
      }
      case LayerType::MaxPool:
        maxpool(cur, s.c, s.h, s.w, next);
        cur.swap(next);
        break;
      case LayerType::Fc: {
        const Layer* l = &layer;
        Layer tmp;
        if (layer.weights.empty() && layer.quantized) {
          tmp = layer;
          tmp.weights = quant::dequantize_tensor(layer.qweights);
          l = &tmp;
        }
        fc_float(*l, cur, next);
        cur.swap(next);
        break;
      }
      case LayerType::Relu:
        for (float& v : cur) v = std::max(v, 0.0f);
        break;
    }
    s = advance_shape(s, layer, i);
  }
  return cur;
}

std::vector<float> forward_raw_quantized(const LayerStack& stack,
                                         std::span<const float> image,
                                         const QuantRunOptions& opts) {
  const size_t expected =
      static_cast<size_t>(stack.input_c) * stack.input_h * stack.input_w;
  if (image.size() != expected)
    throw DimensionError("input has " + std::to_string(image.size()) +
                         " values, stack expects " + std::to_string(expected));
  if (opts.act_range_inflation < 1.0f)
    throw DimensionError("act_range_inflation must be >= 1");
  stack.output_size();
  if (opts.trace) opts.trace->layers.clear();

  Shape s{false, stack.input_c, stack.input_h, stack.input_w, 0};
  std::vector<float> cur(image.begin(), image.end());
  std::vector<float> next;
  std::vector<int8_t> act_q;
  for (size_t i = 0; i < stack.layers.size(); ++i) {
    const Layer& layer = stack.layers[i];
    switch (layer.type) {
      case LayerType::Conv:
      case LayerType::Fc: {
        if (!layer.quantized) {
          if (layer.type == LayerType::Conv)
            conv_float(layer, cur, s.c, s.h, s.w, next);
          else
            fc_float(layer, cur, next);
          cur.swap(next);
          break;
        }
        const quant::QuantParams act =
            calibrate_activations(cur, opts.act_range_inflation);
        act_q.resize(cur.size());
        for (size_t k = 0; k < cur.size(); ++k)
          act_q[k] = quant::quantize_value(cur[k], act);
        if (opts.trace) {
          QuantLayerTrace t;
          t.layer_index = i;
          t.weight_scale = layer.qweights.params.scale;
          t.act_scale = act.scale;
          t.dequant_input.resize(cur.size());
          for (size_t k = 0; k < cur.size(); ++k)
            t.dequant_input[k] = quant::dequantize_value(act_q[k], act);
          t.input_shape = layer.type == LayerType::Conv
                              ? std::vector<uint32_t>{s.c, s.h, s.w}
                              : std::vector<uint32_t>{static_cast<uint32_t>(cur.size())};
          opts.trace->layers.push_back(std::move(t));
        }
        if (layer.type == LayerType::Conv)
          conv_int8(layer, act_q, act, s.c, s.h, s.w, next);
        else
          fc_int8(layer, act_q, act, next);
        cur.swap(next);
        break;
      }
      case LayerType::MaxPool:
        maxpool(cur, s.c, s.h, s.w, next);
        cur.swap(next);
        break;
      case LayerType::Relu:
        for (float& v : cur) v = std::max(v, 0.0f);
        break;
    }
    s = advance_shape(s, layer, i);
  }
  return cur;
}

void quantize_layers(LayerStack& stack, const std::vector<size_t>& indices) {
  for (size_t idx : indices) {
    Layer& layer = stack.layers.at(idx);
    if (!layer.has_weights() || layer.quantized) continue;
    const quant::QuantParams p = quant::calibrate(layer.weights);
    layer.qweights = quant::quantize_tensor(layer.weights, layer.weight_shape, p);
    layer.quantized = true;
  }
}

std::vector<size_t> conv_layer_indices(const LayerStack& stack) {
  std::vector<size_t> out;
  for (size_t i = 0; i < stack.layers.size(); ++i)
    if (stack.layers[i].type == LayerType::Conv) out.push_back(i);
  return out;
}

std::vector<size_t> weight_layer_indices(const LayerStack& stack) {
  std::vector<size_t> out;
  for (size_t i = 0; i < stack.layers.size(); ++i)
    if (stack.layers[i].has_weights()) out.push_back(i);
  return out;
}

}  // namespace infergate::detect
