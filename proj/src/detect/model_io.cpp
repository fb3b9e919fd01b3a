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

#include "infergate/detect/model_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <vector>

#include "infergate/util/byteio.hpp"

namespace infergate::detect {

using namespace infergate::util;

namespace {

constexpr char kMagic[4] = {'Q', '8', 'M', '1'};

class Reader {
 public:
  Reader(const uint8_t* data, size_t len) : data_(data), len_(len) {}

  const uint8_t* take(size_t n) {
    if (pos_ + n > len_) throw ModelIoError("truncated model file");
    const uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  uint8_t u8() { return *take(1); }
  uint16_t u16() { return get_u16_le(take(2)); }
  uint32_t u32() { return get_u32_le(take(4)); }
  float f32() { return get_f32_le(take(4)); }
  bool done() const { return pos_ == len_; }

 private:
  const uint8_t* data_;
  size_t len_;
  size_t pos_ = 0;
};

void fill_random(std::vector<float>& v, size_t fan_in, std::mt19937_64& rng) {
  std::normal_distribution<float> dist(0.0f, 1.0f / std::sqrt(static_cast<float>(fan_in)));
  for (float& x : v) x = dist(rng);
}

Layer conv_layer(uint32_t out_c, uint32_t in_c, std::mt19937_64& rng) {
  Layer l;
  l.type = LayerType::Conv;
  l.weight_shape = {out_c, in_c, 3, 3};
  l.weights.resize(static_cast<size_t>(out_c) * in_c * 9);
  fill_random(l.weights, static_cast<size_t>(in_c) * 9, rng);
  l.bias.resize(out_c);
  std::uniform_real_distribution<float> bdist(-0.1f, 0.1f);
  for (float& b : l.bias) b = bdist(rng);
  return l;
}

Layer fc_layer(uint32_t n_out, uint32_t n_in, std::mt19937_64& rng) {
  Layer l;
  l.type = LayerType::Fc;
  l.weight_shape = {n_out, n_in};
  l.weights.resize(static_cast<size_t>(n_out) * n_in);
  fill_random(l.weights, n_in, rng);
  l.bias.resize(n_out);
  std::uniform_real_distribution<float> bdist(-0.1f, 0.1f);
  for (float& b : l.bias) b = bdist(rng);
  return l;
}

}  // namespace

void save_model(const LayerStack& stack, const std::string& path) {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16_le(out, stack.input_h);
  put_u16_le(out, stack.input_w);
  put_u16_le(out, stack.input_c);
  put_u32_le(out, static_cast<uint32_t>(stack.layers.size()));
  for (const Layer& l : stack.layers) {
    out.push_back(static_cast<uint8_t>(l.type));
    out.push_back(static_cast<uint8_t>(l.weight_shape.size()));
    for (uint32_t d : l.weight_shape) put_u32_le(out, d);
    out.push_back(l.quantized ? 1 : 0);
    size_t n = l.has_weights() ? 1 : 0;
    for (uint32_t d : l.weight_shape) n *= d;
    if (l.quantized) {
      put_f32_le(out, l.qweights.params.scale);
      out.push_back(static_cast<uint8_t>(l.qweights.params.zero_point));
      if (l.qweights.data.size() != n)
        throw ModelIoError("quantized data does not match shape");
      for (int8_t q : l.qweights.data) out.push_back(static_cast<uint8_t>(q));
    } else {
      if (l.weights.size() != n)
        throw ModelIoError("float weights do not match shape");
      for (float w : l.weights) put_f32_le(out, w);
    }
    put_u32_le(out, static_cast<uint32_t>(l.bias.size()));
    for (float b : l.bias) put_f32_le(out, b);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ModelIoError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw ModelIoError("write failed for " + path);
}

LayerStack load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelIoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
  Reader r(bytes.data(), bytes.size());

  const uint8_t* magic = r.take(4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ModelIoError(path + ": bad magic, not a Q8M1 model");
  LayerStack stack;
  stack.input_h = r.u16();
  stack.input_w = r.u16();
  stack.input_c = r.u16();
  const uint32_t layer_count = r.u32();

  for (uint32_t i = 0; i < layer_count; ++i) {
    Layer l;
    const uint8_t type = r.u8();
    if (type < 1 || type > 4)
      throw ModelIoError("layer " + std::to_string(i) + ": bad type tag");
    l.type = static_cast<LayerType>(type);
    const uint8_t ndims = r.u8();
    uint64_t n = l.has_weights() ? 1 : 0;
    for (uint8_t d = 0; d < ndims; ++d) {
      l.weight_shape.push_back(r.u32());
      n *= l.weight_shape.back();
    }
    if (n > (1u << 28))
      throw ModelIoError("layer " + std::to_string(i) + ": implausible size");
    const uint8_t quantized = r.u8();
    if (quantized) {
      l.quantized = true;
      l.qweights.params.scale = r.f32();
      l.qweights.params.zero_point = static_cast<int8_t>(r.u8());
      if (!(l.qweights.params.scale > 0.0f))
        throw ModelIoError("layer " + std::to_string(i) + ": bad scale");
      l.qweights.shape = l.weight_shape;
      const uint8_t* qdata = r.take(n);
      l.qweights.data.resize(n);
      std::memcpy(l.qweights.data.data(), qdata, n);
    } else {
      l.weights.resize(n);
      for (uint64_t k = 0; k < n; ++k) l.weights[k] = r.f32();
    }
    const uint32_t bias_len = r.u32();
    if (bias_len > (1u << 24))
      throw ModelIoError("layer " + std::to_string(i) + ": implausible bias");
    l.bias.resize(bias_len);
    for (uint32_t k = 0; k < bias_len; ++k) l.bias[k] = r.f32();
    stack.layers.push_back(std::move(l));
  }
  if (!r.done()) throw ModelIoError(path + ": trailing bytes");
  stack.output_size();  // validate composition
  return stack;
}

LayerStack make_micro_model(const MicroModelConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  LayerStack stack;
  stack.input_h = cfg.input_size;
  stack.input_w = cfg.input_size;
  stack.input_c = 3;

  const uint32_t widths[4] = {8, 16, 32, 32};
  uint32_t c = 3;
  uint32_t hw = cfg.input_size;
  for (uint32_t w : widths) {
    stack.layers.push_back(conv_layer(w, c, rng));
    Layer relu;
    relu.type = LayerType::Relu;
    stack.layers.push_back(relu);
    Layer pool;
    pool.type = LayerType::MaxPool;
    stack.layers.push_back(pool);
    c = w;
    hw /= 2;
  }

  const uint32_t flat = c * hw * hw;
  const uint32_t head_out = cfg.num_boxes * (5 + cfg.num_classes);
  stack.layers.push_back(fc_layer(256, flat, rng));
  Layer relu1;
  relu1.type = LayerType::Relu;
  stack.layers.push_back(relu1);
  stack.layers.push_back(fc_layer(128, 256, rng));
  Layer relu2;
  relu2.type = LayerType::Relu;
  stack.layers.push_back(relu2);
  stack.layers.push_back(fc_layer(head_out, 128, rng));
  stack.output_size();
  return stack;
}

LayerStack make_random_stack(uint16_t input_size, uint16_t input_c,
                             int num_conv, const std::vector<uint32_t>& widths,
                             const std::vector<uint32_t>& fc_sizes,
                             uint64_t seed) {
  std::mt19937_64 rng(seed);
  LayerStack stack;
  stack.input_h = input_size;
  stack.input_w = input_size;
  stack.input_c = input_c;

  uint32_t c = input_c;
  uint32_t hw = input_size;
  for (int i = 0; i < num_conv; ++i) {
    const uint32_t w = widths[i % widths.size()];
    stack.layers.push_back(conv_layer(w, c, rng));
    Layer relu;
    relu.type = LayerType::Relu;
    stack.layers.push_back(relu);
    if (hw >= 4) {
      Layer pool;
      pool.type = LayerType::MaxPool;
      stack.layers.push_back(pool);
      hw /= 2;
    }
    c = w;
  }
  uint32_t flat = c * hw * hw;
  for (uint32_t s : fc_sizes) {
    stack.layers.push_back(fc_layer(s, flat, rng));
    flat = s;
  }
  stack.output_size();
  return stack;
}

}  // namespace infergate::detect
