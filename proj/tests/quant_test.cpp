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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "infergate/quant/quantize.hpp"

using namespace infergate::quant;

TEST_SUITE("quant") {

TEST_CASE("calibration matches the range formula") {
  SUBCASE("uniform [-1,1] gives scale 2/255") {
    std::vector<float> v = {-1.0f, -0.5f, 0.0f, 0.5f, 1.0f};
    QuantParams p = calibrate(v);
    CHECK(p.scale == doctest::Approx(2.0f / 255.0f).epsilon(1e-6));
  }
  SUBCASE("[0,255] gives scale 1 and zero_point -128") {
    std::vector<float> v = {0.0f, 17.0f, 255.0f};
    QuantParams p = calibrate(v);
    CHECK(p.scale == doctest::Approx(1.0f));
    CHECK(p.zero_point == -128);
  }
  SUBCASE("degenerate constant tensor keeps scale 1 and round-trips") {
    std::vector<float> v(8, 5.0f);
    QuantParams p = calibrate(v);
    CHECK(p.scale == 1.0f);
    int8_t q = quantize_value(5.0f, p);
    CHECK(dequantize_value(q, p) == doctest::Approx(5.0f));
  }
  SUBCASE("non-finite values are rejected") {
    std::vector<float> v = {1.0f, std::numeric_limits<float>::quiet_NaN()};
    CHECK_THROWS_AS(calibrate(v), CalibrationError);
    std::vector<float> w = {std::numeric_limits<float>::infinity()};
    CHECK_THROWS_AS(calibrate(w), CalibrationError);
    CHECK_THROWS_AS(calibrate(std::vector<float>{}), CalibrationError);
  }
}

TEST_CASE("quantize formula spot values") {
  SUBCASE("zero is exact at zero_point 0") {
    QuantParams p{1.0f, 0};
    CHECK(quantize_value(0.0f, p) == 0);
  }
  SUBCASE("saturation clamps to 127") {
    QuantParams p{1.0f, 0};
    CHECK(quantize_value(1000.0f, p) == 127);
    CHECK(quantize_value(-1000.0f, p) == -128);
  }
  SUBCASE("0.5 at scale 2/255 lands on 64") {
    QuantParams p{2.0f / 255.0f, 0};
    CHECK(quantize_value(0.5f, p) == 64);
    CHECK(dequantize_value(64, p) ==
          doctest::Approx(0.50196).epsilon(1e-4));
  }
}

// Brute-force check of the round-trip bound over many random tensors:
// every in-range value must come back within scale/2. This is the load-
// bearing property for the whole integer inference path.
TEST_CASE("round trip error is bounded by scale/2 over random tensors") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<float> center_d(-50.0f, 50.0f);
  std::uniform_real_distribution<float> span_d(0.001f, 100.0f);

  double worst_ratio = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    const float center = center_d(rng);
    const float span = span_d(rng);
    std::uniform_real_distribution<float> val_d(center - span, center + span);
    std::vector<float> v(64);
    for (auto& x : v) x = val_d(rng);

    QuantParams p = calibrate(v);
    REQUIRE(p.scale > 0.0f);
    for (float x : v) {
      const float back = dequantize_value(quantize_value(x, p), p);
      const double err = std::abs(static_cast<double>(back) - x);
      // Tiny slack for the float arithmetic inside the conversion.
      CHECK(err <= p.scale / 2.0 * (1.0 + 1e-4) + 1e-7);
      worst_ratio = std::max(worst_ratio, err / (p.scale / 2.0));
    }
  }
  // The bound is tight in practice: some draw should get close to it.
  CHECK(worst_ratio > 0.5);
}

TEST_CASE("quantize is monotone and idempotent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> val_d(-3.0f, 9.0f);
  std::vector<float> v(128);
  for (auto& x : v) x = val_d(rng);
  QuantParams p = calibrate(v);

  for (int iter = 0; iter < 1000; ++iter) {
    float a = val_d(rng), b = val_d(rng);
    if (a > b) std::swap(a, b);
    CHECK(quantize_value(a, p) <= quantize_value(b, p));
  }
  for (int q = -128; q <= 127; ++q) {
    const auto q8 = static_cast<int8_t>(q);
    CHECK(quantize_value(dequantize_value(q8, p), p) == q8);
  }
}

TEST_CASE("tensor quantization preserves shape and clamps to int8") {
  std::vector<float> v = {-10.0f, -1.0f, 0.0f, 2.5f, 10.0f, 3.0f};
  QuantParams p = calibrate(v);
  QuantizedTensor t = quantize_tensor(v, {2, 3}, p);
  CHECK(t.shape == std::vector<uint32_t>{2, 3});
  REQUIRE(t.data.size() == 6);
  std::vector<float> back = dequantize_tensor(t);
  for (size_t i = 0; i < v.size(); ++i)
    CHECK(std::abs(back[i] - v[i]) <= p.scale / 2.0f * 1.0001f);
}

TEST_CASE("size report follows the byte accounting") {
  SUBCASE("no layers masked is ratio 1") {
    ModelSizeReport r = model_size_report({100, 200}, {false, false});
    CHECK(r.fp32_bytes == 1200);
    CHECK(r.quantized_bytes == 1200);
    CHECK(r.ratio == doctest::Approx(1.0));
  }
  SUBCASE("all masked approaches 4x from below") {
    ModelSizeReport r = model_size_report({100000}, {true});
    CHECK(r.fp32_bytes == 400000);
    CHECK(r.quantized_bytes == 100000 + kParamsOverheadBytes);
    CHECK(r.ratio > 3.9);
    CHECK(r.ratio < 4.0);
  }
  SUBCASE("mixed mask, hand-computed") {
    // 4*300 = 1200 fp32; quantized: 100 + 5 + 4*200 = 905.
    ModelSizeReport r = model_size_report({100, 200}, {true, false});
    CHECK(r.quantized_bytes == 905);
    CHECK(r.ratio == doctest::Approx(1200.0 / 905.0));
  }
}

TEST_CASE("mask fraction for the published compression ratio") {
  // Solving 4 / (4 - 3q) = 2.4927 gives q = 0.7984381...; frozen from
  // by-hand algebra: 3q = 4 - 4/2.4927.
  const double q = mask_fraction_for_ratio(2.4927);
  CHECK(q == doctest::Approx(0.7984381).epsilon(1e-6));
  CHECK(ratio_for_mask_fraction(q) == doctest::Approx(2.4927).epsilon(1e-12));

  CHECK(mask_fraction_for_ratio(1.0) == doctest::Approx(0.0));
  CHECK(mask_fraction_for_ratio(4.0) == doctest::Approx(1.0));
  CHECK(ratio_for_mask_fraction(0.0) == doctest::Approx(1.0));
  CHECK(ratio_for_mask_fraction(1.0) == doctest::Approx(4.0));
}

TEST_CASE("parameter-count size report matches the layered one") {
  // One 1e6-parameter model, 79.84% of parameters in 4 quantized tensors.
  const uint64_t total = 1000000;
  const uint64_t masked = 798438;
  ModelSizeReport by_counts = size_report_for_counts(total, masked, 4);
  ModelSizeReport by_layers = model_size_report(
      {masked / 2, masked - masked / 2, (total - masked) / 2,
       total - masked - (total - masked) / 2},
      {true, true, false, false});
  // Layer report counts 2 quantized tensors, the counts view says 4.
  CHECK(by_counts.fp32_bytes == by_layers.fp32_bytes);
  CHECK(by_counts.quantized_bytes ==
        by_layers.quantized_bytes + 2 * kParamsOverheadBytes);
  CHECK(by_counts.ratio == doctest::Approx(2.4927).epsilon(2e-4));
}

}  // TEST_SUITE("quant")
