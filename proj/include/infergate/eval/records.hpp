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

// Evaluation record file: the simulator report format extended with
// per-frame truth and prediction blocks.
//
//   # comment
//   <seq> <t_sent_us> <t_result_us> <n_truth> <n_detected>
//   T <label> <x1> <y1> <x2> <y2>                (x n_truth)
//   P <label> <confidence> <x1> <y1> <x2> <y2>   (x n_detected)
//
// t_result_us == 0 marks a frame whose result never came back (the
// send/result clock is strictly positive).

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infergate/detect/postprocess.hpp"

namespace infergate::eval {

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

struct EvalRecord {
  uint64_t seq = 0;
  uint64_t t_sent_us = 0;
  uint64_t t_result_us = 0;  // 0: no result received
  std::vector<detect::Detection> truth;  // confidence field unused (1.0)
  std::vector<detect::Detection> predictions;

  bool has_result() const { return t_result_us != 0; }
  std::optional<uint64_t> latency_us() const {
    if (!has_result() || t_result_us < t_sent_us) return std::nullopt;
    return t_result_us - t_sent_us;
  }
};

// Throws EvalError naming the offending line on malformed input.
std::vector<EvalRecord> load_records(const std::string& path);
void save_records(const std::vector<EvalRecord>& records,
                  const std::string& path);

}  // namespace infergate::eval
