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
#include <memory>
#include <string>
#include <vector>

namespace infergate {

// A raw RGB24 image tagged with its source robot, per-client sequence
// number and capture timestamp (microseconds since that client's stream
// started). arrival_us is stamped by the gateway when the frame is
// received, on the gateway clock.
struct Frame {
  std::string robot_id;
  uint64_t seq = 0;
  uint64_t timestamp_us = 0;
  uint16_t width = 0;
  uint16_t height = 0;
  std::vector<uint8_t> pixels;  // width * height * 3, row-major RGB
  uint64_t arrival_us = 0;
};

using FramePtr = std::shared_ptr<const Frame>;

}  // namespace infergate
