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

// Simulated robot client: connects, streams rendered frames at a choppy
// camera cadence, and collects the results that come back so the eval
// harness can score them against the scene's exact ground truth.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infergate/eval/records.hpp"
#include "infergate/sim/scene.hpp"
#include "infergate/wire/protocol.hpp"

namespace infergate::sim {

// Timing model for the synthetic camera. Frame k+1 is due one nominal
// interval after frame k, stretched by a per-frame jitter multiplier
// drawn uniformly from [1, 1 + jitter_max] — multipliers never dip below
// 1, so the realized rate cannot exceed the nominal rate. A stall
// replaces the gap with stall_intervals nominal intervals (floored at 2)
// while scene time keeps advancing, which is what makes the feed choppy
// rather than merely slow.
struct StreamProfile {
  double nominal_fps = 30.0;
  double jitter_max = 0.0;         // 0 disables jitter
  double stall_probability = 0.0;  // per-frame chance of a stall gap
  double stall_intervals = 3.0;    // gap length in nominal intervals
  // Wall-clock compression: sleeps are divided by this, so a 30 s stream
  // can run in 5 s of real time. Latency is always measured in real
  // microseconds regardless.
  double time_scale = 1.0;
  uint64_t seed = 1;
};

struct ClientReport {
  std::string robot_id;
  bool connected = false;           // HELLO handshake succeeded
  std::string disconnect_reason;    // "done", "refused: ...", "rejected: ...", ...
  uint64_t frames_sent = 0;
  uint64_t results_received = 0;
  uint64_t actions_received = 0;
  uint64_t stalls = 0;
  double stream_seconds = 0.0;      // logical camera time covered
  double wall_seconds = 0.0;        // real time spent streaming
  // One record per sent frame, in send order; t_result_us stays 0 for
  // frames whose result never arrived (dropped or lost).
  std::vector<eval::EvalRecord> records;
  std::vector<wire::ActionPayload> actions;
};

// Streams `duration_s` seconds of camera time to the gateway and waits
// for the result stream to go quiet before saying BYE. Never throws:
// connection failures and mid-stream disconnects are reported through
// `connected` / `disconnect_reason` with whatever was gathered so far.
ClientReport run_client(const StreamProfile& profile, const SceneSpec& scene,
                        const std::string& host, uint16_t port,
                        const std::string& robot_id, double duration_s);

}  // namespace infergate::sim
