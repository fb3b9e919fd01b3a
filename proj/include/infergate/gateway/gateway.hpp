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

// The inference hub. One receiver thread per connection feeds a shared
// admission queue; a single inference worker serves it and routes each
// result back to the session that sent the frame; a separate fan-out
// thread renders and broadcasts monitoring frames. Each session writes
// through its own bounded outbound queue and sender thread, so one
// stalled client cannot hold up the others.
//
// Handshake: a client opens with HELLO; the gateway answers HELLO to
// accept or BYE (payload = reason) to reject. A robot_id starting with
// "mon-" subscribes to the monitoring stream instead of sending frames.

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "infergate/detect/backend.hpp"
#include "infergate/gateway/config.hpp"
#include "infergate/pipeline/frame_pipeline.hpp"

namespace infergate::gateway {

inline constexpr const char* kMonitorPrefix = "mon-";

struct GatewayStats {
  uint64_t sessions_accepted = 0;
  uint64_t monitors_accepted = 0;
  uint64_t sessions_rejected = 0;
  uint64_t sessions_closed = 0;
  uint64_t frames_received = 0;
  uint64_t results_sent = 0;       // enqueued toward the origin session
  uint64_t results_discarded = 0;  // origin was gone at routing time
  uint64_t actions_sent = 0;
  uint64_t monitor_frames = 0;
  uint64_t outbound_dropped = 0;  // messages shed by full session queues
  uint64_t protocol_errors = 0;
  pipeline::PipelineStats pipeline;
};

struct GatewayOptions {
  std::string listen_host = "127.0.0.1";
  uint16_t listen_port = 0;  // 0: pick an ephemeral port
  GatewayConfig config;
  size_t outbound_queue_limit = 256;  // encoded messages per session
  bool log_pipeline_events = false;   // record the admission event log
};

class Gateway {
 public:
  // Binds the listen socket; throws net::BindError when the address is
  // unavailable and ConfigError when the config is inconsistent.
  Gateway(GatewayOptions options,
          std::unique_ptr<detect::DetectorBackend> detector);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  void start();
  // Graceful shutdown: stops intake, finishes the in-flight frame, sends
  // BYE to connected sessions and joins every thread. Idempotent.
  void stop();

  uint16_t port() const;
  bool running() const;

  GatewayStats stats() const;
  std::string stats_line() const;
  // Admission queue, exposed for inspection in tests.
  pipeline::ProcessQueue& queue();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace infergate::gateway
