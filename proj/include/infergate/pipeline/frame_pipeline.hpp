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

// Frame admission for a single shared inference engine. The policy:
//
//   - engine idle and queue empty  -> hand the frame over immediately
//   - engine busy                  -> append to the queue
//   - after appending, if the queue length has reached
//     max(kMinDropThreshold, ceil(arrival_rate_fps)) the queue is
//     collapsed to just the newest frame; everything older is dropped
//
// so a slow engine always works on fresh input and the backlog never
// exceeds roughly one second of arrivals. Counters satisfy
//   frames_in == inferred + dropped + queue_depth
// at every instant (inferred counts frames handed to the engine,
// including the one in flight).

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "infergate/frame.hpp"

namespace infergate::pipeline {

inline constexpr uint32_t kRateWindow = 30;
inline constexpr uint32_t kMinDropThreshold = 5;

// Arrival-rate estimate over a sliding window of the most recent
// kRateWindow timestamps: (n - 1) frames over (t_last - t_first)
// microseconds. Not thread-safe; ProcessQueue guards its own instance.
class FrameRateEstimator {
 public:
  explicit FrameRateEstimator(uint32_t window = kRateWindow);

  // Throws std::invalid_argument when timestamps go backwards.
  void observe(uint64_t timestamp_us);
  // Frames per second; 0 until two distinct timestamps are in the window.
  double rate_fps() const;
  size_t count() const { return times_.size(); }
  void reset();

 private:
  uint32_t window_;
  std::deque<uint64_t> times_;
};

enum class AdmitResult : uint8_t {
  InferNow = 0,        // engine was idle, frame handed straight over
  Enqueued = 1,
  EnqueuedAfterDrop = 2,  // admission tripped a queue collapse
};

enum class PipelineEventKind : uint8_t {
  Admitted = 0,
  Dropped = 1,
  Dispatched = 2,
  Completed = 3,
};

struct FrameKey {
  std::string robot_id;
  uint64_t seq = 0;

  bool operator==(const FrameKey&) const = default;
  auto operator<=>(const FrameKey&) const = default;
};

struct PipelineEvent {
  PipelineEventKind kind;
  FrameKey frame;  // admitted/dispatched frame; trigger frame for Dropped
  AdmitResult admit = AdmitResult::InferNow;  // valid for Admitted
  std::vector<FrameKey> victims;              // valid for Dropped
};

struct PipelineStats {
  uint64_t frames_in = 0;
  uint64_t inferred = 0;  // dispatched to the engine (includes in flight)
  uint64_t dropped = 0;
  uint64_t queue_depth = 0;
  uint64_t drop_events = 0;
  uint64_t infer_now = 0;
  uint64_t enqueued = 0;
  uint64_t enqueued_after_drop = 0;
  double rate_fps = 0.0;
};

// Thread-safe admission queue between N receiver threads and one
// inference worker. The worker loops take() / complete(); receivers call
// admit(). Dropped frames are reported to the drop callback outside the
// lock so the gateway can attribute them to sessions.
class ProcessQueue {
 public:
  using DropCallback = std::function<void(const std::vector<FramePtr>&)>;

  explicit ProcessQueue(uint32_t rate_window = kRateWindow,
                        uint32_t min_threshold = kMinDropThreshold);

  void set_drop_callback(DropCallback cb);
  void enable_event_log(bool on);

  AdmitResult admit(FramePtr frame);

  // Blocks until a frame is available or shutdown() is called; marks the
  // engine busy and counts the frame as inferred.
  std::optional<FramePtr> take();
  // Non-blocking variant; nullptr when the queue is empty.
  FramePtr try_take();
  // Engine back to idle. Call exactly once per successful take.
  void complete();

  // Removes queued frames for a departing robot; they count as dropped.
  // The in-flight frame, if any, is unaffected.
  size_t purge_robot(const std::string& robot_id);

  void record_latency_us(uint64_t us);
  std::vector<uint64_t> latencies_us() const;

  void shutdown();
  PipelineStats stats() const;
  std::vector<PipelineEvent> events() const;

 private:
  uint32_t min_threshold_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  FramePtr direct_;  // frame assigned to an idle engine, exempt from drops
  std::deque<FramePtr> queue_;
  FrameRateEstimator estimator_;
  uint64_t last_arrival_us_ = 0;
  bool busy_ = false;
  bool shutdown_ = false;
  bool log_events_ = false;
  DropCallback on_drop_;

  uint64_t frames_in_ = 0;
  uint64_t inferred_ = 0;
  uint64_t dropped_ = 0;
  uint64_t drop_events_ = 0;
  uint64_t infer_now_ = 0;
  uint64_t enqueued_ = 0;
  uint64_t enqueued_after_drop_ = 0;
  std::vector<uint64_t> latencies_us_;
  std::vector<PipelineEvent> events_;

  FramePtr pop_locked();
};

// Queue-collapse threshold for a given arrival rate estimate.
uint32_t drop_threshold(double rate_fps, uint32_t min_threshold = kMinDropThreshold);

}  // namespace infergate::pipeline
