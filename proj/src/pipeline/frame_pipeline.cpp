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

#include "infergate/pipeline/frame_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infergate::pipeline {

FrameRateEstimator::FrameRateEstimator(uint32_t window)
    : window_(window == 0 ? 1 : window) {}

void FrameRateEstimator::observe(uint64_t timestamp_us) {
  if (!times_.empty() && timestamp_us < times_.back()) {
    throw std::invalid_argument("arrival timestamps must be non-decreasing");
  }
  times_.push_back(timestamp_us);
  while (times_.size() > window_) times_.pop_front();
}

double FrameRateEstimator::rate_fps() const {
  if (times_.size() < 2) return 0.0;
  const uint64_t first = times_.front();
  const uint64_t last = times_.back();
  if (last <= first) return 0.0;
  return (times_.size() - 1) * 1e6 / static_cast<double>(last - first);
}

void FrameRateEstimator::reset() { times_.clear(); }

uint32_t drop_threshold(double rate_fps, uint32_t min_threshold) {
  if (!(rate_fps > 0.0)) return min_threshold;
  const double r = std::ceil(rate_fps);
  if (r >= 4e9) return 0xFFFFFFFFu;
  return std::max<uint32_t>(min_threshold, static_cast<uint32_t>(r));
}

ProcessQueue::ProcessQueue(uint32_t rate_window, uint32_t min_threshold)
    : min_threshold_(std::max<uint32_t>(1, min_threshold)),
      estimator_(rate_window) {}

void ProcessQueue::set_drop_callback(DropCallback cb) {
  std::lock_guard lk(mu_);
  on_drop_ = std::move(cb);
}

void ProcessQueue::enable_event_log(bool on) {
  std::lock_guard lk(mu_);
  log_events_ = on;
}

AdmitResult ProcessQueue::admit(FramePtr frame) {
  std::vector<FramePtr> victims;
  DropCallback cb;
  AdmitResult result;
  {
    std::lock_guard lk(mu_);
    ++frames_in_;
    // Receiver threads stamp arrival_us before taking this lock, so two
    // stamps can arrive out of order; the rate only needs the envelope.
    last_arrival_us_ = std::max(last_arrival_us_, frame->arrival_us);
    estimator_.observe(last_arrival_us_);
    const FrameKey key{frame->robot_id, frame->seq};

    if (!busy_ && !direct_ && queue_.empty()) {
      // The engine owns this frame from here on; it can no longer be
      // collapsed out of the queue by a later burst.
      result = AdmitResult::InferNow;
      ++infer_now_;
      ++inferred_;
      busy_ = true;
      direct_ = std::move(frame);
    } else {
      queue_.push_back(std::move(frame));
      const uint32_t threshold =
          drop_threshold(estimator_.rate_fps(), min_threshold_);
      if (queue_.size() >= threshold) {
        // Keep only the newest arrival; everything older is stale.
        victims.assign(queue_.begin(), std::prev(queue_.end()));
        queue_.erase(queue_.begin(), std::prev(queue_.end()));
        dropped_ += victims.size();
        ++drop_events_;
        ++enqueued_after_drop_;
        result = AdmitResult::EnqueuedAfterDrop;
        if (log_events_) {
          PipelineEvent ev{PipelineEventKind::Dropped, key, result, {}};
          for (const FramePtr& v : victims)
            ev.victims.push_back({v->robot_id, v->seq});
          events_.push_back(std::move(ev));
        }
      } else {
        result = AdmitResult::Enqueued;
        ++enqueued_;
      }
    }
    if (log_events_)
      events_.push_back({PipelineEventKind::Admitted, key, result, {}});
    cb = on_drop_;
  }
  cv_.notify_one();
  if (!victims.empty() && cb) cb(victims);
  return result;
}

FramePtr ProcessQueue::pop_locked() {
  FramePtr f;
  if (direct_) {
    f = std::move(direct_);
    direct_ = nullptr;  // busy_ and inferred_ were claimed at admission
  } else {
    f = std::move(queue_.front());
    queue_.pop_front();
    busy_ = true;
    ++inferred_;
  }
  if (log_events_)
    events_.push_back({PipelineEventKind::Dispatched,
                       {f->robot_id, f->seq},
                       AdmitResult::InferNow,
                       {}});
  return f;
}

std::optional<FramePtr> ProcessQueue::take() {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return shutdown_ || direct_ || !queue_.empty(); });
  if (!direct_ && queue_.empty()) return std::nullopt;
  return pop_locked();
}

FramePtr ProcessQueue::try_take() {
  std::lock_guard lk(mu_);
  if (!direct_ && queue_.empty()) return nullptr;
  return pop_locked();
}

void ProcessQueue::complete() {
  std::lock_guard lk(mu_);
  busy_ = false;
  if (log_events_)
    events_.push_back(
        {PipelineEventKind::Completed, {}, AdmitResult::InferNow, {}});
}

size_t ProcessQueue::purge_robot(const std::string& robot_id) {
  std::vector<FramePtr> victims;
  DropCallback cb;
  {
    std::lock_guard lk(mu_);
    auto keep = std::stable_partition(
        queue_.begin(), queue_.end(),
        [&](const FramePtr& f) { return f->robot_id != robot_id; });
    victims.assign(std::make_move_iterator(keep),
                   std::make_move_iterator(queue_.end()));
    queue_.erase(keep, queue_.end());
    dropped_ += victims.size();
    if (log_events_ && !victims.empty()) {
      PipelineEvent ev{PipelineEventKind::Dropped, {robot_id, 0},
                       AdmitResult::Enqueued, {}};
      for (const FramePtr& v : victims)
        ev.victims.push_back({v->robot_id, v->seq});
      events_.push_back(std::move(ev));
    }
    cb = on_drop_;
  }
  if (!victims.empty() && cb) cb(victims);
  return victims.size();
}

void ProcessQueue::record_latency_us(uint64_t us) {
  std::lock_guard lk(mu_);
  latencies_us_.push_back(us);
}

std::vector<uint64_t> ProcessQueue::latencies_us() const {
  std::lock_guard lk(mu_);
  return latencies_us_;
}

void ProcessQueue::shutdown() {
  {
    std::lock_guard lk(mu_);
    shutdown_ = true;
  }
  cv_.notify_all();
}

PipelineStats ProcessQueue::stats() const {
  std::lock_guard lk(mu_);
  PipelineStats s;
  s.frames_in = frames_in_;
  s.inferred = inferred_;
  s.dropped = dropped_;
  s.queue_depth = queue_.size();
  s.drop_events = drop_events_;
  s.infer_now = infer_now_;
  s.enqueued = enqueued_;
  s.enqueued_after_drop = enqueued_after_drop_;
  s.rate_fps = estimator_.rate_fps();
  return s;
}

std::vector<PipelineEvent> ProcessQueue::events() const {
  std::lock_guard lk(mu_);
  return events_;
}

}  // namespace infergate::pipeline
