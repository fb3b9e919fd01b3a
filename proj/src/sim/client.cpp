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

#include "infergate/sim/client.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>

#include "infergate/net/message_io.hpp"
#include "infergate/net/socket.hpp"

namespace infergate::sim {
namespace {

using Clock = std::chrono::steady_clock;

uint64_t mono_now_us() {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(
          Clock::now().time_since_epoch())
          .count());
}

detect::Detection from_wire(const wire::BoxDetection& b) {
  detect::Detection d;
  d.label_id = b.label_id;
  d.confidence = b.confidence;
  d.box = Box{b.topleft_x, b.topleft_y, b.bottomright_x, b.bottomright_y};
  return d;
}

// Shared between the pacing loop and the result-reader thread.
struct Inbox {
  std::mutex mu;
  ClientReport* report = nullptr;
  std::unordered_map<uint64_t, size_t> record_by_seq;
  std::atomic<uint64_t> last_result_us{0};
  std::atomic<bool> closed{false};
};

void reader_loop(net::Socket& sock, Inbox& inbox) {
  for (;;) {
    net::ReadResult rr = net::read_message(sock);
    if (rr.status != net::ReadResult::Status::Ok) {
      std::lock_guard<std::mutex> lk(inbox.mu);
      if (rr.status == net::ReadResult::Status::ProtocolError &&
          inbox.report->disconnect_reason.empty()) {
        inbox.report->disconnect_reason = "protocol-error: " + rr.error;
      }
      break;
    }
    if (rr.header.msg_type == wire::MsgType::BYE) {
      std::lock_guard<std::mutex> lk(inbox.mu);
      if (inbox.report->disconnect_reason.empty()) {
        inbox.report->disconnect_reason = "server-bye";
      }
      break;
    }
    if (rr.header.msg_type == wire::MsgType::RESULT) {
      std::optional<wire::ResultPayload> rp =
          wire::decode_result_payload(rr.payload);
      if (!rp) {
        continue;
      }
      uint64_t now = mono_now_us();
      std::lock_guard<std::mutex> lk(inbox.mu);
      auto it = inbox.record_by_seq.find(rp->frame_seq);
      if (it != inbox.record_by_seq.end()) {
        eval::EvalRecord& rec = inbox.report->records[it->second];
        if (!rec.has_result()) {
          ++inbox.report->results_received;
        }
        rec.t_result_us = now;
        rec.predictions.clear();
        rec.predictions.reserve(rp->detections.size());
        for (const auto& b : rp->detections) {
          rec.predictions.push_back(from_wire(b));
        }
      }
      inbox.last_result_us.store(now);
      continue;
    }
    if (rr.header.msg_type == wire::MsgType::ACTION) {
      std::optional<wire::ActionPayload> ap =
          wire::decode_action_payload(rr.payload);
      if (!ap) {
        continue;
      }
      std::lock_guard<std::mutex> lk(inbox.mu);
      ++inbox.report->actions_received;
      inbox.report->actions.push_back(std::move(*ap));
      continue;
    }
    // MONITOR or a stray HELLO: nothing for a streaming robot to do.
  }
  inbox.closed.store(true);
}

}  // namespace

ClientReport run_client(const StreamProfile& profile, const SceneSpec& scene,
                        const std::string& host, uint16_t port,
                        const std::string& robot_id, double duration_s) {
  ClientReport report;
  report.robot_id = robot_id;

  const double fps = std::max(profile.nominal_fps, 0.001);
  const double interval_us = 1e6 / fps;
  const double scale = std::max(profile.time_scale, 1e-6);
  const double jitter_max = std::max(profile.jitter_max, 0.0);
  const double stall_gap = std::max(profile.stall_intervals, 2.0);
  std::mt19937_64 rng(profile.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  net::Socket sock;
  try {
    sock = net::connect_to(host, port);
    net::send_message(sock, wire::encode_message(wire::MsgType::HELLO, robot_id,
                                                 0, mono_now_us(), {}));
  } catch (const net::NetError& e) {
    report.disconnect_reason = std::string("refused: ") + e.what();
    return report;
  }

  // The gateway answers HELLO (accept) or BYE with a reason (reject).
  {
    net::ReadResult ack = net::read_message(sock);
    if (ack.status != net::ReadResult::Status::Ok) {
      report.disconnect_reason = "no-handshake";
      return report;
    }
    if (ack.header.msg_type == wire::MsgType::BYE) {
      report.disconnect_reason =
          "rejected: " + std::string(ack.payload.begin(), ack.payload.end());
      return report;
    }
    if (ack.header.msg_type != wire::MsgType::HELLO) {
      report.disconnect_reason = "bad-handshake";
      return report;
    }
  }
  report.connected = true;

  Inbox inbox;
  inbox.report = &report;
  std::thread reader([&] { reader_loop(sock, inbox); });

  const uint64_t duration_us =
      static_cast<uint64_t>(std::llround(std::max(duration_s, 0.0) * 1e6));
  const Clock::time_point wall_start = Clock::now();
  double next_stream_us = 0.0;  // camera-time offset of the next frame
  // seq doubles as the scene frame index: stalls and jitter advance it by
  // more than one, so downstream consumers can place every frame on the
  // scene timeline. Gaps between intervals are always >= 1 interval,
  // keeping it strictly increasing as the protocol requires.
  int64_t last_index = -1;

  while (next_stream_us < static_cast<double>(duration_us)) {
    if (inbox.closed.load()) {
      break;  // server went away mid-stream; keep the partial report
    }
    // Camera time is compressed into wall time by time_scale; absolute
    // deadlines keep the realized rate from drifting under load.
    std::this_thread::sleep_until(
        wall_start +
        std::chrono::microseconds(
            static_cast<int64_t>(std::llround(next_stream_us / scale))));

    int64_t frame_index =
        std::max<int64_t>(std::llround(next_stream_us / interval_us),
                          last_index + 1);
    last_index = frame_index;
    RenderedFrame rendered =
        render_frame(scene, static_cast<uint32_t>(frame_index));
    const uint64_t seq = static_cast<uint64_t>(frame_index);
    uint64_t t_sent = mono_now_us();
    std::vector<uint8_t> msg = wire::encode_message(
        wire::MsgType::FRAME, robot_id, seq, t_sent,
        wire::encode_frame_payload(rendered.frame));
    try {
      net::send_message(sock, msg);
    } catch (const net::NetError& e) {
      std::lock_guard<std::mutex> lk(inbox.mu);
      if (report.disconnect_reason.empty()) {
        report.disconnect_reason = std::string("send-failed: ") + e.what();
      }
      break;
    }
    {
      std::lock_guard<std::mutex> lk(inbox.mu);
      eval::EvalRecord rec;
      rec.seq = seq;
      rec.t_sent_us = t_sent;
      rec.truth = std::move(rendered.truth);
      inbox.record_by_seq[seq] = report.records.size();
      report.records.push_back(std::move(rec));
      ++report.frames_sent;
    }

    double gap;
    if (profile.stall_probability > 0.0 && uni(rng) < profile.stall_probability) {
      gap = stall_gap * interval_us;
      ++report.stalls;
    } else {
      gap = (1.0 + uni(rng) * jitter_max) * interval_us;
    }
    next_stream_us += gap;
  }

  // Let the result stream go quiet before disconnecting, so frames still
  // queued at the gateway have a chance to come back.
  const uint64_t drain_grace_us = 300'000;
  uint64_t drain_start = mono_now_us();
  for (;;) {
    if (inbox.closed.load()) {
      break;
    }
    bool all_back;
    {
      std::lock_guard<std::mutex> lk(inbox.mu);
      all_back = report.results_received == report.frames_sent;
    }
    if (all_back) {
      break;
    }
    uint64_t last = std::max(inbox.last_result_us.load(), drain_start);
    if (mono_now_us() > last + drain_grace_us) {
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  {
    std::lock_guard<std::mutex> lk(inbox.mu);
    if (report.disconnect_reason.empty()) {
      report.disconnect_reason = "done";
    }
  }
  try {
    net::send_message(sock, wire::encode_message(wire::MsgType::BYE, robot_id,
                                                 0, mono_now_us(), {}));
  } catch (const net::NetError&) {
    // Already gone; the reader saw it first.
  }
  sock.shutdown_both();
  reader.join();

  report.stream_seconds = next_stream_us / 1e6;
  report.wall_seconds =
      std::chrono::duration<double>(Clock::now() - wall_start).count();
  return report;
}

}  // namespace infergate::sim
