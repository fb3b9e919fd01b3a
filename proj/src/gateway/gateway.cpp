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

#include "infergate/gateway/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "infergate/gateway/actions.hpp"
#include "infergate/gateway/overlay.hpp"
#include "infergate/net/message_io.hpp"
#include "infergate/net/socket.hpp"
#include "infergate/wire/protocol.hpp"

namespace infergate::gateway {
namespace {

uint64_t mono_now_us() {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

uint64_t wall_now_us() {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
}

uint16_t clamp_u16(int v) {
  return static_cast<uint16_t>(std::clamp(v, 0, 65535));
}

wire::BoxDetection to_wire(const detect::Detection& d) {
  wire::BoxDetection out;
  out.label_id = d.label_id;
  out.confidence = d.confidence;
  out.topleft_x = clamp_u16(d.box.x1);
  out.topleft_y = clamp_u16(d.box.y1);
  out.bottomright_x = clamp_u16(d.box.x2);
  out.bottomright_y = clamp_u16(d.box.y2);
  return out;
}

std::vector<uint8_t> text_payload(const std::string& text) {
  return std::vector<uint8_t>(text.begin(), text.end());
}

// Rough bound on monitor frames waiting to be rendered; the stream is
// best-effort so old frames are shed rather than queued.
constexpr size_t kMonitorJobLimit = 16;

}  // namespace

using SharedMessage = std::shared_ptr<const std::vector<uint8_t>>;

struct Gateway::Impl {
  // One connection: a receiver thread that parses the inbound stream and
  // a sender thread that drains the bounded outbound queue. All writes
  // to the socket go through the sender, so replies, results, actions
  // and the shutdown BYE never interleave mid-message.
  struct Session {
    net::Socket sock;
    std::string robot_id;
    bool is_monitor = false;
    ActionDispatcher dispatcher;  // touched only by the inference worker

    uint64_t last_seq = 0;
    bool have_seq = false;

    std::mutex mu;
    std::condition_variable cv;
    std::deque<SharedMessage> outbound;
    bool closing = false;

    std::thread receiver;
    std::thread sender;
  };

  GatewayOptions options;
  std::unique_ptr<detect::DetectorBackend> detector;
  ActionRegistry registry;
  uint64_t cooldown_us = 0;
  pipeline::ProcessQueue queue;
  net::Listener listener;

  // Routing state. monitor_count tracks how many registered sessions are
  // monitors so the worker can skip overlay work when nobody watches.
  mutable std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> by_robot;
  size_t monitor_count = 0;

  // Lifecycle state: live holds every accepted session until its threads
  // are joined; finished marks the ones whose receiver has returned.
  // live is always a superset of finished.
  std::mutex lifecycle_mu;
  std::vector<std::shared_ptr<Session>> live;
  std::vector<std::shared_ptr<Session>> finished;

  struct MonitorJob {
    FramePtr frame;
    std::vector<detect::Detection> detections;
  };
  std::mutex mon_mu;
  std::condition_variable mon_cv;
  std::deque<MonitorJob> mon_jobs;
  bool mon_stop = false;

  mutable std::mutex stats_mu;
  GatewayStats totals;

  std::atomic<bool> running{false};
  std::thread accept_thread;
  std::thread worker_thread;
  std::thread monitor_thread;

  Impl(GatewayOptions opts, std::unique_ptr<detect::DetectorBackend> det)
      : options(std::move(opts)),
        detector(std::move(det)),
        registry(options.config),
        cooldown_us(static_cast<uint64_t>(
            std::llround(options.config.cooldown_seconds * 1e6))),
        listener(options.listen_host, options.listen_port) {
    if (!detector) {
      throw std::invalid_argument("gateway requires a detector backend");
    }
    if (options.log_pipeline_events) {
      queue.enable_event_log(true);
    }
  }

  void bump(uint64_t GatewayStats::* field) {
    std::lock_guard<std::mutex> lk(stats_mu);
    ++(totals.*field);
  }

  // Appends to the session's outbound queue, shedding the oldest message
  // when the queue is full so one stalled client only loses its own
  // stream. No-op once the session is closing.
  void enqueue(Session& s, SharedMessage msg) {
    bool dropped = false;
    {
      std::lock_guard<std::mutex> lk(s.mu);
      if (s.closing) {
        return;
      }
      if (s.outbound.size() >= options.outbound_queue_limit) {
        s.outbound.pop_front();
        dropped = true;
      }
      s.outbound.push_back(std::move(msg));
    }
    s.cv.notify_one();
    if (dropped) {
      bump(&GatewayStats::outbound_dropped);
    }
  }

  void sender_loop(const std::shared_ptr<Session>& s) {
    for (;;) {
      SharedMessage msg;
      {
        std::unique_lock<std::mutex> lk(s->mu);
        s->cv.wait(lk, [&] { return s->closing || !s->outbound.empty(); });
        if (s->outbound.empty()) {
          return;  // closing and fully flushed
        }
        msg = std::move(s->outbound.front());
        s->outbound.pop_front();
      }
      try {
        net::send_message(s->sock, *msg);
      } catch (const net::NetError&) {
        std::lock_guard<std::mutex> lk(s->mu);
        s->closing = true;
        s->outbound.clear();
        return;
      }
    }
  }

  // Enqueues a farewell (or nothing) and tells the sender to flush and
  // exit. Used by both reject paths and the gateway-wide stop().
  void begin_close(Session& s, const SharedMessage& farewell) {
    {
      std::lock_guard<std::mutex> lk(s.mu);
      if (!s.closing) {
        if (farewell) {
          s.outbound.push_back(farewell);
        }
        s.closing = true;
      }
    }
    s.cv.notify_all();
  }

  void receiver_loop(const std::shared_ptr<Session>& s) {
    bool registered = handshake(s);
    if (registered) {
      stream_loop(s);
      unregister(s);
    }
    begin_close(*s, nullptr);
    s->sock.shutdown_both();
    {
      std::lock_guard<std::mutex> lk(lifecycle_mu);
      finished.push_back(s);
    }
  }

  // First message must be HELLO with a fresh robot_id. A duplicate id is
  // answered with BYE carrying the reason; anything malformed closes the
  // connection without a reply.
  bool handshake(const std::shared_ptr<Session>& s) {
    net::ReadResult first = net::read_message(s->sock);
    if (first.status != net::ReadResult::Status::Ok ||
        first.header.msg_type != wire::MsgType::HELLO) {
      bump(&GatewayStats::sessions_rejected);
      return false;
    }
    const std::string& rid = first.header.robot_id;
    if (rid.empty()) {
      begin_close(*s, std::make_shared<const std::vector<uint8_t>>(
                          wire::encode_message(wire::MsgType::BYE, "", 0,
                                               wall_now_us(),
                                               text_payload("empty robot_id"))));
      bump(&GatewayStats::sessions_rejected);
      return false;
    }

    // Fill in everything the worker may touch before the session becomes
    // reachable through the routing map.
    s->robot_id = rid;
    s->is_monitor = rid.rfind(kMonitorPrefix, 0) == 0;
    s->dispatcher =
        ActionDispatcher(&registry, registry.bindings_for(rid), cooldown_us);

    bool inserted = false;
    {
      std::lock_guard<std::mutex> lk(sessions_mu);
      inserted = by_robot.emplace(rid, s).second;
      if (inserted && s->is_monitor) {
        ++monitor_count;
      }
    }
    if (!inserted) {
      begin_close(*s,
                  std::make_shared<const std::vector<uint8_t>>(
                      wire::encode_message(
                          wire::MsgType::BYE, rid, 0, wall_now_us(),
                          text_payload("robot_id already connected"))));
      bump(&GatewayStats::sessions_rejected);
      return false;
    }

    bump(s->is_monitor ? &GatewayStats::monitors_accepted
                       : &GatewayStats::sessions_accepted);
    enqueue(*s, std::make_shared<const std::vector<uint8_t>>(
                    wire::encode_message(wire::MsgType::HELLO, rid, 0,
                                         wall_now_us(), {})));
    return true;
  }

  void stream_loop(const std::shared_ptr<Session>& s) {
    for (;;) {
      net::ReadResult rr = net::read_message(s->sock);
      if (rr.status == net::ReadResult::Status::Closed) {
        return;
      }
      if (rr.status == net::ReadResult::Status::ProtocolError) {
        // Framing is gone; there is no way to resynchronize a TCP
        // stream, so the connection ends here.
        bump(&GatewayStats::protocol_errors);
        return;
      }
      switch (rr.header.msg_type) {
        case wire::MsgType::BYE:
          return;
        case wire::MsgType::FRAME:
          handle_frame(s, rr);
          break;
        default:
          // Clients have no business sending RESULT/ACTION/MONITOR (or a
          // second HELLO); the stream itself is still intact.
          bump(&GatewayStats::protocol_errors);
          break;
      }
    }
  }

  void handle_frame(const std::shared_ptr<Session>& s,
                    net::ReadResult& rr) {
    if (s->is_monitor || rr.header.robot_id != s->robot_id) {
      bump(&GatewayStats::protocol_errors);
      return;
    }
    if (s->have_seq && rr.header.seq <= s->last_seq) {
      bump(&GatewayStats::protocol_errors);
      return;
    }
    std::optional<wire::FramePayload> fp = wire::decode_frame_payload(rr.payload);
    if (!fp) {
      bump(&GatewayStats::protocol_errors);
      return;
    }
    s->last_seq = rr.header.seq;
    s->have_seq = true;

    auto frame = std::make_shared<Frame>();
    frame->robot_id = s->robot_id;
    frame->seq = rr.header.seq;
    frame->timestamp_us = rr.header.timestamp_us;
    frame->width = fp->width;
    frame->height = fp->height;
    frame->pixels = std::move(fp->pixels);
    frame->arrival_us = mono_now_us();

    bump(&GatewayStats::frames_received);
    queue.admit(std::move(frame));
  }

  void unregister(const std::shared_ptr<Session>& s) {
    {
      std::lock_guard<std::mutex> lk(sessions_mu);
      auto it = by_robot.find(s->robot_id);
      if (it != by_robot.end() && it->second.get() == s.get()) {
        by_robot.erase(it);
        if (s->is_monitor) {
          --monitor_count;
        }
      }
    }
    // A departing robot's backlog is stale by definition.
    queue.purge_robot(s->robot_id);
    bump(&GatewayStats::sessions_closed);
  }

  void accept_loop() {
    for (;;) {
      std::optional<net::Socket> sock = listener.accept();
      if (!sock) {
        return;
      }
      reap_finished();
      auto s = std::make_shared<Session>();
      s->sock = std::move(*sock);
      {
        std::lock_guard<std::mutex> lk(lifecycle_mu);
        live.push_back(s);
      }
      s->sender = std::thread([this, s] { sender_loop(s); });
      s->receiver = std::thread([this, s] { receiver_loop(s); });
    }
  }

  // Joins the threads of sessions whose receiver has already returned,
  // so connection churn does not accumulate joinable threads. Runs on
  // the accept thread between connections and once more during stop().
  void reap_finished() {
    std::vector<std::shared_ptr<Session>> done;
    {
      std::lock_guard<std::mutex> lk(lifecycle_mu);
      done.swap(finished);
      for (const auto& s : done) {
        std::erase(live, s);
      }
    }
    for (const auto& s : done) {
      if (s->receiver.joinable()) {
        s->receiver.join();
      }
      if (s->sender.joinable()) {
        s->sender.join();
      }
    }
  }

  void worker_loop() {
    for (;;) {
      std::optional<FramePtr> next = queue.take();
      if (!next) {
        return;
      }
      FramePtr frame = *next;
      std::vector<detect::Detection> detections;
      try {
        detections = detector->detect(*frame);
      } catch (const std::exception&) {
        detections.clear();  // a bad frame yields an empty result
      }
      route_result(frame, detections);
      queue.record_latency_us(mono_now_us() - frame->arrival_us);
      queue.complete();
    }
  }

  void route_result(const FramePtr& frame,
                    const std::vector<detect::Detection>& detections) {
    wire::ResultPayload rp;
    rp.frame_seq = frame->seq;
    rp.detections.reserve(detections.size());
    for (const auto& d : detections) {
      rp.detections.push_back(to_wire(d));
    }
    auto result_msg = std::make_shared<const std::vector<uint8_t>>(
        wire::encode_message(wire::MsgType::RESULT, frame->robot_id,
                             frame->seq, wall_now_us(),
                             wire::encode_result_payload(rp)));

    std::shared_ptr<Session> origin;
    bool monitors = false;
    {
      std::lock_guard<std::mutex> lk(sessions_mu);
      auto it = by_robot.find(frame->robot_id);
      if (it != by_robot.end()) {
        origin = it->second;
      }
      monitors = monitor_count > 0;
    }

    if (origin) {
      enqueue(*origin, result_msg);
      bump(&GatewayStats::results_sent);
      std::optional<wire::ActionPayload> action =
          origin->dispatcher.dispatch(detections, mono_now_us());
      if (action) {
        enqueue(*origin,
                std::make_shared<const std::vector<uint8_t>>(
                    wire::encode_message(wire::MsgType::ACTION,
                                         frame->robot_id, frame->seq,
                                         wall_now_us(),
                                         wire::encode_action_payload(*action))));
        bump(&GatewayStats::actions_sent);
      }
    } else {
      bump(&GatewayStats::results_discarded);
    }

    if (monitors) {
      {
        std::lock_guard<std::mutex> lk(mon_mu);
        if (mon_jobs.size() >= kMonitorJobLimit) {
          mon_jobs.pop_front();
        }
        mon_jobs.push_back(MonitorJob{frame, detections});
      }
      mon_cv.notify_one();
    }
  }

  void monitor_loop() {
    for (;;) {
      MonitorJob job;
      {
        std::unique_lock<std::mutex> lk(mon_mu);
        mon_cv.wait(lk, [&] { return mon_stop || !mon_jobs.empty(); });
        if (mon_stop) {
          return;
        }
        job = std::move(mon_jobs.front());
        mon_jobs.pop_front();
      }
      wire::FramePayload annotated =
          overlay(*job.frame, job.detections, options.config.class_names);
      auto msg = std::make_shared<const std::vector<uint8_t>>(
          wire::encode_message(wire::MsgType::MONITOR, job.frame->robot_id,
                               job.frame->seq, wall_now_us(),
                               wire::encode_frame_payload(annotated)));
      std::vector<std::shared_ptr<Session>> watchers;
      {
        std::lock_guard<std::mutex> lk(sessions_mu);
        for (const auto& [rid, sess] : by_robot) {
          if (sess->is_monitor) {
            watchers.push_back(sess);
          }
        }
      }
      if (watchers.empty()) {
        continue;
      }
      for (const auto& w : watchers) {
        enqueue(*w, msg);
      }
      bump(&GatewayStats::monitor_frames);
    }
  }

  void start() {
    if (running.exchange(true)) {
      return;
    }
    worker_thread = std::thread([this] { worker_loop(); });
    monitor_thread = std::thread([this] { monitor_loop(); });
    accept_thread = std::thread([this] { accept_loop(); });
  }

  void stop() {
    if (!running.exchange(false)) {
      return;
    }
    // Intake first: no new connections, then no more inference, then no
    // more monitor frames. Only then are the sessions told goodbye.
    listener.close();
    if (accept_thread.joinable()) {
      accept_thread.join();
    }
    queue.shutdown();
    if (worker_thread.joinable()) {
      worker_thread.join();
    }
    {
      std::lock_guard<std::mutex> lk(mon_mu);
      mon_stop = true;
    }
    mon_cv.notify_all();
    if (monitor_thread.joinable()) {
      monitor_thread.join();
    }

    std::vector<std::shared_ptr<Session>> all;
    {
      std::lock_guard<std::mutex> lk(lifecycle_mu);
      all = live;
    }
    for (const auto& s : all) {
      begin_close(*s, std::make_shared<const std::vector<uint8_t>>(
                          wire::encode_message(wire::MsgType::BYE, s->robot_id,
                                               0, wall_now_us(), {})));
    }
    // Give the senders a moment to flush the farewell before the sockets
    // are shut down under them.
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    for (const auto& s : all) {
      s->sock.shutdown_both();
    }
    for (const auto& s : all) {
      if (s->receiver.joinable()) {
        s->receiver.join();
      }
      if (s->sender.joinable()) {
        s->sender.join();
      }
    }
    {
      std::lock_guard<std::mutex> lk(lifecycle_mu);
      live.clear();
      finished.clear();
    }
  }

  GatewayStats stats() const {
    GatewayStats out;
    {
      std::lock_guard<std::mutex> lk(stats_mu);
      out = totals;
    }
    out.pipeline = queue.stats();
    return out;
  }
};

Gateway::Gateway(GatewayOptions options,
                 std::unique_ptr<detect::DetectorBackend> detector)
    : impl_(std::make_unique<Impl>(std::move(options), std::move(detector))) {}

Gateway::~Gateway() { stop(); }

void Gateway::start() { impl_->start(); }

void Gateway::stop() { impl_->stop(); }

uint16_t Gateway::port() const { return impl_->listener.port(); }

bool Gateway::running() const { return impl_->running.load(); }

GatewayStats Gateway::stats() const { return impl_->stats(); }

pipeline::ProcessQueue& Gateway::queue() { return impl_->queue; }

std::string Gateway::stats_line() const {
  GatewayStats s = stats();
  std::ostringstream os;
  os << "sessions=" << s.sessions_accepted << " monitors=" << s.monitors_accepted
     << " closed=" << s.sessions_closed << " frames=" << s.frames_received
     << " inferred=" << s.pipeline.inferred << " dropped=" << s.pipeline.dropped
     << " depth=" << s.pipeline.queue_depth << " rate=" << s.pipeline.rate_fps
     << " results=" << s.results_sent << " actions=" << s.actions_sent
     << " monitor_frames=" << s.monitor_frames
     << " errors=" << s.protocol_errors;
  return os.str();
}

}  // namespace infergate::gateway
