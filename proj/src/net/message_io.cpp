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

#include "infergate/net/message_io.hpp"

#include "infergate/util/byteio.hpp"

namespace infergate::net {

ReadResult read_message(Socket& sock, uint32_t max_payload_len) {
  ReadResult r;
  std::vector<uint8_t> buf(wire::kHeaderSize);
  if (!sock.recv_exact(buf.data(), wire::kHeaderSize)) {
    r.status = ReadResult::Status::Closed;
    return r;
  }

  // A header-only decode validates magic/version/msg_type before it
  // reports Incomplete, so payload_len is trustworthy afterwards.
  wire::DecodeResult head = wire::decode_message(buf.data(), buf.size());
  if (head.status == wire::DecodeStatus::ProtocolError) {
    r.status = ReadResult::Status::ProtocolError;
    r.error = head.error;
    return r;
  }
  if (head.status == wire::DecodeStatus::Ok) {
    r.status = ReadResult::Status::Ok;
    r.header = std::move(head.header);
    r.payload = std::move(head.payload);
    return r;
  }

  const uint32_t payload_len = util::get_u32_be(buf.data() + 38);
  if (payload_len > max_payload_len) {
    r.status = ReadResult::Status::ProtocolError;
    r.error = "payload_len " + std::to_string(payload_len) +
              " exceeds limit " + std::to_string(max_payload_len);
    return r;
  }
  buf.resize(wire::kHeaderSize + payload_len);
  if (!sock.recv_exact(buf.data() + wire::kHeaderSize, payload_len)) {
    r.status = ReadResult::Status::Closed;
    return r;
  }

  wire::DecodeResult full = wire::decode_message(buf.data(), buf.size());
  if (full.status != wire::DecodeStatus::Ok) {
    r.status = ReadResult::Status::ProtocolError;
    r.error = full.error.empty() ? "undecodable message" : full.error;
    return r;
  }
  r.status = ReadResult::Status::Ok;
  r.header = std::move(full.header);
  r.payload = std::move(full.payload);
  return r;
}

void send_message(Socket& sock, const std::vector<uint8_t>& bytes) {
  sock.send_all(bytes.data(), bytes.size());
}

}  // namespace infergate::net
