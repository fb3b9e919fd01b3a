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
#include <string>
#include <vector>

#include "infergate/net/socket.hpp"
#include "infergate/wire/protocol.hpp"

namespace infergate::net {

// Upper bound a reader will accept for one payload; a 640x480 RGB frame
// is ~900 KB, so this leaves generous headroom while bounding a
// misbehaving peer's allocation.
inline constexpr uint32_t kMaxPayloadBytes = 16u * 1024 * 1024;

struct ReadResult {
  enum class Status : uint8_t { Ok, Closed, ProtocolError } status =
      Status::Closed;
  wire::MessageHeader header;
  std::vector<uint8_t> payload;
  std::string error;  // set on ProtocolError
};

// Reads exactly one framed message off the socket. Closed covers both a
// clean shutdown between messages and truncation inside one.
ReadResult read_message(Socket& sock,
                        uint32_t max_payload_len = kMaxPayloadBytes);

// send_all of an already-encoded message.
void send_message(Socket& sock, const std::vector<uint8_t>& bytes);

}  // namespace infergate::net
