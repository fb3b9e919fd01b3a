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

// Binary message framing between robot clients and the gateway.
//
// Every message is a fixed 42-byte header followed by a payload of
// `payload_len` bytes. Multi-byte header fields are big-endian.
//
//   offset  size  field
//   0       4     magic 0x4E414F49 ("NAOI")
//   4       1     version (1)
//   5       1     msg_type
//   6       16    robot_id, zero-padded text
//   22      8     seq
//   30      8     timestamp_us
//   38      4     payload_len
//   42      ...   payload
//
// The full layout including per-payload encodings is documented in
// docs/protocol.md.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace infergate::wire {

constexpr uint32_t kMagic = 0x4E414F49;  // "NAOI"
constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderSize = 42;
constexpr size_t kRobotIdSize = 16;

enum class MsgType : uint8_t {
  FRAME = 1,
  RESULT = 2,
  ACTION = 3,
  MONITOR = 4,
  HELLO = 5,
  BYE = 6,
};

bool msg_type_valid(uint8_t raw);

struct MessageHeader {
  uint8_t version = kVersion;
  MsgType msg_type = MsgType::HELLO;
  std::string robot_id;  // at most 15 bytes of text on the wire
  uint64_t seq = 0;
  uint64_t timestamp_us = 0;
  uint32_t payload_len = 0;

  bool operator==(const MessageHeader&) const = default;
};

enum class PixelFormat : uint8_t { RGB24 = 1 };

// width(u16) height(u16) pixel_format(u8) pixels[width*height*3]
struct FramePayload {
  uint16_t width = 0;
  uint16_t height = 0;
  PixelFormat pixel_format = PixelFormat::RGB24;
  std::vector<uint8_t> pixels;

  bool operator==(const FramePayload&) const = default;
};

struct BoxDetection {
  uint16_t label_id = 0;
  float confidence = 0.0f;
  uint16_t topleft_x = 0;
  uint16_t topleft_y = 0;
  uint16_t bottomright_x = 0;
  uint16_t bottomright_y = 0;

  bool operator==(const BoxDetection&) const = default;
};

// frame_seq(u64) count(u16) then per detection:
// label_id(u16) confidence(f32) tlx(u16) tly(u16) brx(u16) bry(u16)
struct ResultPayload {
  uint64_t frame_seq = 0;
  std::vector<BoxDetection> detections;

  bool operator==(const ResultPayload&) const = default;
};

// action_id(u16) args_len(u16) args(UTF-8)
struct ActionPayload {
  uint16_t action_id = 0;
  std::string args;

  bool operator==(const ActionPayload&) const = default;
};

class EncodeError : public std::runtime_error {
 public:
  explicit EncodeError(const std::string& what) : std::runtime_error(what) {}
};

// Header + payload to wire bytes. Throws EncodeError when
// header.payload_len disagrees with payload.size() or robot_id does not
// fit the 16-byte field.
std::vector<uint8_t> encode_message(const MessageHeader& header,
                                    const std::vector<uint8_t>& payload);

// Convenience: fills payload_len from the payload.
std::vector<uint8_t> encode_message(MsgType type, const std::string& robot_id,
                                    uint64_t seq, uint64_t timestamp_us,
                                    const std::vector<uint8_t>& payload);

enum class DecodeStatus : uint8_t {
  Ok,             // one message consumed
  Incomplete,     // need more bytes, nothing consumed
  ProtocolError,  // stream unusable (bad magic/version/msg_type)
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Incomplete;
  MessageHeader header;
  std::vector<uint8_t> payload;
  size_t consumed = 0;   // bytes consumed on Ok
  std::string error;     // set on ProtocolError
};

// Decodes the first message of `data`. Never throws; every input yields
// Ok, Incomplete or ProtocolError.
DecodeResult decode_message(const uint8_t* data, size_t len);
DecodeResult decode_message(const std::vector<uint8_t>& data);

// Payload codecs. Encoders never fail on well-formed structs; decoders
// return nullopt on malformed bytes.
std::vector<uint8_t> encode_frame_payload(const FramePayload& frame);
std::optional<FramePayload> decode_frame_payload(const std::vector<uint8_t>& payload);

std::vector<uint8_t> encode_result_payload(const ResultPayload& result);
std::optional<ResultPayload> decode_result_payload(const std::vector<uint8_t>& payload);

std::vector<uint8_t> encode_action_payload(const ActionPayload& action);
std::optional<ActionPayload> decode_action_payload(const std::vector<uint8_t>& payload);

}  // namespace infergate::wire
