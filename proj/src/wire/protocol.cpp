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

#include "infergate/wire/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "infergate/util/byteio.hpp"

namespace infergate::wire {

using namespace infergate::util;

bool msg_type_valid(uint8_t raw) {
  return raw >= static_cast<uint8_t>(MsgType::FRAME) &&
         raw <= static_cast<uint8_t>(MsgType::BYE);
}

std::vector<uint8_t> encode_message(const MessageHeader& header,
                                    const std::vector<uint8_t>& payload) {
  if (header.payload_len != payload.size())
    throw EncodeError("payload_len " + std::to_string(header.payload_len) +
                      " does not match payload size " +
                      std::to_string(payload.size()));
  // The field is NUL-padded and read back to the first NUL, so the text
  // must leave room for at least one padding byte to round-trip.
  if (header.robot_id.size() >= kRobotIdSize)
    throw EncodeError("robot_id longer than " +
                      std::to_string(kRobotIdSize - 1) +
                      " bytes: " + header.robot_id);
  if (header.robot_id.find('\0') != std::string::npos)
    throw EncodeError("robot_id contains NUL");

  std::vector<uint8_t> out;
  out.reserve(kHeaderSize + payload.size());
  put_u32_be(out, kMagic);
  put_u8(out, header.version);
  put_u8(out, static_cast<uint8_t>(header.msg_type));
  for (size_t i = 0; i < kRobotIdSize; ++i)
    out.push_back(i < header.robot_id.size()
                      ? static_cast<uint8_t>(header.robot_id[i])
                      : 0);
  put_u64_be(out, header.seq);
  put_u64_be(out, header.timestamp_us);
  put_u32_be(out, header.payload_len);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::vector<uint8_t> encode_message(MsgType type, const std::string& robot_id,
                                    uint64_t seq, uint64_t timestamp_us,
                                    const std::vector<uint8_t>& payload) {
  MessageHeader h;
  h.msg_type = type;
  h.robot_id = robot_id;
  h.seq = seq;
  h.timestamp_us = timestamp_us;
  h.payload_len = static_cast<uint32_t>(payload.size());
  return encode_message(h, payload);
}

DecodeResult decode_message(const uint8_t* data, size_t len) {
  DecodeResult r;
  if (len < kHeaderSize) {
    r.status = DecodeStatus::Incomplete;
    return r;
  }
  if (get_u32_be(data) != kMagic) {
    r.status = DecodeStatus::ProtocolError;
    r.error = "bad magic";
    return r;
  }
  const uint8_t version = get_u8(data + 4);
  if (version != kVersion) {
    r.status = DecodeStatus::ProtocolError;
    r.error = "unsupported version " + std::to_string(version);
    return r;
  }
  const uint8_t raw_type = get_u8(data + 5);
  if (!msg_type_valid(raw_type)) {
    r.status = DecodeStatus::ProtocolError;
    r.error = "unknown msg_type " + std::to_string(raw_type);
    return r;
  }
  const uint32_t payload_len = get_u32_be(data + 38);
  if (len < kHeaderSize + payload_len) {
    r.status = DecodeStatus::Incomplete;
    return r;
  }

  r.header.version = version;
  r.header.msg_type = static_cast<MsgType>(raw_type);
  // robot_id: up to the first NUL in the 16-byte field
  const uint8_t* id = data + 6;
  size_t id_len = 0;
  while (id_len < kRobotIdSize && id[id_len] != 0) ++id_len;
  r.header.robot_id.assign(reinterpret_cast<const char*>(id), id_len);
  r.header.seq = get_u64_be(data + 22);
  r.header.timestamp_us = get_u64_be(data + 30);
  r.header.payload_len = payload_len;
  r.payload.assign(data + kHeaderSize, data + kHeaderSize + payload_len);
  r.consumed = kHeaderSize + payload_len;
  r.status = DecodeStatus::Ok;
  return r;
}

DecodeResult decode_message(const std::vector<uint8_t>& data) {
  return decode_message(data.data(), data.size());
}

std::vector<uint8_t> encode_frame_payload(const FramePayload& frame) {
  std::vector<uint8_t> out;
  out.reserve(5 + frame.pixels.size());
  put_u16_be(out, frame.width);
  put_u16_be(out, frame.height);
  put_u8(out, static_cast<uint8_t>(frame.pixel_format));
  out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
  return out;
}

std::optional<FramePayload> decode_frame_payload(const std::vector<uint8_t>& payload) {
  if (payload.size() < 5) return std::nullopt;
  FramePayload f;
  f.width = get_u16_be(payload.data());
  f.height = get_u16_be(payload.data() + 2);
  const uint8_t fmt = get_u8(payload.data() + 4);
  if (fmt != static_cast<uint8_t>(PixelFormat::RGB24)) return std::nullopt;
  f.pixel_format = PixelFormat::RGB24;
  const size_t expected = static_cast<size_t>(f.width) * f.height * 3;
  if (f.width == 0 || f.height == 0 || payload.size() != 5 + expected)
    return std::nullopt;
  f.pixels.assign(payload.begin() + 5, payload.end());
  return f;
}

std::vector<uint8_t> encode_result_payload(const ResultPayload& result) {
  std::vector<uint8_t> out;
  out.reserve(10 + result.detections.size() * 14);
  put_u64_be(out, result.frame_seq);
  put_u16_be(out, static_cast<uint16_t>(result.detections.size()));
  for (const BoxDetection& d : result.detections) {
    put_u16_be(out, d.label_id);
    put_f32_be(out, d.confidence);
    put_u16_be(out, d.topleft_x);
    put_u16_be(out, d.topleft_y);
    put_u16_be(out, d.bottomright_x);
    put_u16_be(out, d.bottomright_y);
  }
  return out;
}

std::optional<ResultPayload> decode_result_payload(const std::vector<uint8_t>& payload) {
  if (payload.size() < 10) return std::nullopt;
  ResultPayload r;
  r.frame_seq = get_u64_be(payload.data());
  const uint16_t count = get_u16_be(payload.data() + 8);
  if (payload.size() != 10 + static_cast<size_t>(count) * 14) return std::nullopt;
  const uint8_t* p = payload.data() + 10;
  r.detections.reserve(count);
  for (uint16_t i = 0; i < count; ++i, p += 14) {
    BoxDetection d;
    d.label_id = get_u16_be(p);
    d.confidence = get_f32_be(p + 2);
    d.topleft_x = get_u16_be(p + 6);
    d.topleft_y = get_u16_be(p + 8);
    d.bottomright_x = get_u16_be(p + 10);
    d.bottomright_y = get_u16_be(p + 12);
    if (d.topleft_x >= d.bottomright_x || d.topleft_y >= d.bottomright_y)
      return std::nullopt;
    if (!(d.confidence >= 0.0f && d.confidence <= 1.0f)) return std::nullopt;
    r.detections.push_back(d);
  }
  return r;
}

std::vector<uint8_t> encode_action_payload(const ActionPayload& action) {
  std::vector<uint8_t> out;
  out.reserve(4 + action.args.size());
  put_u16_be(out, action.action_id);
  put_u16_be(out, static_cast<uint16_t>(action.args.size()));
  out.insert(out.end(), action.args.begin(), action.args.end());
  return out;
}

std::optional<ActionPayload> decode_action_payload(const std::vector<uint8_t>& payload) {
  if (payload.size() < 4) return std::nullopt;
  ActionPayload a;
  a.action_id = get_u16_be(payload.data());
  const uint16_t args_len = get_u16_be(payload.data() + 2);
  if (payload.size() != 4u + args_len) return std::nullopt;
  a.args.assign(payload.begin() + 4, payload.end());
  return a;
}

}  // namespace infergate::wire
