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

#include <chrono>
#include <thread>
#include <vector>

#include "doctest.h"
#include "infergate/net/message_io.hpp"
#include "infergate/net/socket.hpp"
#include "infergate/wire/protocol.hpp"

using namespace infergate;
using namespace infergate::net;

TEST_SUITE("net") {

TEST_CASE("address strings parse with sensible defaults") {
  Address a = parse_address("192.168.1.7:9559");
  CHECK(a.host == "192.168.1.7");
  CHECK(a.port == 9559);

  CHECK(parse_address("9559").host == "127.0.0.1");
  CHECK(parse_address("9559").port == 9559);
  CHECK(parse_address(":8080").host == "127.0.0.1");
  CHECK(parse_address(":8080").port == 8080);
  CHECK(parse_address("0.0.0.0:0").port == 0);

  CHECK_THROWS_AS(parse_address("host:"), NetError);
  CHECK_THROWS_AS(parse_address("host:abc"), NetError);
  CHECK_THROWS_AS(parse_address("host:70000"), NetError);
  CHECK_THROWS_AS(parse_address("12x"), NetError);
  CHECK_THROWS_AS(parse_address(""), NetError);
}

TEST_CASE("loopback round trip preserves the message") {
  Listener listener("127.0.0.1", 0);
  REQUIRE(listener.port() != 0);

  ReadResult seen;
  std::thread server([&] {
    std::optional<Socket> peer = listener.accept();
    REQUIRE(peer.has_value());
    seen = read_message(*peer);
    send_message(*peer,
                 wire::encode_message(wire::MsgType::RESULT, "gw", 1, 50, {9}));
  });

  Socket client = connect_to("127.0.0.1", listener.port());
  send_message(client, wire::encode_message(wire::MsgType::HELLO, "nao-2", 7,
                                            123456, {}));
  ReadResult reply = read_message(client);
  server.join();

  REQUIRE(seen.status == ReadResult::Status::Ok);
  CHECK(seen.header.msg_type == wire::MsgType::HELLO);
  CHECK(seen.header.robot_id == "nao-2");
  CHECK(seen.header.seq == 7);
  CHECK(seen.header.timestamp_us == 123456);
  CHECK(seen.payload.empty());

  REQUIRE(reply.status == ReadResult::Status::Ok);
  CHECK(reply.header.msg_type == wire::MsgType::RESULT);
  CHECK(reply.payload == std::vector<uint8_t>{9});
}

TEST_CASE("readers reassemble arbitrary write boundaries") {
  Listener listener("127.0.0.1", 0);
  ReadResult first, second;
  std::thread server([&] {
    std::optional<Socket> peer = listener.accept();
    REQUIRE(peer.has_value());
    first = read_message(*peer);
    second = read_message(*peer);
  });

  Socket client = connect_to("127.0.0.1", listener.port());
  std::vector<uint8_t> msg = wire::encode_message(
      wire::MsgType::ACTION, "nao-2", 3, 0, {1, 2, 3, 4, 5, 6, 7, 8});
  // Byte-at-a-time: TCP owes the reader no write boundaries at all.
  for (uint8_t byte : msg) client.send_all(&byte, 1);

  // And the other extreme: two messages coalesced into one send.
  std::vector<uint8_t> pair =
      wire::encode_message(wire::MsgType::BYE, "nao-2", 4, 0, {});
  client.send_all(pair.data(), pair.size());
  server.join();

  REQUIRE(first.status == ReadResult::Status::Ok);
  CHECK(first.header.msg_type == wire::MsgType::ACTION);
  CHECK(first.payload.size() == 8);
  REQUIRE(second.status == ReadResult::Status::Ok);
  CHECK(second.header.msg_type == wire::MsgType::BYE);
  CHECK(second.header.seq == 4);
}

TEST_CASE("an oversized payload length is refused before allocation") {
  Listener listener("127.0.0.1", 0);
  ReadResult seen;
  std::thread server([&] {
    std::optional<Socket> peer = listener.accept();
    REQUIRE(peer.has_value());
    seen = read_message(*peer, /*max_payload_len=*/64);
  });

  Socket client = connect_to("127.0.0.1", listener.port());
  std::vector<uint8_t> msg = wire::encode_message(
      wire::MsgType::FRAME, "nao-2", 1, 0, std::vector<uint8_t>(100, 0));
  client.send_all(msg.data(), msg.size());
  server.join();

  CHECK(seen.status == ReadResult::Status::ProtocolError);
  CHECK(seen.error.find("exceeds limit") != std::string::npos);
}

TEST_CASE("garbage on the wire is a protocol error, not a crash") {
  Listener listener("127.0.0.1", 0);
  ReadResult seen;
  std::thread server([&] {
    std::optional<Socket> peer = listener.accept();
    REQUIRE(peer.has_value());
    seen = read_message(*peer);
  });

  Socket client = connect_to("127.0.0.1", listener.port());
  std::vector<uint8_t> junk(wire::kHeaderSize, 0xAB);
  client.send_all(junk.data(), junk.size());
  server.join();

  CHECK(seen.status == ReadResult::Status::ProtocolError);
  CHECK(!seen.error.empty());
}

TEST_CASE("peer departure reads as Closed") {
  Listener listener("127.0.0.1", 0);
  ReadResult between, inside;
  std::thread server([&] {
    std::optional<Socket> a = listener.accept();
    REQUIRE(a.has_value());
    between = read_message(*a);
    std::optional<Socket> b = listener.accept();
    REQUIRE(b.has_value());
    inside = read_message(*b);
  });

  {
    Socket clean = connect_to("127.0.0.1", listener.port());
  }  // closes with no bytes sent

  {
    Socket abrupt = connect_to("127.0.0.1", listener.port());
    std::vector<uint8_t> partial(10, 0x4E);
    abrupt.send_all(partial.data(), partial.size());
  }  // closes mid-header
  server.join();

  CHECK(between.status == ReadResult::Status::Closed);
  CHECK(inside.status == ReadResult::Status::Closed);
}

TEST_CASE("closing the listener unblocks accept") {
  Listener listener("127.0.0.1", 0);
  std::optional<Socket> got;
  std::thread waiter([&] { got = listener.accept(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  listener.close();
  waiter.join();
  CHECK(!got.has_value());
}

TEST_CASE("shutdown releases a blocked reader") {
  Listener listener("127.0.0.1", 0);
  std::optional<Socket> server_side;
  std::thread acceptor([&] { server_side = listener.accept(); });
  Socket client = connect_to("127.0.0.1", listener.port());
  acceptor.join();
  REQUIRE(server_side.has_value());

  ReadResult seen;
  std::thread reader([&] { seen = read_message(*server_side); });
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  server_side->shutdown_both();
  reader.join();
  CHECK(seen.status == ReadResult::Status::Closed);
}

TEST_CASE("sending into a vanished peer raises NetError") {
  Listener listener("127.0.0.1", 0);
  std::optional<Socket> server_side;
  std::thread acceptor([&] { server_side = listener.accept(); });
  Socket client = connect_to("127.0.0.1", listener.port());
  acceptor.join();
  REQUIRE(server_side.has_value());
  server_side->close();

  // The first send after the close may still land in flight; the reset
  // surfaces on a later one. Bound the attempts so a regression hangs
  // the assertion, not the suite.
  std::vector<uint8_t> msg =
      wire::encode_message(wire::MsgType::HELLO, "nao-2", 1, 0, {});
  bool threw = false;
  for (int i = 0; i < 200 && !threw; ++i) {
    try {
      client.send_all(msg.data(), msg.size());
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    } catch (const NetError&) {
      threw = true;
    }
  }
  CHECK(threw);
}

TEST_CASE("binding an occupied port is a BindError") {
  Listener first("127.0.0.1", 0);
  CHECK_THROWS_AS(Listener("127.0.0.1", first.port()), BindError);

  uint16_t dead_port = 0;
  {
    Listener scratch("127.0.0.1", 0);
    dead_port = scratch.port();
  }
  CHECK_THROWS_AS(connect_to("127.0.0.1", dead_port), NetError);
}

}  // TEST_SUITE("net")
