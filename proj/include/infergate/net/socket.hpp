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

// Thin RAII shell over blocking POSIX TCP sockets. Threads blocked in
// recv/accept are released by shutting the socket down from another
// thread; there is no timeout machinery.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace infergate::net {

class NetError : public std::runtime_error {
 public:
  explicit NetError(const std::string& what) : std::runtime_error(what) {}
};

// Listen-socket bind/listen failure; callers map this to a distinct
// process exit code.
class BindError : public NetError {
 public:
  explicit BindError(const std::string& what) : NetError(what) {}
};

struct Address {
  std::string host = "127.0.0.1";
  uint16_t port = 0;
};

// "host:port" with a numeric port; bare "port" defaults the host.
Address parse_address(const std::string& text);

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  // Reads up to len bytes. 0 means the peer closed (or the socket was
  // shut down); throws NetError on hard errors.
  size_t recv_some(uint8_t* buf, size_t len);
  // Reads exactly len bytes; false when the stream ends first.
  bool recv_exact(uint8_t* buf, size_t len);
  // Writes all of data, looping over partial sends. Throws NetError when
  // the peer is gone.
  void send_all(const uint8_t* data, size_t len);

  // Releases any thread blocked in recv/send on this socket.
  void shutdown_both() noexcept;
  void close() noexcept;

 private:
  int fd_ = -1;
};

Socket connect_to(const std::string& host, uint16_t port);

class Listener {
 public:
  // Binds and listens; throws BindError when the address is taken or
  // unusable.
  Listener(const std::string& host, uint16_t port);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  // Blocks for the next connection; nullopt once close() was called.
  std::optional<Socket> accept();
  // Resolved port (useful after binding port 0).
  uint16_t port() const { return port_; }
  // Unblocks accept() and closes the listen socket.
  void close() noexcept;

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

}  // namespace infergate::net
