// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "hints/service.hpp"

namespace hints {

// Stream-socket front door speaking the length-delimited text protocol:
// each message is "HINTS/1 <n>\n" followed by n payload bytes. One request,
// one response; connections may pipeline sequentially and close when done.

namespace netdetail {

inline bool read_exact(int fd, char* buf, size_t n) {
  size_t got = 0;
  while (got < n) {
    ssize_t r = ::read(fd, buf + got, n - got);
    if (r <= 0) return false;
    got += static_cast<size_t>(r);
  }
  return true;
}

inline bool write_all(int fd, const char* buf, size_t n) {
  size_t put = 0;
  while (put < n) {
    ssize_t w = ::write(fd, buf + put, n - put);
    if (w <= 0) return false;
    put += static_cast<size_t>(w);
  }
  return true;
}

// Header line "HINTS/1 <n>\n", read byte-by-byte so the payload stays put.
inline bool read_frame(int fd, std::string& payload) {
  std::string header;
  char c;
  while (true) {
    ssize_t r = ::read(fd, &c, 1);
    if (r <= 0) return false;
    if (c == '\n') break;
    header += c;
    if (header.size() > 64) return false;
  }
  if (header.rfind("HINTS/1 ", 0) != 0) return false;
  size_t n = 0;
  try {
    n = std::stoull(header.substr(8));
  } catch (...) {
    return false;
  }
  if (n > (16u << 20)) return false;  // 16 MiB frame cap
  payload.resize(n);
  return n == 0 || read_exact(fd, payload.data(), n);
}

inline bool write_frame(int fd, const std::string& payload) {
  std::string msg = Service::frame(payload);
  return write_all(fd, msg.data(), msg.size());
}

inline std::pair<std::string, uint16_t> split_address(const std::string& addr) {
  size_t colon = addr.rfind(':');
  if (colon == std::string::npos)
    fail(Errc::bad_request, "listen address must be host:port");
  return {addr.substr(0, colon),
          static_cast<uint16_t>(std::stoi(addr.substr(colon + 1)))};
}

}  // namespace netdetail

class SocketServer {
 public:
  explicit SocketServer(Service& service) : service_(service) {}
  ~SocketServer() { stop(); }

  // Bind and start accepting. Port 0 picks an ephemeral port (see port()).
  void start(const std::string& address) {
    auto [host, port] = netdetail::split_address(address);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) fail(Errc::io_error, "socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1)
      fail(Errc::bad_request, "bad listen host " + host);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      fail(Errc::io_error, "bind failed for " + address);
    }
    if (::listen(listen_fd_, 16) != 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      fail(Errc::io_error, "listen failed");
    }
    socklen_t len = sizeof(sa);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&sa), &len);
    port_ = ntohs(sa.sin_port);
    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
  }

  uint16_t port() const { return port_; }

  void stop() {
    if (!running_.exchange(false)) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    if (accept_thread_.joinable()) accept_thread_.join();
    for (auto& t : workers_)
      if (t.joinable()) t.join();
    workers_.clear();
    listen_fd_ = -1;
  }

 private:
  void accept_loop() {
    while (running_) {
      int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) {
        if (!running_) break;
        continue;
      }
      workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
  }

  void serve_connection(int fd) {
    std::string payload;
    while (running_ && netdetail::read_frame(fd, payload)) {
      ApiResponse resp;
      try {
        resp = service_.handle(ApiRequest::decode(payload));
      } catch (const Error& e) {
        resp.status = "bad-request";
        resp.body["error"] = e.what();
      }
      if (!netdetail::write_frame(fd, resp.encode())) break;
    }
    ::close(fd);
  }

  Service& service_;
  std::atomic<bool> running_{false};
  int listen_fd_ = -1;
  uint16_t port_ = 0;
  std::thread accept_thread_;
  std::vector<std::thread> workers_;
};

// Minimal client for tests and the CLI's remote mode: one connection per
// call.
inline ApiResponse call_service(const std::string& host, uint16_t port,
                                const ApiRequest& req) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fail(Errc::io_error, "socket() failed");
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
    ::close(fd);
    fail(Errc::bad_request, "bad host " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    ::close(fd);
    fail(Errc::io_error, "cannot connect to " + host + ":" + std::to_string(port));
  }
  bool ok = netdetail::write_frame(fd, req.encode());
  std::string payload;
  ok = ok && netdetail::read_frame(fd, payload);
  ::close(fd);
  if (!ok) fail(Errc::io_error, "connection dropped");
  return ApiResponse::decode(payload);
}

}  // namespace hints
