/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fairmpc/transport.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

namespace fairmpc {
namespace {

constexpr std::size_t kFrameHeader = 4 + 1 + 8;

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// One direction of an in-process link.
struct Pipe {
  std::mutex mutex;
  std::condition_variable ready;
  std::deque<std::vector<std::uint8_t>> frames;
  bool closed = false;

  void push(std::vector<std::uint8_t> frame) {
    {
      std::lock_guard<std::mutex> lock(mutex);
      frames.push_back(std::move(frame));
    }
    ready.notify_one();
  }

  std::vector<std::uint8_t> pop() {
    std::unique_lock<std::mutex> lock(mutex);
    ready.wait(lock, [&] { return !frames.empty() || closed; });
    if (frames.empty()) throw Error(ErrorCode::kIo, "peer closed the in-process link");
    auto frame = std::move(frames.front());
    frames.pop_front();
    return frame;
  }

  void close() {
    {
      std::lock_guard<std::mutex> lock(mutex);
      closed = true;
    }
    ready.notify_all();
  }
};

class InProcessTransport final : public Transport {
 public:
  InProcessTransport(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~InProcessTransport() override { out_->close(); }

  std::vector<std::uint8_t> exchange(std::span<const std::uint8_t> out) override {
    out_->push({out.begin(), out.end()});
    return in_->pop();
  }
  void send_only(std::span<const std::uint8_t> out) override {
    out_->push({out.begin(), out.end()});
  }

 private:
  std::shared_ptr<Pipe> in_, out_;
};

[[noreturn]] void io_error(const std::string& what) {
  std::ostringstream msg;
  msg << what << ": " << std::strerror(errno);
  throw Error(ErrorCode::kIo, msg.str());
}

class Socket {
 public:
  explicit Socket(int fd = -1) : fd_(fd) {}
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      if (fd_ >= 0) ::close(fd_);
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(Socket socket) : socket_(std::move(socket)) {
    int one = 1;
    ::setsockopt(socket_.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }

  // Writes and reads concurrently so that two peers sending large frames at
  // the same time cannot deadlock on full socket buffers.
  std::vector<std::uint8_t> exchange(std::span<const std::uint8_t> out) override {
    std::size_t sent = 0;
    std::vector<std::uint8_t> in;
    std::size_t want = 4;
    while (sent < out.size() || in.size() < want) {
      pollfd pfd{socket_.get(), 0, 0};
      if (sent < out.size()) pfd.events |= POLLOUT;
      if (in.size() < want) pfd.events |= POLLIN;
      if (::poll(&pfd, 1, -1) < 0) {
        if (errno == EINTR) continue;
        io_error("poll");
      }
      if (pfd.revents & (POLLERR | POLLNVAL)) {
        throw Error(ErrorCode::kIo, "connection error");
      }
      if ((pfd.revents & POLLOUT) && sent < out.size()) {
        const ssize_t n = ::send(socket_.get(), out.data() + sent, out.size() - sent,
                                 MSG_DONTWAIT | MSG_NOSIGNAL);
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          io_error("send");
        }
        if (n > 0) sent += static_cast<std::size_t>(n);
      }
      if ((pfd.revents & (POLLIN | POLLHUP)) && in.size() < want) {
        std::uint8_t buf[1 << 16];
        const std::size_t room = std::min(sizeof(buf), want - in.size());
        const ssize_t n = ::recv(socket_.get(), buf, room, MSG_DONTWAIT);
        if (n == 0) throw Error(ErrorCode::kIo, "peer closed the connection");
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          io_error("recv");
        }
        if (n > 0) {
          in.insert(in.end(), buf, buf + n);
          if (want == 4 && in.size() >= 4) want = 4 + get_le(in.data(), 4);
        }
      }
    }
    return in;
  }

  void send_only(std::span<const std::uint8_t> out) override {
    std::size_t sent = 0;
    while (sent < out.size()) {
      const ssize_t n = ::send(socket_.get(), out.data() + sent, out.size() - sent,
                               MSG_NOSIGNAL);
      if (n <= 0) {
        if (errno == EINTR) continue;
        io_error("send");
      }
      sent += static_cast<std::size_t>(n);
    }
  }

 private:
  Socket socket_;
};

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                               service.c_str(), &hints, &res);
  if (rc != 0) {
    throw Error(ErrorCode::kIo, "cannot resolve " + host + ": " + gai_strerror(rc));
  }
  return res;
}

}  // namespace

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::kOpen: return "OPEN";
    case Tag::kSync: return "SYNC";
    case Tag::kShareIn: return "SHARE_IN";
    case Tag::kResult: return "RESULT";
    case Tag::kAbort: return "ABORT";
  }
  return "?";
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeader + 8 * frame.payload.size());
  put_le(out, 9 + 8 * frame.payload.size(), 4);
  out.push_back(static_cast<std::uint8_t>(frame.tag));
  put_le(out, frame.step, 8);
  for (Ring v : frame.payload) put_le(out, v, 8);
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeader) throw Error(ErrorCode::kIo, "short frame");
  const std::size_t length = get_le(bytes.data(), 4);
  if (length + 4 != bytes.size() || (length - 9) % 8 != 0) {
    throw Error(ErrorCode::kIo, "frame length prefix does not match its body");
  }
  const std::uint8_t tag = bytes[4];
  if (tag < 1 || tag > 5) {
    throw Error(ErrorCode::kBadTag, "unknown frame tag " + std::to_string(tag));
  }
  Frame f;
  f.tag = static_cast<Tag>(tag);
  f.step = get_le(bytes.data() + 5, 8);
  const std::size_t words = (length - 9) / 8;
  f.payload.resize(words);
  for (std::size_t i = 0; i < words; ++i) {
    f.payload[i] = get_le(bytes.data() + kFrameHeader + 8 * i, 8);
  }
  return f;
}

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>
make_in_process_pair() {
  auto a_to_b = std::make_shared<Pipe>();
  auto b_to_a = std::make_shared<Pipe>();
  return {std::make_unique<InProcessTransport>(b_to_a, a_to_b),
          std::make_unique<InProcessTransport>(a_to_b, b_to_a)};
}

std::unique_ptr<Transport> tcp_listen(const std::string& host, std::uint16_t port) {
  addrinfo* res = resolve(host, port, true);
  Socket listener;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (s.get() < 0) continue;
    int one = 1;
    ::setsockopt(s.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(s.get(), ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(s.get(), 1) == 0) {
      listener = std::move(s);
      break;
    }
  }
  ::freeaddrinfo(res);
  if (listener.get() < 0) io_error("cannot listen on " + host + ":" + std::to_string(port));
  Socket conn(::accept(listener.get(), nullptr, nullptr));
  if (conn.get() < 0) io_error("accept");
  return std::make_unique<TcpTransport>(std::move(conn));
}

std::unique_ptr<Transport> tcp_connect(const std::string& host, std::uint16_t port,
                                       std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    addrinfo* res = resolve(host, port, false);
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
      Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
      if (s.get() < 0) continue;
      if (::connect(s.get(), ai->ai_addr, ai->ai_addrlen) == 0) {
        ::freeaddrinfo(res);
        return std::make_unique<TcpTransport>(std::move(s));
      }
    }
    ::freeaddrinfo(res);
    if (std::chrono::steady_clock::now() >= deadline) {
      throw Error(ErrorCode::kIo,
                  "cannot connect to " + host + ":" + std::to_string(port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint must be host:port");
  }
  const std::string port_text = spec.substr(colon + 1);
  int port = 0;
  try {
    port = std::stoi(port_text);
  } catch (const std::exception&) {
    port = -1;
  }
  if (port <= 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in " + spec);
  }
  return {spec.substr(0, colon), static_cast<std::uint16_t>(port)};
}

std::vector<Ring> Channel::exchange(Tag tag, std::span<const Ring> payload) {
  Frame mine{tag, step_, {payload.begin(), payload.end()}};
  const auto out = encode_frame(mine);
  const auto in = transport_.exchange(out);
  bytes_sent_ += out.size();
  transcript_.update(out);
  transcript_.update(in);
  if (capture_) {
    captured_.insert(captured_.end(), out.begin(), out.end());
    captured_.insert(captured_.end(), in.begin(), in.end());
  }
  Frame peer = decode_frame(in);
  if (peer.tag == Tag::kAbort) {
    const auto code = peer.payload.empty() ? 0 : peer.payload[0];
    throw Error(ErrorCode::kPeerAborted,
                "peer aborted with code " + std::to_string(code));
  }
  if (peer.step != step_) {
    std::ostringstream msg;
    msg << "step " << step_ << " received peer step " << peer.step;
    throw Error(ErrorCode::kPeerDesync, msg.str());
  }
  if (peer.tag != tag) {
    std::ostringstream msg;
    msg << "step " << step_ << " expected " << tag_name(tag) << " got "
        << tag_name(peer.tag);
    throw Error(ErrorCode::kPeerDesync, msg.str());
  }
  ++step_;
  return std::move(peer.payload);
}

void Channel::abort(ErrorCode code) noexcept {
  try {
    Frame f{Tag::kAbort, step_, {static_cast<Ring>(code)}};
    transport_.send_only(encode_frame(f));
  } catch (...) {
  }
}

}  // namespace fairmpc
