#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>
#include <utility>

#include "vsse/sim.hpp"

namespace vsse::sim {

namespace {

// Frames are serialized even in-process so both transports carry the same
// bytes.
class InProcessChannel final : public Channel {
 public:
  void send(const WireMessage& msg) override { queue_.push_back(msg.encode()); }

  WireMessage receive() override {
    if (queue_.empty()) {
      throw ProtocolError("receive on an empty channel");
    }
    Bytes frame = std::move(queue_.front());
    queue_.pop_front();
    return WireMessage::decode(frame);
  }

 private:
  std::deque<Bytes> queue_;
};

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  ~Fd() { reset(); }
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

[[noreturn]] void sys_fail(const char* what) {
  throw ProtocolError(std::string(what) + ": " + std::strerror(errno));
}

bool read_exact(int fd, std::uint8_t* buf, std::size_t n) {
  while (n > 0) {
    ssize_t got = ::recv(fd, buf, n, 0);
    if (got == 0) return false;
    if (got < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    buf += got;
    n -= static_cast<std::size_t>(got);
  }
  return true;
}

void write_exact(int fd, const std::uint8_t* buf, std::size_t n) {
  while (n > 0) {
    ssize_t put = ::send(fd, buf, n, MSG_NOSIGNAL);
    if (put < 0) {
      if (errno == EINTR) continue;
      sys_fail("send");
    }
    buf += put;
    n -= static_cast<std::size_t>(put);
  }
}

// One-directional loopback TCP link. A reader thread drains the socket into
// a queue so a single-threaded session can send large frames without
// deadlocking on the kernel buffer.
class SocketChannel final : public Channel {
 public:
  SocketChannel() {
    Fd listener(::socket(AF_INET, SOCK_STREAM, 0));
    if (listener.get() < 0) sys_fail("socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(listener.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
      sys_fail("bind");
    }
    if (::listen(listener.get(), 1) < 0) sys_fail("listen");
    socklen_t len = sizeof(addr);
    if (::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
      sys_fail("getsockname");
    }
    sender_ = Fd(::socket(AF_INET, SOCK_STREAM, 0));
    if (sender_.get() < 0) sys_fail("socket");
    if (::connect(sender_.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
      sys_fail("connect");
    }
    receiver_ = Fd(::accept(listener.get(), nullptr, nullptr));
    if (receiver_.get() < 0) sys_fail("accept");
    int one = 1;
    ::setsockopt(sender_.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    reader_ = std::thread([this] { read_loop(); });
  }

  ~SocketChannel() override {
    ::shutdown(sender_.get(), SHUT_WR);
    if (reader_.joinable()) reader_.join();
  }

  void send(const WireMessage& msg) override {
    Bytes frame = msg.encode();
    ByteArray<8> len = be64(frame.size());
    write_exact(sender_.get(), len.data(), len.size());
    write_exact(sender_.get(), frame.data(), frame.size());
  }

  WireMessage receive() override {
    std::unique_lock lock(mu_);
    if (!cv_.wait_for(lock, std::chrono::seconds(30),
                      [this] { return !frames_.empty() || closed_; })) {
      throw ProtocolError("timed out waiting for a message");
    }
    if (frames_.empty()) throw ProtocolError("channel closed");
    Bytes frame = std::move(frames_.front());
    frames_.pop_front();
    return WireMessage::decode(frame);
  }

 private:
  void read_loop() {
    for (;;) {
      ByteArray<8> len_buf{};
      if (!read_exact(receiver_.get(), len_buf.data(), len_buf.size())) break;
      ByteReader r(len_buf);
      Bytes frame(r.u64());
      if (!read_exact(receiver_.get(), frame.data(), frame.size())) break;
      std::lock_guard lock(mu_);
      frames_.push_back(std::move(frame));
      cv_.notify_one();
    }
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  Fd sender_;
  Fd receiver_;
  std::thread reader_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Bytes> frames_;
  bool closed_ = false;
};

}  // namespace

std::unique_ptr<Channel> make_channel(Transport t) {
  if (t == Transport::kLocalhostSocket) return std::make_unique<SocketChannel>();
  return std::make_unique<InProcessChannel>();
}

}  // namespace vsse::sim
