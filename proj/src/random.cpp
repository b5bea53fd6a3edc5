#include "vsse/random.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <stdexcept>

#include "vsse/crypto.hpp"

namespace vsse {

std::uint64_t RandomSource::next_u64() {
  ByteArray<8> raw = bytes<8>();
  std::uint64_t v = 0;
  for (std::uint8_t b : raw) v = (v << 8) | b;
  return v;
}

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform: bound must be positive");
  }
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

SeededRandom::SeededRandom(std::uint64_t seed) {
  seed_.fill(0);
  ByteArray<8> enc = be64(seed);
  std::copy(enc.begin(), enc.end(), seed_.begin());
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (used_ == block_.size()) {
      block_ = crypto::hmac_sha256(seed_, be64(counter_++));
      used_ = 0;
    }
    std::size_t n = std::min(out.size() - written, block_.size() - used_);
    std::copy_n(block_.begin() + used_, n, out.begin() + written);
    used_ += n;
    written += n;
  }
}

}  // namespace vsse
