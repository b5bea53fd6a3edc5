#pragma once

#include <cstdint>
#include <span>

#include "vsse/bytes.hpp"

namespace vsse {

// Source of cryptographic randomness. Protocol code only ever draws bytes
// through this interface so tests and simulations can be replayed by seed.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  template <std::size_t N>
  ByteArray<N> bytes() {
    ByteArray<N> out{};
    fill(out);
    return out;
  }

  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
};

// Operating-system CSPRNG (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Deterministic generator: HMAC-SHA256 in counter mode under a 32-byte seed.
// Suitable for reproducible simulations; as strong as the PRF if the seed is
// secret.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  explicit SeededRandom(const Block32& seed) : seed_(seed) {}

  void fill(std::span<std::uint8_t> out) override;

 private:
  Block32 seed_;
  std::uint64_t counter_ = 0;
  Block32 block_{};
  std::size_t used_ = block_.size();
};

}  // namespace vsse
