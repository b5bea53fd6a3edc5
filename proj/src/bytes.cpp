#include "vsse/bytes.hpp"

#include <stdexcept>

#include "vsse/errors.hpp"

namespace vsse {

namespace {

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw std::invalid_argument("hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw std::invalid_argument("invalid hex digit");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

ByteArray<8> be64(std::uint64_t v) {
  ByteArray<8> out{};
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

void ByteWriter::u16(std::uint16_t v) {
  buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::u64(std::uint64_t v) { raw(be64(v)); }

void ByteWriter::blob(ByteView data) {
  u32(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

ByteView ByteReader::raw(std::size_t n) {
  if (n > remaining()) {
    throw DecodeError("truncated input: wanted " + std::to_string(n) +
                      " bytes, " + std::to_string(remaining()) + " left");
  }
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
  ByteView v = raw(2);
  return static_cast<std::uint16_t>((v[0] << 8) | v[1]);
}

std::uint32_t ByteReader::u32() {
  ByteView v = raw(4);
  std::uint32_t out = 0;
  for (std::uint8_t b : v) out = (out << 8) | b;
  return out;
}

std::uint64_t ByteReader::u64() {
  ByteView v = raw(8);
  std::uint64_t out = 0;
  for (std::uint8_t b : v) out = (out << 8) | b;
  return out;
}

Bytes ByteReader::blob() {
  std::uint32_t n = u32();
  ByteView v = raw(n);
  return {v.begin(), v.end()};
}

std::string ByteReader::str() {
  std::uint32_t n = u32();
  ByteView v = raw(n);
  return {v.begin(), v.end()};
}

void ByteReader::expect_done() const {
  if (!done()) {
    throw DecodeError("trailing bytes: " + std::to_string(remaining()));
  }
}

}  // namespace vsse
