#pragma once

#include <compare>
#include <cstring>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vsse/bytes.hpp"

namespace vsse {

// Fixed-width opaque document identifier. As a big-endian integer it is
// below 2^128, hence below the group order, so its scalar embedding is
// injective.
struct DocId {
  static constexpr std::size_t kSize = 16;
  ByteArray<kSize> bytes{};

  static DocId from_hex(std::string_view hex);
  static DocId from_u64(std::uint64_t v);
  std::string hex() const { return to_hex(bytes); }

  auto operator<=>(const DocId&) const = default;
};

// Non-empty UTF-8 keyword of at most 256 bytes.
class Keyword {
 public:
  static constexpr std::size_t kMaxSize = 256;

  explicit Keyword(std::string text);

  const std::string& text() const { return text_; }
  ByteView view() const { return as_bytes(text_); }

  auto operator<=>(const Keyword&) const = default;

 private:
  std::string text_;
};

// Plaintext inverted index: keyword -> ordered postings. Keywords are kept in
// sorted order only for deterministic iteration; nothing depends on it.
class PlainDb {
 public:
  using Postings = std::vector<DocId>;

  // Throws InputError on a duplicate (w, id) pair.
  void add(const Keyword& w, const DocId& id);
  void add_all(const Keyword& w, const Postings& ids);

  const Postings& postings(const Keyword& w) const;
  std::size_t count(const Keyword& w) const { return postings(w).size(); }
  std::size_t pair_count() const;
  std::size_t keyword_count() const { return map_.size(); }
  bool contains(const Keyword& w, const DocId& id) const;

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

 private:
  std::map<Keyword, Postings> map_;
};

struct Block32Hash {
  std::size_t operator()(const Block32& b) const noexcept {
    std::size_t h;
    static_assert(sizeof(h) <= sizeof(Block32));
    std::memcpy(&h, b.data(), sizeof(h));
    return h;
  }
};

}  // namespace vsse

template <>
struct std::hash<vsse::DocId> {
  std::size_t operator()(const vsse::DocId& id) const noexcept {
    std::size_t h;
    std::memcpy(&h, id.bytes.data(), sizeof(h));
    return h;
  }
};
