#include "vsse/base_sse.hpp"

#include <algorithm>

#include "vsse/errors.hpp"

namespace vsse::sse {

using crypto::kTagChain;
using crypto::kTagLocation;
using crypto::kTagMask;
using crypto::prf;
using crypto::sha256;

void EncryptedIndex::insert(const Block32& location, Bytes value) {
  auto [it, inserted] = table_.emplace(location, std::move(value));
  if (!inserted) {
    throw CollisionError("index location collision at " + to_hex(location));
  }
}

const Bytes* EncryptedIndex::find(const Block32& location) const {
  auto it = table_.find(location);
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Block32, Bytes>> EncryptedIndex::sorted_entries() const {
  std::vector<std::pair<Block32, Bytes>> out(table_.begin(), table_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---------------------------------------------------------------------------
// Static scheme

namespace {

Block32 xor_block(const Block32& a, const Block32& b) {
  Block32 out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

SymKey as_key(const Block32& b) { return SymKey{b}; }

}  // namespace

EncryptedIndex static_build_blocks(const SymKey& key, const BlockLists& lists,
                                   RandomSource& rng) {
  std::vector<std::pair<Block32, Bytes>> entries;
  for (const auto& [w, blocks] : lists) {
    StaticToken t = static_search_token(key, w, blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const ByteArray<8> idx = be64(i + 1);
      Block32 loc = prf(as_key(t.location_key), idx);
      Block32 val = xor_block(blocks[i], prf(as_key(t.mask_key), idx));
      entries.emplace_back(loc, Bytes(val.begin(), val.end()));
    }
  }
  // Fisher-Yates so table insertion order carries no keyword grouping.
  for (std::size_t i = entries.size(); i > 1; --i) {
    std::swap(entries[i - 1], entries[rng.uniform(i)]);
  }
  EncryptedIndex index;
  for (auto& [loc, val] : entries) index.insert(loc, std::move(val));
  return index;
}

std::vector<Block32> static_search_blocks(const EncryptedIndex& index,
                                          const StaticToken& token) {
  std::vector<Block32> out;
  out.reserve(token.count);
  for (std::uint64_t i = 1; i <= token.count; ++i) {
    const ByteArray<8> idx = be64(i);
    const Bytes* val = index.find(prf(as_key(token.location_key), idx));
    if (val == nullptr || val->size() != 32) {
      throw IncompleteIndexError("static index is missing posting " +
                                 std::to_string(i));
    }
    Block32 cipher;
    std::copy(val->begin(), val->end(), cipher.begin());
    out.push_back(xor_block(cipher, prf(as_key(token.mask_key), idx)));
  }
  return out;
}

Block32 pad_doc_id(const DocId& id) {
  Block32 out{};
  std::copy(id.bytes.begin(), id.bytes.end(), out.begin());
  return out;
}

DocId unpad_doc_id(const Block32& block) {
  if (!std::all_of(block.begin() + DocId::kSize, block.end(),
                   [](std::uint8_t b) { return b == 0; })) {
    throw DecodeError("posting block is not a padded document id");
  }
  DocId id;
  std::copy_n(block.begin(), DocId::kSize, id.bytes.begin());
  return id;
}

EncryptedIndex static_build(const SymKey& key, const PlainDb& db,
                            RandomSource& rng) {
  BlockLists lists;
  for (const auto& [w, ids] : db) {
    if (ids.empty()) continue;
    auto& blocks = lists[w];
    for (const DocId& id : ids) blocks.push_back(pad_doc_id(id));
  }
  return static_build_blocks(key, lists, rng);
}

StaticToken static_search_token(const SymKey& key, const Keyword& w,
                                std::uint64_t count) {
  return {prf(key, concat(as_bytes(kTagLocation), w.view())),
          prf(key, concat(as_bytes(kTagMask), w.view())), count};
}

std::vector<DocId> static_search(const EncryptedIndex& index,
                                 const StaticToken& token) {
  std::vector<DocId> out;
  for (const Block32& b : static_search_blocks(index, token)) {
    out.push_back(unpad_doc_id(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hash chain

Bytes ChainEntry::encode() const { return concat(masked_id, prev_link); }

ChainEntry ChainEntry::decode(ByteView value) {
  if (value.size() != kSize) {
    throw DecodeError("chain entry must be " + std::to_string(kSize) +
                      " bytes");
  }
  ByteReader r(value);
  ChainEntry e;
  e.masked_id = r.array<DocId::kSize>();
  e.prev_link = r.array<32>();
  return e;
}

Block32 chain_location(const Block32& state) {
  return sha256(concat(as_bytes(kTagLocation), state));
}

ByteArray<DocId::kSize> chain_id_mask(const Block32& state) {
  Block32 full = sha256(concat(as_bytes(kTagMask), state));
  ByteArray<DocId::kSize> out;
  std::copy_n(full.begin(), out.size(), out.begin());
  return out;
}

Block32 chain_link_mask(const Block32& state) {
  return sha256(concat(as_bytes(kTagChain), state));
}

std::pair<ChainToken, KeywordState> chain_update_token(
    const KeywordState& state, const SymKey& key, const Keyword& w,
    const DocId& id, RandomSource& rng) {
  // Fresh state, whitened under the backend key.
  const Block32 nonce = rng.bytes<32>();
  const Block32 next = prf(key, concat(w.view(), nonce));

  ChainToken token;
  token.location = chain_location(next);
  const auto id_mask = chain_id_mask(next);
  for (std::size_t i = 0; i < DocId::kSize; ++i) {
    token.entry.masked_id[i] = id.bytes[i] ^ id_mask[i];
  }
  token.entry.prev_link = xor_block(state.head, chain_link_mask(next));
  return {token, KeywordState{state.counter + 1, next}};
}

void chain_apply(EncryptedIndex& index, const ChainToken& token) {
  index.insert(token.location, token.entry.encode());
}

ChainSearchToken chain_search_token(const KeywordState& state) {
  return {state.head, state.counter};
}

std::vector<IndexedId> chain_search(const EncryptedIndex& index,
                                    const ChainSearchToken& token) {
  std::vector<IndexedId> out(token.count);
  Block32 state = token.head;
  for (std::uint64_t depth = 0; depth < token.count; ++depth) {
    const Bytes* val = index.find(chain_location(state));
    if (val == nullptr) {
      throw IncompleteIndexError("chain broken at depth " +
                                 std::to_string(depth));
    }
    ChainEntry e = ChainEntry::decode(*val);
    const auto id_mask = chain_id_mask(state);
    IndexedId& hit = out[token.count - 1 - depth];
    for (std::size_t i = 0; i < DocId::kSize; ++i) {
      hit.id.bytes[i] = e.masked_id[i] ^ id_mask[i];
    }
    hit.index = token.count - depth;
    state = xor_block(e.prev_link, chain_link_mask(state));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Backends

namespace {

Bytes encode_static_token(const StaticToken& t) {
  ByteWriter w;
  w.raw(t.location_key);
  w.raw(t.mask_key);
  w.u64(t.count);
  return std::move(w).take();
}

StaticToken decode_static_token(ByteView data) {
  ByteReader r(data);
  StaticToken t;
  t.location_key = r.array<32>();
  t.mask_key = r.array<32>();
  t.count = r.u64();
  r.expect_done();
  return t;
}

Bytes encode_chain_search_token(const ChainSearchToken& t) {
  ByteWriter w;
  w.raw(t.head);
  w.u64(t.count);
  return std::move(w).take();
}

ChainSearchToken decode_chain_search_token(ByteView data) {
  ByteReader r(data);
  ChainSearchToken t;
  t.head = r.array<32>();
  t.count = r.u64();
  r.expect_done();
  return t;
}

class StaticBackend final : public Backend {
 public:
  explicit StaticBackend(const SymKey& key) : key_(key) {}

  EncryptedIndex build(const PlainDb& db, RandomSource& rng) override {
    counts_.clear();
    for (const auto& [w, ids] : db) {
      if (!ids.empty()) counts_[w] = ids.size();
    }
    return static_build(key_, db, rng);
  }

  Bytes search_token(const Keyword& w) const override {
    auto it = counts_.find(w);
    return encode_static_token(
        static_search_token(key_, w, it == counts_.end() ? 0 : it->second));
  }

  std::vector<IndexedId> search(const EncryptedIndex& index,
                                ByteView token) const override {
    std::vector<IndexedId> out;
    std::uint64_t i = 0;
    for (const DocId& id : static_search(index, decode_static_token(token))) {
      out.push_back({id, ++i});
    }
    return out;
  }

  Bytes update_token(const Keyword&, const DocId&, RandomSource&) override {
    throw InputError("static backend does not support updates");
  }

  void apply(EncryptedIndex&, ByteView) const override {
    throw InputError("static backend does not support updates");
  }

 private:
  SymKey key_;
  std::map<Keyword, std::uint64_t> counts_;
};

class ChainBackend final : public Backend {
 public:
  explicit ChainBackend(const SymKey& key) : key_(key) {}

  EncryptedIndex build(const PlainDb& db, RandomSource& rng) override {
    states_.clear();
    EncryptedIndex index;
    for (const auto& [w, ids] : db) {
      for (const DocId& id : ids) apply(index, update_token(w, id, rng));
    }
    return index;
  }

  Bytes search_token(const Keyword& w) const override {
    auto it = states_.find(w);
    return encode_chain_search_token(chain_search_token(
        it == states_.end() ? KeywordState{} : it->second));
  }

  std::vector<IndexedId> search(const EncryptedIndex& index,
                                ByteView token) const override {
    return chain_search(index, decode_chain_search_token(token));
  }

  Bytes update_token(const Keyword& w, const DocId& id,
                     RandomSource& rng) override {
    auto [token, next] = chain_update_token(states_[w], key_, w, id, rng);
    states_[w] = next;
    ByteWriter out;
    out.raw(token.location);
    out.raw(token.entry.encode());
    return std::move(out).take();
  }

  void apply(EncryptedIndex& index, ByteView token) const override {
    ByteReader r(token);
    ChainToken t;
    t.location = r.array<32>();
    t.entry = ChainEntry::decode(r.raw(ChainEntry::kSize));
    r.expect_done();
    chain_apply(index, t);
  }

 private:
  SymKey key_;
  std::map<Keyword, KeywordState> states_;
};

}  // namespace

std::unique_ptr<Backend> make_static_backend(const SymKey& key) {
  return std::make_unique<StaticBackend>(key);
}

std::unique_ptr<Backend> make_chain_backend(const SymKey& key) {
  return std::make_unique<ChainBackend>(key);
}

}  // namespace vsse::sse
