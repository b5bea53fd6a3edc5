#pragma once

// Embedded SSE backends wrapped by the verifiable transforms:
//  - a static encrypted inverted index (PRF-addressed, PRF-masked postings)
//  - a forward-private hash chain: each add stores its entry under a fresh
//    random chain state, linking back to the previous state, so an update is
//    unlinkable to any earlier search token for the same keyword.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vsse/bytes.hpp"
#include "vsse/crypto.hpp"
#include "vsse/random.hpp"
#include "vsse/types.hpp"

namespace vsse::sse {

using crypto::SymKey;

// Cloud-side dictionary: 32-byte location -> opaque value.
class EncryptedIndex {
 public:
  // Throws CollisionError if the location already exists.
  void insert(const Block32& location, Bytes value);
  const Bytes* find(const Block32& location) const;
  std::size_t size() const { return table_.size(); }
  bool empty() const { return table_.empty(); }

  // Entries sorted by location; this is also the persisted order.
  std::vector<std::pair<Block32, Bytes>> sorted_entries() const;

  bool operator==(const EncryptedIndex& o) const { return table_ == o.table_; }

 private:
  std::unordered_map<Block32, Bytes, Block32Hash> table_;
};

// ---------------------------------------------------------------------------
// Static scheme

struct StaticToken {
  Block32 location_key{};
  Block32 mask_key{};
  std::uint64_t count = 0;

  bool operator==(const StaticToken&) const = default;
};

using BlockLists = std::map<Keyword, std::vector<Block32>>;

// Postings are 32-byte blocks; entry i of w sits at F(k1_w, i) holding
// block XOR F(k2_w, i). Insertions are shuffled with `rng`.
EncryptedIndex static_build_blocks(const SymKey& key, const BlockLists& lists,
                                   RandomSource& rng);
std::vector<Block32> static_search_blocks(const EncryptedIndex& index,
                                          const StaticToken& token);

Block32 pad_doc_id(const DocId& id);
// Inverse of pad_doc_id; throws DecodeError on non-zero padding.
DocId unpad_doc_id(const Block32& block);

EncryptedIndex static_build(const SymKey& key, const PlainDb& db,
                            RandomSource& rng);
// `count` is the owner-held posting count for w (0 for unknown keywords).
StaticToken static_search_token(const SymKey& key, const Keyword& w,
                                std::uint64_t count);
std::vector<DocId> static_search(const EncryptedIndex& index,
                                 const StaticToken& token);

// ---------------------------------------------------------------------------
// Forward-private hash chain

// Owner state per keyword: counter c_w and the current chain head.
struct KeywordState {
  std::uint64_t counter = 0;
  Block32 head{};  // all-zero iff counter == 0

  bool operator==(const KeywordState&) const = default;
};

struct ChainEntry {
  static constexpr std::size_t kSize = DocId::kSize + 32;

  ByteArray<DocId::kSize> masked_id{};
  Block32 prev_link{};

  Bytes encode() const;
  static ChainEntry decode(ByteView value);
  bool operator==(const ChainEntry&) const = default;
};

struct ChainToken {
  Block32 location{};
  ChainEntry entry;

  bool operator==(const ChainToken&) const = default;
};

struct ChainSearchToken {
  Block32 head{};
  std::uint64_t count = 0;

  bool operator==(const ChainSearchToken&) const = default;
};

// A search hit together with its 1-based per-keyword insertion index.
struct IndexedId {
  DocId id;
  std::uint64_t index = 0;

  bool operator==(const IndexedId&) const = default;
};

// Chain-state derived masks.
Block32 chain_location(const Block32& state);
ByteArray<DocId::kSize> chain_id_mask(const Block32& state);
Block32 chain_link_mask(const Block32& state);

std::pair<ChainToken, KeywordState> chain_update_token(
    const KeywordState& state, const SymKey& key, const Keyword& w,
    const DocId& id, RandomSource& rng);
// Throws CollisionError if the location is already present.
void chain_apply(EncryptedIndex& index, const ChainToken& token);
ChainSearchToken chain_search_token(const KeywordState& state);
// Walks count links back from the head; result sorted by index ascending.
std::vector<IndexedId> chain_search(const EncryptedIndex& index,
                                    const ChainSearchToken& token);

// ---------------------------------------------------------------------------
// Uniform backend interface. Tokens travel as opaque bytes so the transforms
// and the simulator can treat either scheme as a black box.

class Backend {
 public:
  virtual ~Backend() = default;

  // Owner side: consumes db, returns the index to outsource.
  virtual EncryptedIndex build(const PlainDb& db, RandomSource& rng) = 0;
  virtual Bytes search_token(const Keyword& w) const = 0;
  // Cloud side.
  virtual std::vector<IndexedId> search(const EncryptedIndex& index,
                                        ByteView token) const = 0;
  // Owner side; static backends throw InputError.
  virtual Bytes update_token(const Keyword& w, const DocId& id,
                             RandomSource& rng) = 0;
  // Cloud side.
  virtual void apply(EncryptedIndex& index, ByteView token) const = 0;
};

std::unique_ptr<Backend> make_static_backend(const SymKey& key);
std::unique_ptr<Backend> make_chain_backend(const SymKey& key);

}  // namespace vsse::sse
