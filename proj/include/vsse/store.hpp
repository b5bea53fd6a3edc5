#pragma once

// On-disk store with one subtree per role:
//
//   owner/keys.bin      all secret keys (symmetric keys and sk)
//   owner/state.bin     chain counters and heads, static counts, pair registry
//   cloud/static.bin    static encrypted index
//   cloud/index.bin     forward index        cloud/tsig.bin      T_sig
//   cloud/del_index.bin deletion twin        cloud/del_tsig.bin  twin T_sig
//   cloud/history.bin   answers the cloud has given (forward, static)
//   auditor/pk.bin      the public key
//   lock                held with flock() for the duration of a command
//
// Every file starts with a 4-byte magic and a 1-byte version.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vsse/errors.hpp"
#include "vsse/forward_vsse.hpp"
#include "vsse/sim.hpp"
#include "vsse/static_vsse.hpp"

namespace vsse::store {

namespace fs = std::filesystem;
using vforward::Structure;

// A store file is missing, truncated, has the wrong magic or version, or
// fails to decode.
class StoreError : public Error {
 public:
  using Error::Error;
};

// The command cannot run as asked (no store, non-empty target, lock held).
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint8_t kFormatVersion = 1;

struct OwnerKeys {
  vstatic::StaticVKeys statik;
  vforward::ForwardVKeys forward;
};

// Every (w, id) the owner has added, and which of them were deleted. Needed
// to refuse deleting a pair that was never added and to rebuild the static
// index after updates.
struct PairRegistry {
  std::map<Keyword, std::vector<DocId>> added;
  std::map<Keyword, std::set<DocId>> deleted;

  bool is_added(const Keyword& w, const DocId& id) const;
  bool is_live(const Keyword& w, const DocId& id) const;
  PlainDb live() const;
  std::vector<DocId> live_postings(const Keyword& w) const;
  std::size_t added_pairs() const;
  std::size_t deleted_pairs() const;
  bool operator==(const PairRegistry&) const = default;
};

struct OwnerState {
  vforward::ForwardOwnerState forward;
  vstatic::StaticCounts static_counts;
  PairRegistry registry;
  bool operator==(const OwnerState&) const = default;
};

struct StaticHistory {
  std::map<Block32, std::vector<Block32>> answers;  // by location key
};

struct CloudFiles {
  sse::EncryptedIndex static_index;
  vforward::ForwardCloudState forward;
  std::map<Block32, sim::CachedAnswer> history;
  StaticHistory static_history;
};

// File codecs. Decoders throw StoreError.
Bytes encode_keys(const OwnerKeys& k);
OwnerKeys decode_keys(ByteView data);
Bytes encode_owner_state(const OwnerState& s);
OwnerState decode_owner_state(ByteView data);
Bytes encode_index_file(const sse::EncryptedIndex& index);
sse::EncryptedIndex decode_index_file(ByteView data);
Bytes encode_tsig_file(const vforward::SignatureTable& t);
vforward::SignatureTable decode_tsig_file(ByteView data);
Bytes encode_pk_file(const crypto::G2Element& pk);
crypto::G2Element decode_pk_file(ByteView data);
Bytes encode_history_file(const std::map<Block32, sim::CachedAnswer>& h,
                          const StaticHistory& s);
void decode_history_file(ByteView data, std::map<Block32, sim::CachedAnswer>& h,
                         StaticHistory& s);

class Store {
 public:
  // keygen: refuses an existing non-empty directory unless force is set.
  static Store create(const fs::path& dir, bool force, RandomSource& rng);
  // Throws UsageError if dir is not a store or another command holds it.
  static Store open(const fs::path& dir);

  Store(Store&& o) noexcept;
  Store& operator=(Store&&) = delete;
  ~Store();

  const fs::path& dir() const { return dir_; }

  OwnerKeys load_keys() const;
  OwnerState load_owner() const;
  void save_owner(const OwnerState& s) const;
  CloudFiles load_cloud() const;
  void save_cloud(const CloudFiles& c) const;
  void save_history(const CloudFiles& c) const;
  crypto::G2Element load_pk() const;

 private:
  Store(fs::path dir, int lock_fd) : dir_(std::move(dir)), lock_fd_(lock_fd) {}

  fs::path dir_;
  int lock_fd_ = -1;
};

// One record per line: keyword, TAB, comma-separated 32-hex-digit ids.
// Blank lines are skipped. Throws InputError naming the line.
PlainDb parse_corpus(std::istream& in);

// Replaces the store's contents with a fresh build of db.
void build(Store& store, const PlainDb& db, RandomSource& rng);

enum class Scheme { kStatic, kForward };

struct SearchReport {
  bool accepted = false;
  std::string reason;  // "accept" or the rejection reason
  std::vector<DocId> ids;
  bool tampered = false;
};

// Owner issues the token, the cloud answers from its files (optionally per
// strategy), the owner and, for forward, the auditor (pk file only) decide.
SearchReport search(Store& store, const Keyword& w, Scheme scheme,
                    const sim::AdversaryStrategy& adversary);

// add: every (w, id) must be new. del: every (w, id) must be live.
// Throws InputError and leaves the store untouched otherwise.
void update(Store& store, Structure op, const DocId& id,
            const std::vector<Keyword>& kws, RandomSource& rng);

// Soundness game against the on-disk state: each strategy's cloud is built
// from the cloud files alone and answers forward searches for random
// keywords; nothing is written back.
sim::SoundnessReport soundness(Store& store, std::uint64_t trials,
                               RandomSource& rng);

}  // namespace vsse::store
