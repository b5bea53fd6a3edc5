#pragma once

// Publicly verifiable, forward-private dynamic SSE.
//
// Alongside the hash-chain index the cloud holds a signature table T_sig
// mapping pos = F(tag_w, id || i) to sigma = g1^(sk * r_i * id), where
// tag_w = F(K_t, w), r_i is block i of the PRG seeded by s_w = F(K_s, w),
// and i is the pair's 1-based per-keyword insertion index. A search proof is
// the cloud's product of the hit signatures (pf_c) plus the owner's
// aggregate m = sum r_i * id_i (pf_o); anyone holding pk accepts iff
// e(pf_c, g2) == e(g1^m, pk).
//
// Deletions are handled by a twin of every structure: deleting (w, id) adds
// the pair to the twin, and a search returns add-set minus del-set after
// both halves verify.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vsse/base_sse.hpp"
#include "vsse/crypto.hpp"

namespace vsse::vforward {

using crypto::G1Element;
using crypto::G2Element;
using crypto::Scalar;
using crypto::SymKey;
using sse::IndexedId;
using sse::KeywordState;

struct ForwardVKeys {
  SymKey base_key;
  crypto::BlsKeyPair bls;
  SymKey seed_master;
  SymKey tag_master;
};

ForwardVKeys vf_keygen(RandomSource& rng);

// Which of the twin structures an operation targets.
enum class Structure : std::uint8_t { kAdd = 0, kDel = 1 };

std::string to_string(Structure s);

Block32 keyword_tag(const ForwardVKeys& keys, const Keyword& w, Structure s);
SymKey keyword_seed(const ForwardVKeys& keys, const Keyword& w, Structure s);
Block32 position(const Block32& tag, const DocId& id, std::uint64_t index);
Scalar pair_message(const SymKey& seed, const DocId& id, std::uint64_t index);

class SignatureTable {
 public:
  // Throws CollisionError on a duplicate position.
  void insert(const Block32& pos, const G1Element& sigma);
  // Counted as one T_sig lookup.
  const G1Element* find(const Block32& pos) const;
  bool contains(const Block32& pos) const { return map_.count(pos) != 0; }
  std::size_t size() const { return map_.size(); }
  std::vector<std::pair<Block32, G1Element>> sorted_entries() const;

  bool operator==(const SignatureTable& o) const { return map_ == o.map_; }

 private:
  std::map<Block32, G1Element> map_;
};

struct ForwardOwnerState {
  std::map<Keyword, KeywordState> add;
  std::map<Keyword, KeywordState> del;

  std::map<Keyword, KeywordState>& states(Structure s) {
    return s == Structure::kAdd ? add : del;
  }
  const std::map<Keyword, KeywordState>& states(Structure s) const {
    return s == Structure::kAdd ? add : del;
  }
  KeywordState state(const Keyword& w, Structure s) const;
  bool operator==(const ForwardOwnerState&) const = default;
};

struct ForwardCloudState {
  sse::EncryptedIndex index;
  SignatureTable tsig;
  sse::EncryptedIndex del_index;
  SignatureTable del_tsig;

  sse::EncryptedIndex& index_of(Structure s) {
    return s == Structure::kAdd ? index : del_index;
  }
  const sse::EncryptedIndex& index_of(Structure s) const {
    return s == Structure::kAdd ? index : del_index;
  }
  SignatureTable& tsig_of(Structure s) {
    return s == Structure::kAdd ? tsig : del_tsig;
  }
  const SignatureTable& tsig_of(Structure s) const {
    return s == Structure::kAdd ? tsig : del_tsig;
  }
  bool operator==(const ForwardCloudState&) const = default;
};

struct ForwardBuild {
  ForwardOwnerState owner;
  ForwardCloudState cloud;
};

ForwardBuild vf_build(const ForwardVKeys& keys, const PlainDb& db,
                      RandomSource& rng);

struct ForwardSearchToken {
  sse::ChainSearchToken chain;
  Block32 tag{};

  bool operator==(const ForwardSearchToken&) const = default;
};

// The seed s_w is regenerated by the owner when needed and never sent.
ForwardSearchToken vf_search_token(const ForwardVKeys& keys, const Keyword& w,
                                   const ForwardOwnerState& owner, Structure s);

struct CloudAnswer {
  std::vector<IndexedId> result;
  G1Element pf_c;  // identity for an empty result
  // What the cloud touched while answering, aligned with `result`.
  std::vector<Block32> positions;
  std::vector<G1Element> signatures;
};

// Throws IncompleteIndexError or ProofUnavailableError when the cloud's
// structures cannot produce an answer.
CloudAnswer vf_cloud_search(const sse::EncryptedIndex& index,
                            const SignatureTable& tsig,
                            const ForwardSearchToken& token);

struct SearchProof {
  static constexpr std::size_t kSize = G1Element::kSize + Scalar::kSize;

  G1Element pf_c;
  Scalar pf_o;

  ByteArray<kSize> encode() const;
  // Throws DecodeError.
  static SearchProof decode(ByteView data);
};

enum class Reason : std::uint8_t {
  kAccept = 0,
  kCountMismatch = 1,
  kMalformedResult = 2,
  kPairingFail = 3,
  kProofUnavailable = 4,
  kIncompleteIndex = 5,
};

std::string to_string(Reason r);
Reason reason_from_string(const std::string& s);

// Owner's half of the proof. A non-accept status means the result was
// rejected before aggregation (wrong count or malformed indices) and pf_o is
// not meaningful.
struct OwnerProof {
  Reason status = Reason::kAccept;
  Scalar pf_o;

  bool ok() const { return status == Reason::kAccept; }
};

OwnerProof vf_owner_proof(const ForwardVKeys& keys, const Keyword& w,
                          Structure s, const std::vector<IndexedId>& received,
                          std::uint64_t expected_count);

// Public verification: two pairings, independent of the result size.
bool vf_audit(const G2Element& pk, const Scalar& pf_o, const G1Element& pf_c);
bool vf_audit_encoded(ByteView pk, ByteView proof);

struct FwdUpdateToken {
  Structure op = Structure::kAdd;
  Block32 doc_name{};
  std::vector<sse::ChainToken> chain;
  std::vector<std::pair<Block32, G1Element>> sig_inserts;

  Bytes encode() const;
  static FwdUpdateToken decode(ByteView data);
};

// Adds (op = kAdd) or records the deletion of (op = kDel) every pair
// (w, id) for w in kws. Advances owner counters. The caller guarantees a
// deleted pair was previously added.
FwdUpdateToken vf_update_token(const ForwardVKeys& keys, const DocId& id,
                               const std::vector<Keyword>& kws, Structure op,
                               ForwardOwnerState& owner, RandomSource& rng);

// All-or-nothing: on collision nothing is applied and CollisionError is
// thrown.
void vf_apply_update(ForwardCloudState& cloud, const FwdUpdateToken& token);

// One structure, honest cloud, full pipeline.
struct SearchOutcome {
  Reason reason = Reason::kAccept;
  std::vector<IndexedId> result;
  std::optional<SearchProof> proof;

  bool accepted() const { return reason == Reason::kAccept; }
};

// Owner/auditor decision over a (possibly tampered) cloud answer.
SearchOutcome vf_verify_answer(const ForwardVKeys& keys, const Keyword& w,
                               Structure s, const ForwardOwnerState& owner,
                               const CloudAnswer& answer);

SearchOutcome vf_search(const ForwardVKeys& keys, const ForwardOwnerState& owner,
                        const ForwardCloudState& cloud, const Keyword& w,
                        Structure s);

struct DeletionAwareOutcome {
  SearchOutcome add;
  SearchOutcome del;
  std::vector<DocId> ids;  // add-set minus del-set, in insertion order

  bool accepted() const { return add.accepted() && del.accepted(); }
  // First failing half's reason, or accept.
  Reason reason() const { return add.accepted() ? del.reason : add.reason; }
};

std::vector<DocId> set_difference_ordered(const std::vector<IndexedId>& add,
                                          const std::vector<IndexedId>& del);

DeletionAwareOutcome vf_search_with_deletions(const ForwardVKeys& keys,
                                              const ForwardOwnerState& owner,
                                              const ForwardCloudState& cloud,
                                              const Keyword& w);

}  // namespace vsse::vforward
