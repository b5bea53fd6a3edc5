#include "vsse/forward_vsse.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "vsse/counters.hpp"
#include "vsse/errors.hpp"

namespace vsse::vforward {

using crypto::kTagDeletion;
using crypto::prf;

ForwardVKeys vf_keygen(RandomSource& rng) {
  ForwardVKeys keys;
  keys.base_key = SymKey::random(rng);
  keys.bls = crypto::bls_gen(rng);
  keys.seed_master = SymKey::random(rng);
  keys.tag_master = SymKey::random(rng);
  return keys;
}

std::string to_string(Structure s) {
  return s == Structure::kAdd ? "add" : "del";
}

// The twin's tag and seed are derived from the primary ones, so no keyword
// string can make the two derivations collide.
Block32 keyword_tag(const ForwardVKeys& keys, const Keyword& w, Structure s) {
  Block32 tag = prf(keys.tag_master, w.view());
  if (s == Structure::kDel) tag = prf(SymKey{tag}, as_bytes(kTagDeletion));
  return tag;
}

SymKey keyword_seed(const ForwardVKeys& keys, const Keyword& w, Structure s) {
  Block32 seed = prf(keys.seed_master, w.view());
  if (s == Structure::kDel) seed = prf(SymKey{seed}, as_bytes(kTagDeletion));
  return SymKey{seed};
}

Block32 position(const Block32& tag, const DocId& id, std::uint64_t index) {
  return crypto::hmac_sha256(tag, concat(id.bytes, be64(index)));
}

Scalar pair_message(const SymKey& seed, const DocId& id, std::uint64_t index) {
  return crypto::prg_block(seed, index) * Scalar::from_doc_id(id);
}

// ---------------------------------------------------------------------------
// SignatureTable

void SignatureTable::insert(const Block32& pos, const G1Element& sigma) {
  if (!map_.emplace(pos, sigma).second) {
    throw CollisionError("T_sig position collision at " + to_hex(pos));
  }
}

const G1Element* SignatureTable::find(const Block32& pos) const {
  ++op_counts().tsig_lookups;
  auto it = map_.find(pos);
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Block32, G1Element>> SignatureTable::sorted_entries()
    const {
  return {map_.begin(), map_.end()};
}

KeywordState ForwardOwnerState::state(const Keyword& w, Structure s) const {
  const auto& m = states(s);
  auto it = m.find(w);
  return it == m.end() ? KeywordState{} : it->second;
}

// ---------------------------------------------------------------------------
// Build / update

namespace {

struct PairMaterial {
  sse::ChainToken chain;
  Block32 pos;
  G1Element sigma;
};

PairMaterial make_pair(const ForwardVKeys& keys, const Keyword& w,
                       const DocId& id, Structure s, ForwardOwnerState& owner,
                       RandomSource& rng) {
  KeywordState& st = owner.states(s)[w];
  auto [chain, next] = sse::chain_update_token(st, keys.base_key, w, id, rng);
  const std::uint64_t i = next.counter;
  st = next;
  PairMaterial out{chain, position(keyword_tag(keys, w, s), id, i), {}};
  out.sigma = crypto::bls_sign(keys.bls.sk,
                               pair_message(keyword_seed(keys, w, s), id, i));
  return out;
}

}  // namespace

ForwardBuild vf_build(const ForwardVKeys& keys, const PlainDb& db,
                      RandomSource& rng) {
  ForwardBuild out;
  for (const auto& [w, ids] : db) {
    for (const DocId& id : ids) {
      PairMaterial p = make_pair(keys, w, id, Structure::kAdd, out.owner, rng);
      sse::chain_apply(out.cloud.index, p.chain);
      out.cloud.tsig.insert(p.pos, p.sigma);
    }
  }
  return out;
}

FwdUpdateToken vf_update_token(const ForwardVKeys& keys, const DocId& id,
                               const std::vector<Keyword>& kws, Structure op,
                               ForwardOwnerState& owner, RandomSource& rng) {
  if (kws.empty()) {
    throw InputError("update needs at least one keyword");
  }
  std::set<Keyword> unique(kws.begin(), kws.end());
  if (unique.size() != kws.size()) {
    throw InputError("update has duplicate keywords");
  }
  FwdUpdateToken token;
  token.op = op;
  token.doc_name = crypto::doc_name(id);
  for (const Keyword& w : kws) {
    PairMaterial p = make_pair(keys, w, id, op, owner, rng);
    token.chain.push_back(p.chain);
    token.sig_inserts.emplace_back(p.pos, p.sigma);
  }
  return token;
}

void vf_apply_update(ForwardCloudState& cloud, const FwdUpdateToken& token) {
  if (token.chain.size() != token.sig_inserts.size()) {
    throw DecodeError("update token has mismatched chain/signature counts");
  }
  sse::EncryptedIndex& index = cloud.index_of(token.op);
  SignatureTable& tsig = cloud.tsig_of(token.op);
  std::set<Block32> locs, poss;
  for (const auto& c : token.chain) {
    if (index.find(c.location) != nullptr || !locs.insert(c.location).second) {
      throw CollisionError("update collides with an existing index location");
    }
  }
  for (const auto& [pos, sigma] : token.sig_inserts) {
    if (tsig.contains(pos) || !poss.insert(pos).second) {
      throw CollisionError("update collides with an existing T_sig position");
    }
  }
  for (const auto& c : token.chain) sse::chain_apply(index, c);
  for (const auto& [pos, sigma] : token.sig_inserts) tsig.insert(pos, sigma);
}

Bytes FwdUpdateToken::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(op));
  w.raw(doc_name);
  w.u32(static_cast<std::uint32_t>(chain.size()));
  for (std::size_t i = 0; i < chain.size(); ++i) {
    w.raw(chain[i].location);
    w.raw(chain[i].entry.encode());
    w.raw(sig_inserts[i].first);
    w.raw(sig_inserts[i].second.to_bytes());
  }
  return std::move(w).take();
}

FwdUpdateToken FwdUpdateToken::decode(ByteView data) {
  ByteReader r(data);
  FwdUpdateToken t;
  std::uint8_t op = r.u8();
  if (op > 1) throw DecodeError("bad update op");
  t.op = static_cast<Structure>(op);
  t.doc_name = r.array<32>();
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    sse::ChainToken c;
    c.location = r.array<32>();
    c.entry = sse::ChainEntry::decode(r.raw(sse::ChainEntry::kSize));
    t.chain.push_back(c);
    Block32 pos = r.array<32>();
    t.sig_inserts.emplace_back(pos, G1Element::from_bytes(r.raw(G1Element::kSize)));
  }
  r.expect_done();
  return t;
}

// ---------------------------------------------------------------------------
// Search

ForwardSearchToken vf_search_token(const ForwardVKeys& keys, const Keyword& w,
                                   const ForwardOwnerState& owner,
                                   Structure s) {
  return {sse::chain_search_token(owner.state(w, s)), keyword_tag(keys, w, s)};
}

CloudAnswer vf_cloud_search(const sse::EncryptedIndex& index,
                            const SignatureTable& tsig,
                            const ForwardSearchToken& token) {
  CloudAnswer out;
  out.result = sse::chain_search(index, token.chain);
  bool first = true;
  for (const IndexedId& hit : out.result) {
    const Block32 pos = position(token.tag, hit.id, hit.index);
    const G1Element* sigma = tsig.find(pos);
    if (sigma == nullptr) {
      throw ProofUnavailableError("no signature for insertion index " +
                                  std::to_string(hit.index));
    }
    out.positions.push_back(pos);
    out.signatures.push_back(*sigma);
    if (first) {
      out.pf_c = *sigma;
      first = false;
    } else {
      out.pf_c *= *sigma;
    }
  }
  return out;
}

ByteArray<SearchProof::kSize> SearchProof::encode() const {
  ByteArray<kSize> out{};
  auto c = pf_c.to_bytes();
  auto o = pf_o.to_bytes();
  std::copy(c.begin(), c.end(), out.begin());
  std::copy(o.begin(), o.end(), out.begin() + c.size());
  return out;
}

SearchProof SearchProof::decode(ByteView data) {
  if (data.size() != kSize) {
    throw DecodeError("search proof must be " + std::to_string(kSize) +
                      " bytes");
  }
  return {G1Element::from_bytes(data.first(G1Element::kSize)),
          Scalar::from_bytes(data.subspan(G1Element::kSize))};
}

std::string to_string(Reason r) {
  switch (r) {
    case Reason::kAccept: return "accept";
    case Reason::kCountMismatch: return "count-mismatch";
    case Reason::kMalformedResult: return "malformed-result";
    case Reason::kPairingFail: return "pairing-fail";
    case Reason::kProofUnavailable: return "proof-unavailable";
    case Reason::kIncompleteIndex: return "incomplete-index";
  }
  return "unknown";
}

Reason reason_from_string(const std::string& s) {
  for (Reason r : {Reason::kAccept, Reason::kCountMismatch,
                   Reason::kMalformedResult, Reason::kPairingFail,
                   Reason::kProofUnavailable, Reason::kIncompleteIndex}) {
    if (to_string(r) == s) return r;
  }
  throw DecodeError("unknown verdict reason '" + s + "'");
}

OwnerProof vf_owner_proof(const ForwardVKeys& keys, const Keyword& w,
                          Structure s, const std::vector<IndexedId>& received,
                          std::uint64_t expected_count) {
  if (received.size() != expected_count) {
    return {Reason::kCountMismatch, {}};
  }
  for (std::size_t k = 0; k < received.size(); ++k) {
    if (received[k].index != k + 1) return {Reason::kMalformedResult, {}};
  }
  const SymKey seed = keyword_seed(keys, w, s);
  // One multiply-add per returned identifier; the PRG block is a hash
  // evaluation, not group or field arithmetic.
  Scalar m;
  for (const IndexedId& hit : received) {
    m += crypto::prg_block(seed, hit.index) * Scalar::from_doc_id(hit.id);
  }
  return {Reason::kAccept, m};
}

bool vf_audit(const G2Element& pk, const Scalar& pf_o, const G1Element& pf_c) {
  return crypto::pairing(pf_c, G2Element::generator()) ==
         crypto::pairing(G1Element::generator().pow(pf_o), pk);
}

bool vf_audit_encoded(ByteView pk, ByteView proof) {
  try {
    SearchProof p = SearchProof::decode(proof);
    return vf_audit(G2Element::from_bytes(pk), p.pf_o, p.pf_c);
  } catch (const DecodeError&) {
    return false;
  }
}

SearchOutcome vf_verify_answer(const ForwardVKeys& keys, const Keyword& w,
                               Structure s, const ForwardOwnerState& owner,
                               const CloudAnswer& answer) {
  SearchOutcome out;
  out.result = answer.result;
  OwnerProof op = vf_owner_proof(keys, w, s, answer.result,
                                 owner.state(w, s).counter);
  if (!op.ok()) {
    out.reason = op.status;
    return out;
  }
  out.proof = SearchProof{answer.pf_c, op.pf_o};
  out.reason = vf_audit(keys.bls.pk, op.pf_o, answer.pf_c) ? Reason::kAccept
                                                           : Reason::kPairingFail;
  return out;
}

SearchOutcome vf_search(const ForwardVKeys& keys, const ForwardOwnerState& owner,
                        const ForwardCloudState& cloud, const Keyword& w,
                        Structure s) {
  ForwardSearchToken token = vf_search_token(keys, w, owner, s);
  CloudAnswer answer;
  try {
    answer = vf_cloud_search(cloud.index_of(s), cloud.tsig_of(s), token);
  } catch (const IncompleteIndexError&) {
    return {Reason::kIncompleteIndex, {}, std::nullopt};
  } catch (const ProofUnavailableError&) {
    return {Reason::kProofUnavailable, {}, std::nullopt};
  }
  return vf_verify_answer(keys, w, s, owner, answer);
}

std::vector<DocId> set_difference_ordered(const std::vector<IndexedId>& add,
                                          const std::vector<IndexedId>& del) {
  std::unordered_set<DocId> removed;
  for (const IndexedId& d : del) removed.insert(d.id);
  std::vector<DocId> out;
  for (const IndexedId& a : add) {
    if (!removed.count(a.id)) out.push_back(a.id);
  }
  return out;
}

DeletionAwareOutcome vf_search_with_deletions(const ForwardVKeys& keys,
                                              const ForwardOwnerState& owner,
                                              const ForwardCloudState& cloud,
                                              const Keyword& w) {
  DeletionAwareOutcome out;
  out.add = vf_search(keys, owner, cloud, w, Structure::kAdd);
  out.del = vf_search(keys, owner, cloud, w, Structure::kDel);
  if (out.accepted()) {
    out.ids = set_difference_ordered(out.add.result, out.del.result);
  }
  return out;
}

}  // namespace vsse::vforward
