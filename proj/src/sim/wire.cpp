#include <stdexcept>

#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

namespace vsse::sim {

using crypto::G1Element;
using crypto::Scalar;

std::string to_string(MessageKind k) {
  switch (k) {
    case MessageKind::kBuildUpload: return "BuildUpload";
    case MessageKind::kSearchRequest: return "SearchRequest";
    case MessageKind::kSearchResult: return "SearchResult";
    case MessageKind::kProofCloud: return "ProofCloud";
    case MessageKind::kProofOwner: return "ProofOwner";
    case MessageKind::kVerdict: return "Verdict";
    case MessageKind::kUpdateUpload: return "UpdateUpload";
  }
  return "unknown";
}

std::string to_string(Party p) {
  switch (p) {
    case Party::kOwner: return "owner";
    case Party::kCloud: return "cloud";
    case Party::kAuditor: return "auditor";
  }
  return "unknown";
}

Bytes WireMessage::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind));
  w.u8(static_cast<std::uint8_t>(from));
  w.u8(static_cast<std::uint8_t>(to));
  w.u64(session);
  w.blob(payload);
  return std::move(w).take();
}

WireMessage WireMessage::decode(ByteView frame) {
  ByteReader r(frame);
  WireMessage m;
  std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 7) throw DecodeError("unknown message kind");
  m.kind = static_cast<MessageKind>(kind);
  std::uint8_t from = r.u8(), to = r.u8();
  if (from > 2 || to > 2) throw DecodeError("unknown party");
  m.from = static_cast<Party>(from);
  m.to = static_cast<Party>(to);
  m.session = r.u64();
  m.payload = r.blob();
  r.expect_done();
  return m;
}

namespace {

void put_token(ByteWriter& w, const vforward::ForwardSearchToken& t) {
  w.raw(t.chain.head);
  w.u64(t.chain.count);
  w.raw(t.tag);
}

vforward::ForwardSearchToken get_token(ByteReader& r) {
  vforward::ForwardSearchToken t;
  t.chain.head = r.array<32>();
  t.chain.count = r.u64();
  t.tag = r.array<32>();
  return t;
}

Reason get_reason(ByteReader& r) {
  std::uint8_t v = r.u8();
  if (v > static_cast<std::uint8_t>(Reason::kIncompleteIndex)) {
    throw DecodeError("unknown reason code");
  }
  return static_cast<Reason>(v);
}

void put_result(ByteWriter& w, const StructureResult& s) {
  w.u8(static_cast<std::uint8_t>(s.status));
  w.u32(static_cast<std::uint32_t>(s.hits.size()));
  for (const auto& h : s.hits) {
    w.raw(h.id.bytes);
    w.u64(h.index);
  }
}

StructureResult get_result(ByteReader& r) {
  StructureResult s;
  s.status = get_reason(r);
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    sse::IndexedId h;
    h.id.bytes = r.array<DocId::kSize>();
    h.index = r.u64();
    s.hits.push_back(h);
  }
  return s;
}

void put_index(ByteWriter& w, const sse::EncryptedIndex& index) {
  auto entries = index.sorted_entries();
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& [loc, val] : entries) {
    w.raw(loc);
    w.blob(val);
  }
}

sse::EncryptedIndex get_index(ByteReader& r) {
  sse::EncryptedIndex index;
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    Block32 loc = r.array<32>();
    index.insert(loc, r.blob());
  }
  return index;
}

void put_tsig(ByteWriter& w, const vforward::SignatureTable& t) {
  auto entries = t.sorted_entries();
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& [pos, sigma] : entries) {
    w.raw(pos);
    w.raw(sigma.to_bytes());
  }
}

vforward::SignatureTable get_tsig(ByteReader& r) {
  vforward::SignatureTable t;
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    Block32 pos = r.array<32>();
    t.insert(pos, G1Element::from_bytes(r.raw(G1Element::kSize)));
  }
  return t;
}

}  // namespace

Bytes SearchRequestPayload::encode() const {
  ByteWriter w;
  put_token(w, add);
  put_token(w, del);
  return std::move(w).take();
}

SearchRequestPayload SearchRequestPayload::decode(ByteView data) {
  ByteReader r(data);
  SearchRequestPayload p;
  p.add = get_token(r);
  p.del = get_token(r);
  r.expect_done();
  return p;
}

Bytes SearchResultPayload::encode() const {
  ByteWriter w;
  put_result(w, add);
  put_result(w, del);
  return std::move(w).take();
}

SearchResultPayload SearchResultPayload::decode(ByteView data) {
  ByteReader r(data);
  SearchResultPayload p;
  p.add = get_result(r);
  p.del = get_result(r);
  r.expect_done();
  return p;
}

Bytes ProofCloudPayload::encode() const {
  return concat(add.to_bytes(), del.to_bytes());
}

ProofCloudPayload ProofCloudPayload::decode(ByteView data) {
  if (data.size() != kSize) throw DecodeError("bad ProofCloud size");
  return {G1Element::from_bytes(data.first(G1Element::kSize)),
          G1Element::from_bytes(data.subspan(G1Element::kSize))};
}

Bytes ProofOwnerPayload::encode() const {
  ByteWriter w;
  for (const OwnerPart* p : {&add, &del}) {
    w.u8(static_cast<std::uint8_t>(p->status));
    w.raw(p->pf_o.to_bytes());
  }
  return std::move(w).take();
}

ProofOwnerPayload ProofOwnerPayload::decode(ByteView data) {
  if (data.size() != kSize) throw DecodeError("bad ProofOwner size");
  ByteReader r(data);
  ProofOwnerPayload p;
  for (OwnerPart* part : {&p.add, &p.del}) {
    part->status = get_reason(r);
    part->pf_o = Scalar::from_bytes(r.raw(Scalar::kSize));
  }
  return p;
}

Bytes VerdictPayload::encode() const {
  return {static_cast<std::uint8_t>(add), static_cast<std::uint8_t>(del)};
}

VerdictPayload VerdictPayload::decode(ByteView data) {
  ByteReader r(data);
  VerdictPayload v;
  v.add = get_reason(r);
  v.del = get_reason(r);
  r.expect_done();
  return v;
}

Bytes encode_cloud_state(const vforward::ForwardCloudState& cloud) {
  ByteWriter w;
  put_index(w, cloud.index);
  put_tsig(w, cloud.tsig);
  put_index(w, cloud.del_index);
  put_tsig(w, cloud.del_tsig);
  return std::move(w).take();
}

vforward::ForwardCloudState decode_cloud_state(ByteView data) {
  ByteReader r(data);
  vforward::ForwardCloudState c;
  c.index = get_index(r);
  c.tsig = get_tsig(r);
  c.del_index = get_index(r);
  c.del_tsig = get_tsig(r);
  r.expect_done();
  return c;
}

}  // namespace vsse::sim
