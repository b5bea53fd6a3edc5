#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

namespace vsse::sim {

using crypto::G1Element;
using vforward::ForwardSearchToken;

namespace {

std::string id_index(const sse::IndexedId& h) {
  return h.id.hex() + ":" + std::to_string(h.index);
}

G1Element product(const std::vector<G1Element>& sigs) {
  G1Element acc;
  for (const auto& s : sigs) acc *= s;
  return acc;
}

void drop(CachedAnswer& a, std::size_t k) {
  auto& hits = a.result.hits;
  hits.erase(hits.begin() + static_cast<std::ptrdiff_t>(k));
  a.signatures.erase(a.signatures.begin() + static_cast<std::ptrdiff_t>(k));
  a.pf_c = product(a.signatures);
}

void observe(LeakageRecord& rec, Structure s, const ForwardSearchToken& token,
             const CachedAnswer& a, const std::vector<Block32>& positions) {
  const std::string p = vforward::to_string(s) + ".";
  rec.fields.push_back(
      {p + "chain_head", "L_srch.sigma_f", {to_hex(token.chain.head)}});
  rec.fields.push_back(
      {p + "count", "L_srch.sigma_f", {std::to_string(token.chain.count)}});
  rec.fields.push_back({p + "tag", "L_srch.pairs", {to_hex(token.tag)}});
  LeakageField results{p + "results", "L_srch.pairs", {}};
  for (const auto& h : a.result.hits) results.values.push_back(id_index(h));
  LeakageField poss{p + "positions", "L_srch.pairs", {}};
  for (const auto& pos : positions) poss.values.push_back(to_hex(pos));
  LeakageField sigs{p + "signatures", "L_srch.pairs", {}};
  for (const auto& sg : a.signatures) sigs.values.push_back(to_hex(sg.to_bytes()));
  rec.fields.push_back(std::move(results));
  rec.fields.push_back(std::move(poss));
  rec.fields.push_back(std::move(sigs));
}

}  // namespace

AdversarialCloud::AdversarialCloud(const AdversaryStrategy& strategy,
                                   vforward::ForwardCloudState state)
    : strategy_(strategy), rng_(strategy.seed), state_(std::move(state)) {}

LeakageRecord AdversarialCloud::build(vforward::ForwardCloudState state,
                                      std::uint64_t session) {
  state_ = std::move(state);
  LeakageRecord rec{"build", session, {}};
  auto count = [&](std::string name, const char* term, std::size_t n) {
    rec.fields.push_back({std::move(name), term, {std::to_string(n)}});
  };
  count("index_entries", "L_bld.sigma_f", state_.index.size());
  count("del_index_entries", "L_bld.sigma_f", state_.del_index.size());
  count("tsig_entries", "L_bld.tsig_size", state_.tsig.size());
  count("del_tsig_entries", "L_bld.tsig_size", state_.del_tsig.size());
  return rec;
}

AdversarialCloud::Response AdversarialCloud::search(
    const SearchRequestPayload& req, std::uint64_t session) {
  Answer add = honest(req.add, Structure::kAdd);
  Answer del = honest(req.del, Structure::kDel);

  Response out;
  out.leakage = {"search", session, {}};
  observe(out.leakage, Structure::kAdd, req.add, add.a, add.positions);
  observe(out.leakage, Structure::kDel, req.del, del.a, del.positions);

  CachedAnswer sent_add = add.a, sent_del = del.a;
  out.tampered = tamper(req, sent_add, sent_del);
  if (add.a.result.status == Reason::kAccept) history_[req.add.tag] = add.a;
  if (del.a.result.status == Reason::kAccept) history_[req.del.tag] = del.a;

  out.result = {sent_add.result, sent_del.result};
  out.proof = {sent_add.pf_c, sent_del.pf_c};
  return out;
}

LeakageRecord AdversarialCloud::update(const vforward::FwdUpdateToken& t,
                                       std::uint64_t session) {
  LeakageRecord rec{"update", session, {}};
  LeakageField name{"doc_name", "L_updt.id", {to_hex(t.doc_name)}};
  LeakageField structure{"structure", "L_updt.structure",
                         {vforward::to_string(t.op)}};
  LeakageField locs{"chain_locations", "L_updt.sigma_f", {}};
  LeakageField entries{"chain_entries", "L_updt.sigma_f", {}};
  LeakageField poss{"positions", "L_updt.pairs", {}};
  LeakageField sigs{"signatures", "L_updt.pairs", {}};
  for (const auto& c : t.chain) {
    locs.values.push_back(to_hex(c.location));
    entries.values.push_back(to_hex(c.entry.encode()));
  }
  for (const auto& [pos, sigma] : t.sig_inserts) {
    poss.values.push_back(to_hex(pos));
    sigs.values.push_back(to_hex(sigma.to_bytes()));
  }
  rec.fields = {name, structure, locs, entries, poss, sigs};
  if (strategy_.name != Strategy::kStaleIgnoreUpdate) {
    vforward::vf_apply_update(state_, t);
  }
  return rec;
}

AdversarialCloud::Answer AdversarialCloud::honest(
    const ForwardSearchToken& token, Structure s) {
  Answer out;
  try {
    vforward::CloudAnswer c = vforward::vf_cloud_search(
        state_.index_of(s), state_.tsig_of(s), token);
    out.a.result.hits = std::move(c.result);
    out.a.pf_c = c.pf_c;
    out.a.signatures = std::move(c.signatures);
    out.positions = std::move(c.positions);
  } catch (const IncompleteIndexError&) {
    out.a.result.status = Reason::kIncompleteIndex;
  } catch (const ProofUnavailableError&) {
    out.a.result.status = Reason::kProofUnavailable;
  }
  return out;
}

// A stale cloud cannot follow a chain head it never stored; it falls back to
// the last answer it gave for this tag, or to an empty one.
bool AdversarialCloud::stale(const Block32& tag, CachedAnswer& a) {
  if (a.result.status == Reason::kAccept) return false;
  auto it = history_.find(tag);
  a = it != history_.end() ? it->second : CachedAnswer{};
  return true;
}

bool AdversarialCloud::tamper(const SearchRequestPayload& req,
                              CachedAnswer& add, CachedAnswer& del) {
  if (strategy_.name == Strategy::kHonest) return false;
  if (strategy_.name == Strategy::kStaleIgnoreUpdate) {
    bool any = stale(req.add.tag, add);
    any |= stale(req.del.tag, del);
    if (any || !strategy_.rollback) return any;
  }

  Structure s = strategy_.target;
  CachedAnswer* a = s == Structure::kAdd ? &add : &del;
  CachedAnswer* other = s == Structure::kAdd ? &del : &add;
  if (a->result.hits.empty() && !other->result.hits.empty()) {
    std::swap(a, other);
    s = s == Structure::kAdd ? Structure::kDel : Structure::kAdd;
  }
  if (a->result.status != Reason::kAccept) return false;
  auto& hits = a->result.hits;
  const Block32& own_tag = s == Structure::kAdd ? req.add.tag : req.del.tag;

  switch (strategy_.name) {
    case Strategy::kDropOne:
      if (hits.empty()) return false;
      drop(*a, rng_.uniform(hits.size()));
      return true;
    case Strategy::kFlipIdBit: {
      if (hits.empty()) return false;
      const std::size_t k = rng_.uniform(hits.size());
      const std::size_t bit = rng_.uniform(DocId::kSize * 8);
      hits[k].id.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      return true;
    }
    case Strategy::kForgeProof: {
      DocId fake{rng_.bytes<DocId::kSize>()};
      if (hits.empty()) {
        hits.push_back({fake, 1});
      } else {
        hits[rng_.uniform(hits.size())].id = fake;
      }
      a->pf_c = G1Element::random(rng_);
      return true;
    }
    case Strategy::kReplayOtherKeyword: {
      const CachedAnswer* best = nullptr;
      for (const auto& [tag, cached] : history_) {
        if (tag == req.add.tag || tag == req.del.tag) continue;
        if (cached.result.hits == hits && cached.pf_c == a->pf_c) continue;
        if (best == nullptr || (cached.result.hits.size() == hits.size() &&
                                best->result.hits.size() != hits.size())) {
          best = &cached;
        }
      }
      if (best == nullptr) return false;
      *a = *best;
      return true;
    }
    case Strategy::kStaleIgnoreUpdate: {
      // Rollback: an older answer for the same tag, else drop the newest pair.
      auto it = history_.find(own_tag);
      if (it != history_.end() && it->second.result.hits != hits) {
        *a = it->second;
        return true;
      }
      if (hits.empty()) return false;
      drop(*a, hits.size() - 1);
      return true;
    }
    case Strategy::kHonest:
      break;
  }
  return false;
}

// ---------------------------------------------------------------------------
// History persistence

Bytes encode_history(const std::map<Block32, CachedAnswer>& h) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(h.size()));
  for (const auto& [tag, a] : h) {
    w.raw(tag);
    w.raw(a.pf_c.to_bytes());
    w.u32(static_cast<std::uint32_t>(a.result.hits.size()));
    for (std::size_t k = 0; k < a.result.hits.size(); ++k) {
      w.raw(a.result.hits[k].id.bytes);
      w.u64(a.result.hits[k].index);
      w.raw(a.signatures[k].to_bytes());
    }
  }
  return std::move(w).take();
}

std::map<Block32, CachedAnswer> decode_history(ByteView data) {
  ByteReader r(data);
  std::map<Block32, CachedAnswer> out;
  const std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    Block32 tag = r.array<32>();
    CachedAnswer a;
    a.pf_c = G1Element::from_bytes(r.raw(G1Element::kSize));
    const std::uint32_t hits = r.u32();
    for (std::uint32_t k = 0; k < hits; ++k) {
      DocId id{r.array<DocId::kSize>()};
      const std::uint64_t index = r.u64();
      a.result.hits.push_back({id, index});
      a.signatures.push_back(G1Element::from_bytes(r.raw(G1Element::kSize)));
    }
    out[tag] = std::move(a);
  }
  r.expect_done();
  return out;
}

}  // namespace vsse::sim
