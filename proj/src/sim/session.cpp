#include <algorithm>
#include <optional>
#include <set>

#include "vsse/crypto.hpp"
#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

namespace vsse::sim {

using crypto::G1Element;
using crypto::Scalar;
using vforward::ForwardSearchToken;
using vforward::ForwardVKeys;

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kHonest: return "HONEST";
    case Strategy::kDropOne: return "DROP_ONE";
    case Strategy::kReplayOtherKeyword: return "REPLAY_OTHER_KEYWORD";
    case Strategy::kFlipIdBit: return "FLIP_ID_BIT";
    case Strategy::kForgeProof: return "FORGE_PROOF";
    case Strategy::kStaleIgnoreUpdate: return "STALE_IGNORE_UPDATE";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "HONEST") return Strategy::kHonest;
  for (Strategy t : tampering_strategies()) {
    if (to_string(t) == s) return t;
  }
  throw InputError("unknown adversary strategy '" + s + "'");
}

const std::vector<Strategy>& tampering_strategies() {
  static const std::vector<Strategy> all = {
      Strategy::kDropOne, Strategy::kReplayOtherKeyword, Strategy::kFlipIdBit,
      Strategy::kForgeProof, Strategy::kStaleIgnoreUpdate};
  return all;
}

namespace {

WireMessage make_msg(MessageKind kind, Party from, Party to,
                     std::uint64_t session, Bytes payload) {
  return {kind, from, to, session, std::move(payload)};
}

void expect(const WireMessage& m, MessageKind kind, std::uint64_t session) {
  if (m.kind != kind || m.session != session) {
    throw ProtocolError("expected " + to_string(kind) + " for session " +
                        std::to_string(session) + ", got " +
                        to_string(m.kind) + " for session " +
                        std::to_string(m.session));
  }
}

// ---------------------------------------------------------------------------
// Owner

class OwnerNode {
 public:
  explicit OwnerNode(ForwardVKeys keys) : keys_(std::move(keys)) {}

  const crypto::G2Element& pk() const { return keys_.bls.pk; }

  WireMessage build(const PlainDb& db, RandomSource& rng) {
    vforward::ForwardBuild b = vforward::vf_build(keys_, db, rng);
    state_ = std::move(b.owner);
    return make_msg(MessageKind::kBuildUpload, Party::kOwner, Party::kCloud, 0,
                    encode_cloud_state(b.cloud));
  }

  WireMessage search_request(std::uint64_t session, const Keyword& w) {
    if (pending_) throw ProtocolError("owner already has a search in flight");
    pending_ = Pending{session, w, {}};
    SearchRequestPayload p{
        vforward::vf_search_token(keys_, w, state_, Structure::kAdd),
        vforward::vf_search_token(keys_, w, state_, Structure::kDel)};
    return make_msg(MessageKind::kSearchRequest, Party::kOwner, Party::kCloud,
                    session, p.encode());
  }

  WireMessage on_search_result(const WireMessage& m) {
    if (!pending_) throw ProtocolError("owner got an unsolicited SearchResult");
    expect(m, MessageKind::kSearchResult, pending_->session);
    pending_->result = SearchResultPayload::decode(m.payload);
    ProofOwnerPayload p{part(Structure::kAdd, pending_->result.add),
                        part(Structure::kDel, pending_->result.del)};
    return make_msg(MessageKind::kProofOwner, Party::kOwner, Party::kAuditor,
                    pending_->session, p.encode());
  }

  std::pair<Reason, std::vector<DocId>> on_verdict(const WireMessage& m) {
    if (!pending_) throw ProtocolError("owner got an unsolicited Verdict");
    expect(m, MessageKind::kVerdict, pending_->session);
    VerdictPayload v = VerdictPayload::decode(m.payload);
    std::vector<DocId> ids;
    if (v.accepted()) {
      ids = vforward::set_difference_ordered(pending_->result.add.hits,
                                             pending_->result.del.hits);
    }
    pending_.reset();
    return {v.reason(), ids};
  }

  WireMessage update(std::uint64_t session, const DocId& id,
                     const std::vector<Keyword>& kws, Structure op,
                     RandomSource& rng) {
    vforward::FwdUpdateToken t =
        vforward::vf_update_token(keys_, id, kws, op, state_, rng);
    return make_msg(MessageKind::kUpdateUpload, Party::kOwner, Party::kCloud,
                    session, t.encode());
  }

 private:
  struct Pending {
    std::uint64_t session;
    Keyword w;
    SearchResultPayload result;
  };

  OwnerPart part(Structure s, const StructureResult& r) const {
    if (r.status != Reason::kAccept) return {r.status, {}};
    vforward::OwnerProof p = vforward::vf_owner_proof(
        keys_, pending_->w, s, r.hits, state_.state(pending_->w, s).counter);
    return {p.status, p.pf_o};
  }

  ForwardVKeys keys_;
  vforward::ForwardOwnerState state_;
  std::optional<Pending> pending_;
};

// ---------------------------------------------------------------------------
// Auditor: holds only pk.

class AuditorNode {
 public:
  explicit AuditorNode(crypto::G2Element pk) : pk_(pk) {}

  void on_proof_cloud(const WireMessage& m) {
    if (cloud_) throw ProtocolError("auditor got two ProofCloud messages");
    if (m.kind != MessageKind::kProofCloud) {
      throw ProtocolError("auditor expected ProofCloud, got " +
                          to_string(m.kind));
    }
    received_ = m.payload.size();
    cloud_ = std::make_pair(m.session, ProofCloudPayload::decode(m.payload));
  }

  WireMessage on_proof_owner(const WireMessage& m) {
    if (!cloud_) throw ProtocolError("auditor got ProofOwner before ProofCloud");
    expect(m, MessageKind::kProofOwner, cloud_->first);
    received_ += m.payload.size();
    ProofOwnerPayload o = ProofOwnerPayload::decode(m.payload);
    VerdictPayload v{judge(o.add, cloud_->second.add),
                     judge(o.del, cloud_->second.del)};
    const std::uint64_t session = cloud_->first;
    cloud_.reset();
    return make_msg(MessageKind::kVerdict, Party::kAuditor, Party::kOwner,
                    session, v.encode());
  }

  std::size_t received_bytes() const { return received_; }

 private:
  Reason judge(const OwnerPart& o, const G1Element& pf_c) const {
    if (o.status != Reason::kAccept) return o.status;
    return vforward::vf_audit(pk_, o.pf_o, pf_c) ? Reason::kAccept
                                                 : Reason::kPairingFail;
  }

  crypto::G2Element pk_;
  std::optional<std::pair<std::uint64_t, ProofCloudPayload>> cloud_;
  std::size_t received_ = 0;
};

// ---------------------------------------------------------------------------
// Cloud node: the party plus its leakage log.

class CloudNode {
 public:
  CloudNode(const AdversaryStrategy& strategy, std::vector<LeakageRecord>& log)
      : cloud_(strategy), log_(log) {}

  void on_build(const WireMessage& m) {
    expect(m, MessageKind::kBuildUpload, 0);
    log_.push_back(cloud_.build(decode_cloud_state(m.payload), m.session));
  }

  std::pair<WireMessage, WireMessage> on_search(const WireMessage& m) {
    if (m.kind != MessageKind::kSearchRequest) {
      throw ProtocolError("cloud expected SearchRequest, got " +
                          to_string(m.kind));
    }
    AdversarialCloud::Response r =
        cloud_.search(SearchRequestPayload::decode(m.payload), m.session);
    log_.push_back(std::move(r.leakage));
    tampered_ = r.tampered;
    return {make_msg(MessageKind::kSearchResult, Party::kCloud, Party::kOwner,
                     m.session, r.result.encode()),
            make_msg(MessageKind::kProofCloud, Party::kCloud, Party::kAuditor,
                     m.session, r.proof.encode())};
  }

  void on_update(const WireMessage& m) {
    if (m.kind != MessageKind::kUpdateUpload) {
      throw ProtocolError("cloud expected UpdateUpload, got " +
                          to_string(m.kind));
    }
    log_.push_back(cloud_.update(vforward::FwdUpdateToken::decode(m.payload),
                                 m.session));
  }

  bool last_tampered() const { return tampered_; }

 private:
  AdversarialCloud cloud_;
  std::vector<LeakageRecord>& log_;
  bool tampered_ = false;
};

// ---------------------------------------------------------------------------
// Plaintext model

class Model {
 public:
  explicit Model(const PlainDb& db) {
    for (const auto& [w, ids] : db) adds_[w] = ids;
  }

  void apply(const ScriptOp& op) {
    switch (op.kind) {
      case ScriptOp::Kind::kSearch:
        if (op.keywords.size() != 1) {
          throw InputError("a search takes exactly one keyword");
        }
        return;
      case ScriptOp::Kind::kAdd:
      case ScriptOp::Kind::kDel:
        break;
    }
    if (op.keywords.empty()) throw InputError("update needs a keyword");
    std::set<Keyword> seen;
    for (const Keyword& w : op.keywords) {
      if (!seen.insert(w).second) {
        throw InputError("duplicate keyword '" + w.text() + "' in update");
      }
      const auto& list = adds_[w];
      const bool added = std::find(list.begin(), list.end(), op.id) != list.end();
      if (op.kind == ScriptOp::Kind::kAdd && added) {
        throw InputError("pair (" + w.text() + ", " + op.id.hex() +
                         ") was already added");
      }
      if (op.kind == ScriptOp::Kind::kDel &&
          (!added || dels_[w].count(op.id) != 0)) {
        throw InputError("pair (" + w.text() + ", " + op.id.hex() +
                         ") is not live");
      }
    }
    for (const Keyword& w : op.keywords) {
      if (op.kind == ScriptOp::Kind::kAdd) {
        adds_[w].push_back(op.id);
      } else {
        dels_[w].insert(op.id);
      }
    }
  }

  std::vector<DocId> expected(const Keyword& w) const {
    std::vector<DocId> out;
    auto it = adds_.find(w);
    if (it == adds_.end()) return out;
    auto d = dels_.find(w);
    for (const DocId& id : it->second) {
      if (d == dels_.end() || d->second.count(id) == 0) out.push_back(id);
    }
    return out;
  }

 private:
  std::map<Keyword, std::vector<DocId>> adds_;
  std::map<Keyword, std::set<DocId>> dels_;
};

// Routes every message through the recipient's inbox and logs it.
class Network {
 public:
  Network(Transport t, Transcript& transcript)
      : owner_(make_channel(t)),
        cloud_(make_channel(t)),
        auditor_(make_channel(t)),
        transcript_(transcript) {}

  void send(const WireMessage& m) {
    transcript_.messages.push_back(
        {m.kind, m.from, m.to, m.session, m.payload.size(),
         to_hex(crypto::sha256(m.payload))});
    inbox(m.to).send(m);
  }

  WireMessage receive(Party p) { return inbox(p).receive(); }

 private:
  Channel& inbox(Party p) {
    switch (p) {
      case Party::kOwner: return *owner_;
      case Party::kCloud: return *cloud_;
      case Party::kAuditor: return *auditor_;
    }
    throw ProtocolError("unknown party");
  }

  std::unique_ptr<Channel> owner_, cloud_, auditor_;
  Transcript& transcript_;
};

}  // namespace

Transcript run_session(const PlainDb& db, const Script& script,
                       const AdversaryStrategy& strategy, RandomSource& rng,
                       const SessionOptions& options) {
  {
    Model check(db);
    for (const ScriptOp& op : script) check.apply(op);
  }

  Transcript t;
  t.strategy = strategy.name;
  Network net(options.transport, t);
  OwnerNode owner(vforward::vf_keygen(rng));
  AuditorNode auditor(owner.pk());
  CloudNode cloud(strategy, t.leakage);
  Model model(db);

  net.send(owner.build(db, rng));
  cloud.on_build(net.receive(Party::kCloud));

  std::uint64_t session = 0;
  for (const ScriptOp& op : script) {
    ++session;
    model.apply(op);
    if (op.kind != ScriptOp::Kind::kSearch) {
      const Structure s =
          op.kind == ScriptOp::Kind::kAdd ? Structure::kAdd : Structure::kDel;
      net.send(owner.update(session, op.id, op.keywords, s, rng));
      cloud.on_update(net.receive(Party::kCloud));
      continue;
    }
    const Keyword& w = op.keywords.front();
    net.send(owner.search_request(session, w));
    auto [result, proof] = cloud.on_search(net.receive(Party::kCloud));
    net.send(result);
    net.send(proof);
    net.send(owner.on_search_result(net.receive(Party::kOwner)));
    auditor.on_proof_cloud(net.receive(Party::kAuditor));
    net.send(auditor.on_proof_owner(net.receive(Party::kAuditor)));
    auto [reason, ids] = owner.on_verdict(net.receive(Party::kOwner));

    SearchRecord rec;
    rec.session = session;
    rec.keyword = w.text();
    rec.reason = reason;
    rec.ids = std::move(ids);
    rec.expected = model.expected(w);
    rec.tampered = cloud.last_tampered();
    rec.auditor_bytes = auditor.received_bytes();
    t.searches.push_back(std::move(rec));
  }
  return t;
}

}  // namespace vsse::sim
