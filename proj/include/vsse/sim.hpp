#pragma once

// Three-party protocol simulator: owner, cloud and auditor exchange
// WireMessages over channels (in-process queues or localhost TCP). The cloud
// can be replaced by an adversarial strategy; every value the cloud observes
// is logged against the scheme's leakage terms.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vsse/errors.hpp"
#include "vsse/forward_vsse.hpp"
#include "vsse/random.hpp"
#include "vsse/types.hpp"

namespace vsse::sim {

using vforward::Reason;
using vforward::Structure;

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Wire format

enum class MessageKind : std::uint8_t {
  kBuildUpload = 1,
  kSearchRequest = 2,
  kSearchResult = 3,
  kProofCloud = 4,
  kProofOwner = 5,
  kVerdict = 6,
  kUpdateUpload = 7,
};

enum class Party : std::uint8_t { kOwner = 0, kCloud = 1, kAuditor = 2 };

std::string to_string(MessageKind k);
std::string to_string(Party p);

struct WireMessage {
  MessageKind kind{};
  Party from{};
  Party to{};
  std::uint64_t session = 0;
  Bytes payload;

  Bytes encode() const;
  static WireMessage decode(ByteView frame);
};

struct SearchRequestPayload {
  vforward::ForwardSearchToken add;
  vforward::ForwardSearchToken del;

  Bytes encode() const;
  static SearchRequestPayload decode(ByteView data);
};

// Cloud -> owner. status is kAccept when the cloud produced an answer, or
// kIncompleteIndex / kProofUnavailable when it could not.
struct StructureResult {
  Reason status = Reason::kAccept;
  std::vector<sse::IndexedId> hits;
};

struct SearchResultPayload {
  StructureResult add;
  StructureResult del;

  Bytes encode() const;
  static SearchResultPayload decode(ByteView data);
};

// Cloud -> auditor: exactly one G1 element per structure.
struct ProofCloudPayload {
  crypto::G1Element add;
  crypto::G1Element del;

  static constexpr std::size_t kSize = 2 * crypto::G1Element::kSize;
  Bytes encode() const;
  static ProofCloudPayload decode(ByteView data);
};

// Owner -> auditor: per structure a status byte (explicit rejection signal)
// and one scalar.
struct OwnerPart {
  Reason status = Reason::kAccept;
  crypto::Scalar pf_o;
};

struct ProofOwnerPayload {
  OwnerPart add;
  OwnerPart del;

  static constexpr std::size_t kSize = 2 * (1 + crypto::Scalar::kSize);
  Bytes encode() const;
  static ProofOwnerPayload decode(ByteView data);
};

struct VerdictPayload {
  Reason add = Reason::kAccept;
  Reason del = Reason::kAccept;

  bool accepted() const { return add == Reason::kAccept && del == Reason::kAccept; }
  Reason reason() const { return add != Reason::kAccept ? add : del; }
  Bytes encode() const;
  static VerdictPayload decode(ByteView data);
};

Bytes encode_cloud_state(const vforward::ForwardCloudState& cloud);
vforward::ForwardCloudState decode_cloud_state(ByteView data);

// ---------------------------------------------------------------------------
// Transport

class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const WireMessage& msg) = 0;
  // Blocks until a message arrives; throws ProtocolError if none can.
  virtual WireMessage receive() = 0;
};

enum class Transport { kInProcess, kLocalhostSocket };

std::unique_ptr<Channel> make_channel(Transport t);

// ---------------------------------------------------------------------------
// Adversary

enum class Strategy {
  kHonest,
  kDropOne,
  kReplayOtherKeyword,
  kFlipIdBit,
  kForgeProof,
  kStaleIgnoreUpdate,
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);
const std::vector<Strategy>& tampering_strategies();

struct AdversaryStrategy {
  Strategy name = Strategy::kHonest;
  std::uint64_t seed = 0;
  // Structure to tamper with; falls back to the other one when its result
  // is empty.
  Structure target = Structure::kAdd;
  // STALE_IGNORE_UPDATE only: also roll back the newest pair of a keyword
  // whose index is current, i.e. answer as before its latest update. Used
  // where the cloud state was loaded already updated.
  bool rollback = false;
};

// ---------------------------------------------------------------------------
// Leakage

struct LeakageField {
  std::string name;
  std::string term;
  std::vector<std::string> values;
};

struct LeakageRecord {
  std::string op;  // "build" | "search" | "update"
  std::uint64_t session = 0;
  std::vector<LeakageField> fields;
};

// ---------------------------------------------------------------------------
// Cloud party

struct CachedAnswer {
  StructureResult result;
  crypto::G1Element pf_c;
  std::vector<crypto::G1Element> signatures;  // aligned with result.hits
};

// Answers searches over its state, honestly or per strategy, and reports
// what it observed. Holds no keys.
class AdversarialCloud {
 public:
  explicit AdversarialCloud(const AdversaryStrategy& strategy,
                            vforward::ForwardCloudState state = {});

  struct Response {
    SearchResultPayload result;
    ProofCloudPayload proof;
    bool tampered = false;
    LeakageRecord leakage;
  };

  LeakageRecord build(vforward::ForwardCloudState state,
                      std::uint64_t session = 0);
  Response search(const SearchRequestPayload& req, std::uint64_t session);
  // Applies the token unless the strategy ignores updates.
  LeakageRecord update(const vforward::FwdUpdateToken& token,
                       std::uint64_t session);

  const vforward::ForwardCloudState& state() const { return state_; }
  // Honest answers given so far, by tag; replay and stale strategies draw
  // on them.
  const std::map<Block32, CachedAnswer>& history() const { return history_; }
  void set_history(std::map<Block32, CachedAnswer> h) { history_ = std::move(h); }

 private:
  struct Answer {
    CachedAnswer a;
    std::vector<Block32> positions;
  };

  Answer honest(const vforward::ForwardSearchToken& token, Structure s);
  bool tamper(const SearchRequestPayload& req, CachedAnswer& add,
              CachedAnswer& del);
  bool stale(const Block32& tag, CachedAnswer& a);

  AdversaryStrategy strategy_;
  SeededRandom rng_;
  vforward::ForwardCloudState state_;
  std::map<Block32, CachedAnswer> history_;
};

Bytes encode_history(const std::map<Block32, CachedAnswer>& h);
std::map<Block32, CachedAnswer> decode_history(ByteView data);

// ---------------------------------------------------------------------------
// Sessions

struct ScriptOp {
  enum class Kind { kSearch, kAdd, kDel };
  Kind kind = Kind::kSearch;
  std::vector<Keyword> keywords;  // one keyword for a search
  DocId id;                       // add / del only

  static ScriptOp search(Keyword w) { return {Kind::kSearch, {std::move(w)}, {}}; }
  static ScriptOp add(DocId id, std::vector<Keyword> kws) {
    return {Kind::kAdd, std::move(kws), id};
  }
  static ScriptOp del(DocId id, std::vector<Keyword> kws) {
    return {Kind::kDel, std::move(kws), id};
  }
};

using Script = std::vector<ScriptOp>;

struct MessageRecord {
  MessageKind kind{};
  Party from{};
  Party to{};
  std::uint64_t session = 0;
  std::size_t payload_size = 0;
  std::string payload_sha256;
};

struct SearchRecord {
  std::uint64_t session = 0;
  std::string keyword;
  Reason reason = Reason::kAccept;
  std::vector<DocId> ids;       // owner's final result (empty on reject)
  std::vector<DocId> expected;  // plaintext model
  bool tampered = false;        // the cloud deviated on this search
  std::size_t auditor_bytes = 0;

  bool accepted() const { return reason == Reason::kAccept; }
  bool forged() const { return accepted() && ids != expected; }
};

struct Transcript {
  Strategy strategy = Strategy::kHonest;
  std::vector<MessageRecord> messages;
  std::vector<SearchRecord> searches;
  std::vector<LeakageRecord> leakage;
};

struct SessionOptions {
  Transport transport = Transport::kInProcess;
};

// Throws InputError for ill-formed scripts (deleting a pair that is not
// live, re-adding a live pair) and ProtocolError on out-of-order messages.
Transcript run_session(const PlainDb& db, const Script& script,
                       const AdversaryStrategy& strategy, RandomSource& rng,
                       const SessionOptions& options = {});

std::string transcript_to_jsonl(const Transcript& t);
Transcript transcript_from_jsonl(const std::string& text);

struct LeakageAuditResult {
  bool pass = true;
  std::string field;  // offending field on failure
  std::string detail;
  std::uint64_t candidates_checked = 0;
  std::uint64_t forward_privacy_matches = 0;
};

LeakageAuditResult leakage_audit(const Transcript& t);

// ---------------------------------------------------------------------------
// Soundness game

struct StrategyTally {
  std::uint64_t sessions = 0;
  std::uint64_t vacuous_sessions = 0;  // no search was actually tampered
  std::uint64_t searches = 0;
  std::uint64_t tampered_searches = 0;
  std::uint64_t accepted = 0;
  std::uint64_t accepted_forgeries = 0;
  std::map<std::string, std::uint64_t> reasons;
};

struct SoundnessReport {
  std::map<Strategy, StrategyTally> tallies;

  std::uint64_t total_forgeries() const;
  std::string to_text() const;
};

// A randomized session for one trial: a db with two equal-size keywords and
// a script that searches, adds and deletes so every strategy gets a chance.
struct TrialPlan {
  PlainDb db;
  Script script;
};

TrialPlan make_trial(RandomSource& rng);

SoundnessReport soundness_suite(std::uint64_t trials, RandomSource& rng,
                                const SessionOptions& options = {});

}  // namespace vsse::sim
