#include <doctest.h>

#include "support/oracle.hpp"
#include "support/scripts.hpp"
#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

using namespace vsse;
using namespace vsse::sim;

namespace {

std::size_t tampered_count(const Transcript& t) {
  std::size_t n = 0;
  for (const auto& s : t.searches) n += s.tampered;
  return n;
}

LeakageRecord* first_record(Transcript& t, const std::string& op) {
  for (auto& r : t.leakage) {
    if (r.op == op) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("honest sessions over 1000 scripted operations all accept") {
  SeededRandom rng(101);
  PlainDb db = oracle::to_db(oracle::random_pairs(rng, 20, 150));
  Script script = scripts::random_script(rng, db, 1000, 25);
  Transcript t = run_session(db, script, {}, rng);

  CHECK(t.searches.size() > 300);
  for (const auto& s : t.searches) {
    INFO("session " << s.session << " keyword " << s.keyword);
    REQUIRE(s.accepted());
    REQUIRE(s.ids == s.expected);
    REQUIRE_FALSE(s.tampered);
  }
  LeakageAuditResult audit = leakage_audit(t);
  CHECK_MESSAGE(audit.pass, audit.field << ": " << audit.detail);
  CHECK(audit.candidates_checked > 0);
}

TEST_CASE("every search is answered by one result, one proof pair and one verdict") {
  SeededRandom rng(7);
  TrialPlan plan = make_trial(rng);
  Transcript t = run_session(plan.db, plan.script, {}, rng);
  std::map<std::uint64_t, std::map<MessageKind, int>> per_session;
  for (const auto& m : t.messages) ++per_session[m.session][m.kind];
  for (const auto& s : t.searches) {
    auto& k = per_session[s.session];
    CHECK(k[MessageKind::kSearchRequest] == 1);
    CHECK(k[MessageKind::kSearchResult] == 1);
    CHECK(k[MessageKind::kProofCloud] == 1);
    CHECK(k[MessageKind::kProofOwner] == 1);
    CHECK(k[MessageKind::kVerdict] == 1);
  }
  CHECK(per_session[0][MessageKind::kBuildUpload] == 1);
}

TEST_CASE("auditor receives a fixed number of bytes per search") {
  SeededRandom rng(8);
  PlainDb db;
  for (int n : {0, 1, 10, 60}) {
    for (int i = 0; i < n; ++i) {
      db.add(Keyword("size" + std::to_string(n)), DocId::from_u64(1000 * n + i));
    }
  }
  Script script;
  for (int n : {0, 1, 10, 60}) {
    script.push_back(ScriptOp::search(Keyword("size" + std::to_string(n))));
  }
  Transcript t = run_session(db, script, {}, rng);
  for (const auto& s : t.searches) {
    CHECK(s.accepted());
    CHECK(s.auditor_bytes == ProofCloudPayload::kSize + ProofOwnerPayload::kSize);
  }
  for (const auto& m : t.messages) {
    if (m.kind == MessageKind::kProofCloud) CHECK(m.payload_size == 96);
    if (m.kind == MessageKind::kProofOwner) CHECK(m.payload_size == 66);
  }
}

TEST_CASE("DROP_ONE on a keyword with results is rejected") {
  SeededRandom rng(9);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2)});
  Transcript t = run_session(db, {ScriptOp::search(Keyword("a"))},
                             {Strategy::kDropOne, 5, Structure::kAdd}, rng);
  REQUIRE(t.searches.size() == 1);
  CHECK(t.searches[0].tampered);
  CHECK(t.searches[0].reason == Reason::kCountMismatch);
  CHECK(t.searches[0].ids.empty());
}

TEST_CASE("FLIP_ID_BIT is rejected by the pairing check") {
  SeededRandom rng(10);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2), DocId::from_u64(3)});
  Transcript t = run_session(db, {ScriptOp::search(Keyword("a"))},
                             {Strategy::kFlipIdBit, 6, Structure::kAdd}, rng);
  CHECK(t.searches[0].tampered);
  CHECK(t.searches[0].reason == Reason::kPairingFail);
}

TEST_CASE("FORGE_PROOF fabricates a hit even for an empty result") {
  SeededRandom rng(11);
  PlainDb db;
  db.add(Keyword("a"), DocId::from_u64(1));
  Transcript t = run_session(db, {ScriptOp::search(Keyword("none")),
                                  ScriptOp::search(Keyword("a"))},
                             {Strategy::kForgeProof, 1, Structure::kAdd}, rng);
  CHECK(t.searches[0].tampered);
  CHECK(t.searches[0].reason == Reason::kCountMismatch);
  CHECK(t.searches[1].tampered);
  CHECK(t.searches[1].reason == Reason::kPairingFail);
}

TEST_CASE("REPLAY_OTHER_KEYWORD with a same-size answer fails the pairing check") {
  SeededRandom rng(12);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2)});
  db.add_all(Keyword("b"), {DocId::from_u64(3), DocId::from_u64(4)});
  Transcript t = run_session(db, {ScriptOp::search(Keyword("a")),
                                  ScriptOp::search(Keyword("b"))},
                             {Strategy::kReplayOtherKeyword, 2, Structure::kAdd}, rng);
  // The first search has nothing cached to replay.
  CHECK_FALSE(t.searches[0].tampered);
  CHECK(t.searches[0].accepted());
  CHECK(t.searches[1].tampered);
  CHECK(t.searches[1].reason == Reason::kPairingFail);
}

TEST_CASE("STALE_IGNORE_UPDATE is caught by the owner's counter") {
  SeededRandom rng(13);
  PlainDb db;
  db.add(Keyword("a"), DocId::from_u64(1));
  Script script = {ScriptOp::search(Keyword("a")),
                   ScriptOp::add(DocId::from_u64(2), {Keyword("a")}),
                   ScriptOp::search(Keyword("a")),
                   ScriptOp::add(DocId::from_u64(3), {Keyword("fresh")}),
                   ScriptOp::search(Keyword("fresh"))};
  Transcript t = run_session(db, script, {Strategy::kStaleIgnoreUpdate, 3, Structure::kAdd},
                             rng);
  CHECK(t.searches[0].accepted());
  CHECK(t.searches[1].tampered);
  CHECK(t.searches[1].reason == Reason::kCountMismatch);
  CHECK(t.searches[2].tampered);
  CHECK(t.searches[2].reason == Reason::kCountMismatch);
}

TEST_CASE("tampered deletion twin rejects the whole search") {
  SeededRandom rng(14);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2)});
  Script script = {ScriptOp::del(DocId::from_u64(1), {Keyword("a")}),
                   ScriptOp::search(Keyword("a"))};
  Transcript honest = run_session(db, script, {}, rng);
  CHECK(honest.searches[0].accepted());
  CHECK(honest.searches[0].ids == std::vector<DocId>{DocId::from_u64(2)});
  for (Strategy s : {Strategy::kDropOne, Strategy::kFlipIdBit, Strategy::kForgeProof}) {
    Transcript t = run_session(db, script, {s, 4, Structure::kDel}, rng);
    INFO(to_string(s));
    CHECK(t.searches[0].tampered);
    CHECK_FALSE(t.searches[0].accepted());
    CHECK(t.searches[0].ids.empty());
  }
}

TEST_CASE("strategies are deterministic given their seed") {
  for (Strategy s : tampering_strategies()) {
    SeededRandom r1(77), r2(77);
    TrialPlan p1 = make_trial(r1), p2 = make_trial(r2);
    Transcript a = run_session(p1.db, p1.script, {s, 99, Structure::kAdd}, r1);
    Transcript b = run_session(p2.db, p2.script, {s, 99, Structure::kAdd}, r2);
    CHECK(transcript_to_jsonl(a) == transcript_to_jsonl(b));
  }
}

TEST_CASE("strategy names round trip") {
  CHECK(strategy_from_string("HONEST") == Strategy::kHonest);
  for (Strategy s : tampering_strategies()) CHECK(strategy_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(strategy_from_string("drop_one"), InputError);
}

TEST_CASE("soundness suite: no forgeries, honest control accepts everything") {
  SeededRandom rng(15);
  SoundnessReport r = soundness_suite(8, rng);
  CHECK(r.total_forgeries() == 0);
  const StrategyTally& h = r.tallies.at(Strategy::kHonest);
  CHECK(h.accepted == h.searches);
  CHECK(h.tampered_searches == 0);
  for (Strategy s : tampering_strategies()) {
    const StrategyTally& t = r.tallies.at(s);
    INFO(to_string(s));
    CHECK(t.sessions == 8);
    CHECK(t.vacuous_sessions == 0);
    CHECK(t.tampered_searches > 0);
    CHECK(t.accepted_forgeries == 0);
  }
  CHECK(r.to_text().find("count-mismatch=") != std::string::npos);
  CHECK(r.to_text().find("pairing-fail=") != std::string::npos);
  CHECK_THROWS_AS(soundness_suite(0, rng), InputError);
}

TEST_CASE("socket transport produces the same transcript as the in-process channel") {
  SeededRandom r1(16), r2(16);
  TrialPlan p1 = make_trial(r1), p2 = make_trial(r2);
  Transcript a = run_session(p1.db, p1.script, {}, r1);
  Transcript b = run_session(p2.db, p2.script, {}, r2, {Transport::kLocalhostSocket});
  CHECK(transcript_to_jsonl(a) == transcript_to_jsonl(b));
  for (const auto& s : b.searches) CHECK(s.accepted());
}

TEST_CASE("ill-formed scripts are refused before anything runs") {
  SeededRandom rng(17);
  PlainDb db;
  db.add(Keyword("a"), DocId::from_u64(1));
  CHECK_THROWS_AS(run_session(db, {ScriptOp::del(DocId::from_u64(2), {Keyword("a")})}, {}, rng),
                  InputError);
  CHECK_THROWS_AS(run_session(db, {ScriptOp::add(DocId::from_u64(1), {Keyword("a")})}, {}, rng),
                  InputError);
  CHECK_THROWS_AS(run_session(db,
                              {ScriptOp::del(DocId::from_u64(1), {Keyword("a")}),
                               ScriptOp::del(DocId::from_u64(1), {Keyword("a")})},
                              {}, rng),
                  InputError);
  CHECK_THROWS_AS(run_session(db, {ScriptOp::add(DocId::from_u64(5), {})}, {}, rng), InputError);
}

TEST_CASE("wire messages reject malformed frames") {
  WireMessage m{MessageKind::kVerdict, Party::kAuditor, Party::kOwner, 3, {0, 0}};
  WireMessage back = WireMessage::decode(m.encode());
  CHECK(back.kind == m.kind);
  CHECK(back.session == 3);
  CHECK(back.payload == m.payload);
  Bytes bad = m.encode();
  bad[0] = 9;
  CHECK_THROWS_AS(WireMessage::decode(bad), DecodeError);
  CHECK_THROWS_AS(WireMessage::decode(ByteView(m.encode()).first(5)), DecodeError);
  CHECK_THROWS_AS(VerdictPayload::decode(Bytes{0, 9}), DecodeError);
  CHECK_THROWS_AS(ProofCloudPayload::decode(Bytes(95, 0)), DecodeError);
}

TEST_CASE("transcripts round trip through JSONL") {
  SeededRandom rng(18);
  TrialPlan plan = make_trial(rng);
  Transcript t = run_session(plan.db, plan.script, {Strategy::kForgeProof, 1, Structure::kAdd},
                             rng);
  const std::string text = transcript_to_jsonl(t);
  Transcript back = transcript_from_jsonl(text);
  CHECK(back.strategy == Strategy::kForgeProof);
  CHECK(back.messages.size() == t.messages.size());
  CHECK(back.searches.size() == t.searches.size());
  CHECK(tampered_count(back) == tampered_count(t));
  CHECK(transcript_to_jsonl(back) == text);
  CHECK_THROWS_AS(transcript_from_jsonl("{\"type\":\"search\"}\n"), DecodeError);
  CHECK_THROWS_AS(transcript_from_jsonl("not json\n"), DecodeError);
}

TEST_CASE("leakage audit flags values outside the leakage schema") {
  SeededRandom rng(19);
  PlainDb db;
  db.add(Keyword("secret"), DocId::from_u64(1));
  Script script = {ScriptOp::search(Keyword("secret")),
                   ScriptOp::add(DocId::from_u64(2), {Keyword("secret")})};
  Transcript t = run_session(db, script, {}, rng);
  REQUIRE(leakage_audit(t).pass);

  SUBCASE("raw keyword as an extra update field") {
    first_record(t, "update")->fields.push_back({"keyword", "L_updt.id", {"secret"}});
    LeakageAuditResult r = leakage_audit(t);
    CHECK_FALSE(r.pass);
    CHECK(r.field == "keyword");
  }
  SUBCASE("raw keyword in place of the document name") {
    first_record(t, "update")->fields[0].values = {"secret"};
    LeakageAuditResult r = leakage_audit(t);
    CHECK_FALSE(r.pass);
    CHECK(r.field == "doc_name");
  }
  SUBCASE("field typed with the wrong leakage term") {
    first_record(t, "search")->fields[0].term = "L_updt.id";
    CHECK(leakage_audit(t).field == "add.chain_head");
  }
  SUBCASE("unknown operation") {
    t.leakage.push_back({"rekey", 9, {}});
    CHECK(leakage_audit(t).field == "rekey");
  }
}

TEST_CASE("forward-privacy check: fresh ids pass, a revealed id re-used is detected") {
  SeededRandom rng(20);
  PlainDb db;
  db.add_all(Keyword("w"), {DocId::from_u64(1), DocId::from_u64(2)});
  db.add(Keyword("v"), DocId::from_u64(3));

  Script fresh = {ScriptOp::search(Keyword("w")), ScriptOp::search(Keyword("v")),
                  ScriptOp::add(DocId::from_u64(10), {Keyword("w")}),
                  ScriptOp::add(DocId::from_u64(11), {Keyword("w"), Keyword("v")})};
  LeakageAuditResult ok = leakage_audit(run_session(db, fresh, {}, rng));
  CHECK(ok.pass);
  CHECK(ok.forward_privacy_matches == 0);
  CHECK(ok.candidates_checked >= 3 * 2);

  // Id 3 was revealed by the search for v; attaching it to the searched
  // keyword w makes the new position computable as F(tag_w, 3 || 3).
  Script reuse = {ScriptOp::search(Keyword("w")), ScriptOp::search(Keyword("v")),
                  ScriptOp::add(DocId::from_u64(3), {Keyword("w")})};
  LeakageAuditResult bad = leakage_audit(run_session(db, reuse, {}, rng));
  CHECK_FALSE(bad.pass);
  CHECK(bad.field == "positions");
  CHECK(bad.forward_privacy_matches == 1);
}

TEST_CASE("stale rollback answers as before the newest pair and is rejected") {
  SeededRandom rng(21);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2)});
  vforward::ForwardVKeys keys = vforward::vf_keygen(rng);
  vforward::ForwardBuild b = vforward::vf_build(keys, db, rng);
  AdversarialCloud cloud({Strategy::kStaleIgnoreUpdate, 1, Structure::kAdd, true}, b.cloud);
  SearchRequestPayload req{
      vforward::vf_search_token(keys, Keyword("a"), b.owner, Structure::kAdd),
      vforward::vf_search_token(keys, Keyword("a"), b.owner, Structure::kDel)};
  AdversarialCloud::Response r = cloud.search(req, 1);
  CHECK(r.tampered);
  REQUIRE(r.result.add.hits.size() == 1);
  CHECK(r.result.add.hits[0].id == DocId::from_u64(1));
  vforward::OwnerProof op = vforward::vf_owner_proof(keys, Keyword("a"), Structure::kAdd,
                                                     r.result.add.hits, 2);
  CHECK(op.status == Reason::kCountMismatch);
}

TEST_CASE("cloud answer history round trips") {
  SeededRandom rng(22);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2)});
  vforward::ForwardVKeys keys = vforward::vf_keygen(rng);
  vforward::ForwardBuild b = vforward::vf_build(keys, db, rng);
  AdversarialCloud cloud({}, b.cloud);
  cloud.search({vforward::vf_search_token(keys, Keyword("a"), b.owner, Structure::kAdd),
                vforward::vf_search_token(keys, Keyword("a"), b.owner, Structure::kDel)},
               1);
  REQUIRE(cloud.history().size() == 2);
  Bytes enc = encode_history(cloud.history());
  auto back = decode_history(enc);
  CHECK(encode_history(back) == enc);
  CHECK(back.begin()->second.signatures.size() == back.begin()->second.result.hits.size());
  enc.pop_back();
  CHECK_THROWS_AS(decode_history(enc), DecodeError);
}
