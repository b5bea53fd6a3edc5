#include <doctest.h>

#include <set>

#include "support/oracle.hpp"
#include "vsse/counters.hpp"
#include "vsse/errors.hpp"
#include "vsse/forward_vsse.hpp"

using namespace vsse;
using namespace vsse::vforward;

namespace {

std::vector<DocId> ids_of(const std::vector<IndexedId>& hits) {
  std::vector<DocId> out;
  for (const auto& h : hits) out.push_back(h.id);
  return out;
}

CloudAnswer honest_answer(const ForwardVKeys& keys, const ForwardBuild& b, const Keyword& w,
                          Structure s = Structure::kAdd) {
  return vf_cloud_search(b.cloud.index_of(s), b.cloud.tsig_of(s),
                         vf_search_token(keys, w, b.owner, s));
}

// Brute-force m = sum r_i * id_i with integers, independent of the field
// arithmetic order used by vf_owner_proof: computed via repeated addition of
// per-pair messages recomputed from raw PRF output.
Scalar brute_force_m(const ForwardVKeys& keys, const Keyword& w, const std::vector<DocId>& ids) {
  Block32 seed = crypto::hmac_sha256(keys.seed_master.bytes, w.view());
  Scalar m;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const std::uint64_t i = k + 1;
    Block32 a = crypto::hmac_sha256(seed, concat(as_bytes("r"), be64(i), ByteArray<1>{0}));
    Block32 b = crypto::hmac_sha256(seed, concat(as_bytes("r"), be64(i), ByteArray<1>{1}));
    m = m + Scalar::reduce(concat(a, b)) * Scalar::reduce(ids[k].bytes);
  }
  return m;
}

}  // namespace

TEST_CASE("vf_keygen") {
  SeededRandom rng(1);
  ForwardVKeys k = vf_keygen(rng);
  CHECK(k.bls.pk == G2Element::generator().pow(k.bls.sk));
  CHECK_FALSE(k.tag_master == k.seed_master);
  CHECK(keyword_tag(k, Keyword("w"), Structure::kAdd) ==
        keyword_tag(k, Keyword("w"), Structure::kAdd));
  CHECK(keyword_tag(k, Keyword("w"), Structure::kAdd) ==
        crypto::hmac_sha256(k.tag_master.bytes, as_bytes("w")));
  CHECK(keyword_tag(k, Keyword("w"), Structure::kAdd) !=
        keyword_tag(k, Keyword("v"), Structure::kAdd));
  CHECK(keyword_tag(k, Keyword("w"), Structure::kAdd) !=
        keyword_tag(k, Keyword("w"), Structure::kDel));
}

TEST_CASE("twin derivations cannot be aliased by crafted keywords") {
  SeededRandom rng(2);
  ForwardVKeys k = vf_keygen(rng);
  CHECK(keyword_tag(k, Keyword("delx"), Structure::kAdd) !=
        keyword_tag(k, Keyword("x"), Structure::kDel));
  CHECK_FALSE(keyword_seed(k, Keyword("delx"), Structure::kAdd) ==
              keyword_seed(k, Keyword("x"), Structure::kDel));
}

TEST_CASE("vf_build: T_sig size and per-pair signatures") {
  SeededRandom rng(3);
  ForwardVKeys keys = vf_keygen(rng);
  CHECK(vf_build(keys, PlainDb{}, rng).cloud.tsig.size() == 0);

  oracle::Pairs pairs = oracle::random_pairs(rng, 6, 30);
  PlainDb db = oracle::to_db(pairs);
  ForwardBuild b = vf_build(keys, db, rng);
  CHECK(b.cloud.tsig.size() == pairs.size());
  CHECK(b.cloud.index.size() == pairs.size());
  // Replay the derivation owner-side: each stored sigma verifies against m_i.
  for (const auto& [w, ids] : db) {
    Block32 tag = keyword_tag(keys, w, Structure::kAdd);
    SymKey seed = keyword_seed(keys, w, Structure::kAdd);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const G1Element* sigma = b.cloud.tsig.find(position(tag, ids[k], k + 1));
      REQUIRE(sigma != nullptr);
      CHECK(crypto::bls_verify(keys.bls.pk, pair_message(seed, ids[k], k + 1), *sigma));
    }
  }
}

TEST_CASE("vf_search_token: unknown keyword and determinism") {
  SeededRandom rng(4);
  ForwardVKeys keys = vf_keygen(rng);
  ForwardBuild b = vf_build(keys, PlainDb{}, rng);
  ForwardSearchToken t = vf_search_token(keys, Keyword("none"), b.owner, Structure::kAdd);
  CHECK(t.chain.count == 0);
  CHECK(t.tag == keyword_tag(keys, Keyword("none"), Structure::kAdd));
  CHECK(t == vf_search_token(keys, Keyword("none"), b.owner, Structure::kAdd));
}

TEST_CASE("vf_cloud_search: empty, singleton, and 20-id end-to-end") {
  SeededRandom rng(5);
  ForwardVKeys keys = vf_keygen(rng);
  PlainDb db;
  db.add(Keyword("one"), DocId::from_u64(7));
  for (int i = 0; i < 20; ++i) db.add(Keyword("twenty"), oracle::random_id(rng));
  ForwardBuild b = vf_build(keys, db, rng);

  CloudAnswer empty = honest_answer(keys, b, Keyword("none"));
  CHECK(empty.result.empty());
  CHECK(empty.pf_c.is_identity());

  CloudAnswer single = honest_answer(keys, b, Keyword("one"));
  Block32 pos = position(keyword_tag(keys, Keyword("one"), Structure::kAdd), DocId::from_u64(7), 1);
  CHECK(single.pf_c == *b.cloud.tsig.find(pos));

  SearchOutcome o = vf_search(keys, b.owner, b.cloud, Keyword("twenty"), Structure::kAdd);
  CHECK(o.accepted());
  CHECK(ids_of(o.result) == db.postings(Keyword("twenty")));
}

TEST_CASE("vf_cloud_search: missing signature is proof-unavailable") {
  SeededRandom rng(6);
  ForwardVKeys keys = vf_keygen(rng);
  PlainDb db;
  db.add(Keyword("w"), DocId::from_u64(1));
  ForwardBuild b = vf_build(keys, db, rng);
  ForwardCloudState lossy = b.cloud;
  lossy.tsig = SignatureTable{};
  CHECK_THROWS_AS(vf_cloud_search(lossy.index, lossy.tsig,
                                  vf_search_token(keys, Keyword("w"), b.owner, Structure::kAdd)),
                  ProofUnavailableError);
  CHECK(vf_search(keys, b.owner, lossy, Keyword("w"), Structure::kAdd).reason ==
        Reason::kProofUnavailable);
}

TEST_CASE("vf_owner_proof: empty, count mismatch, brute-force aggregate") {
  SeededRandom rng(7);
  ForwardVKeys keys = vf_keygen(rng);
  OwnerProof empty = vf_owner_proof(keys, Keyword("w"), Structure::kAdd, {}, 0);
  CHECK(empty.ok());
  CHECK(empty.pf_o.is_zero());

  std::vector<IndexedId> two = {{DocId::from_u64(1), 1}, {DocId::from_u64(2), 2}};
  CHECK(vf_owner_proof(keys, Keyword("w"), Structure::kAdd, two, 3).status ==
        Reason::kCountMismatch);
  std::vector<IndexedId> gap = {{DocId::from_u64(1), 1}, {DocId::from_u64(2), 3}};
  CHECK(vf_owner_proof(keys, Keyword("w"), Structure::kAdd, gap, 2).status ==
        Reason::kMalformedResult);

  std::vector<DocId> ids;
  std::vector<IndexedId> hits;
  for (int i = 0; i < 10; ++i) {
    ids.push_back(oracle::random_id(rng));
    hits.push_back({ids.back(), static_cast<std::uint64_t>(i + 1)});
  }
  OwnerProof p = vf_owner_proof(keys, Keyword("w"), Structure::kAdd, hits, 10);
  REQUIRE(p.ok());
  CHECK(p.pf_o == brute_force_m(keys, Keyword("w"), ids));
}

TEST_CASE("vf_audit: honest, perturbed, empty, malformed") {
  SeededRandom rng(8);
  ForwardVKeys keys = vf_keygen(rng);
  PlainDb db;
  for (int i = 0; i < 5; ++i) db.add(Keyword("w"), oracle::random_id(rng));
  ForwardBuild b = vf_build(keys, db, rng);
  SearchOutcome o = vf_search(keys, b.owner, b.cloud, Keyword("w"), Structure::kAdd);
  REQUIRE(o.proof.has_value());
  CHECK(vf_audit(keys.bls.pk, o.proof->pf_o, o.proof->pf_c));
  for (int t = 0; t < 5; ++t) {
    G1Element noise = G1Element::random(rng);
    CHECK_FALSE(vf_audit(keys.bls.pk, o.proof->pf_o, o.proof->pf_c * noise));
  }
  CHECK(vf_audit(keys.bls.pk, Scalar(), G1Element::identity()));

  auto enc = o.proof->encode();
  CHECK(vf_audit_encoded(keys.bls.pk.to_bytes(), enc));
  enc[10] ^= 0x40;
  CHECK_FALSE(vf_audit_encoded(keys.bls.pk.to_bytes(), enc));
  CHECK_FALSE(vf_audit_encoded(keys.bls.pk.to_bytes(), Bytes(3)));
}

TEST_CASE("vf_update_token / vf_apply_update") {
  SeededRandom rng(9);
  ForwardVKeys keys = vf_keygen(rng);
  ForwardBuild b = vf_build(keys, PlainDb{}, rng);

  DocId id = DocId::from_u64(77);
  FwdUpdateToken one = vf_update_token(keys, id, {Keyword("a")}, Structure::kAdd, b.owner, rng);
  CHECK(one.sig_inserts.size() == 1);
  CHECK(one.doc_name == crypto::doc_name(id));
  vf_apply_update(b.cloud, one);
  CHECK(b.cloud.index.size() == 1);
  CHECK(b.cloud.tsig.size() == 1);

  std::vector<Keyword> five;
  for (int i = 0; i < 5; ++i) five.emplace_back("k" + std::to_string(i));
  DocId id2 = DocId::from_u64(78);
  FwdUpdateToken t5 = vf_update_token(keys, id2, five, Structure::kAdd, b.owner, rng);
  CHECK(t5.chain.size() == 5);
  CHECK(t5.sig_inserts.size() == 5);
  for (const Keyword& w : five) CHECK(b.owner.state(w, Structure::kAdd).counter == 1);
  vf_apply_update(b.cloud, t5);
  CHECK(b.cloud.tsig.size() == 6);

  // Round trip through the wire encoding.
  FwdUpdateToken decoded = FwdUpdateToken::decode(t5.encode());
  CHECK(decoded.chain == t5.chain);
  CHECK(decoded.sig_inserts == t5.sig_inserts);

  SearchOutcome o = vf_search(keys, b.owner, b.cloud, Keyword("k3"), Structure::kAdd);
  CHECK(o.accepted());
  CHECK(ids_of(o.result) == std::vector<DocId>{id2});

  // Re-applying is a collision and leaves the cloud untouched.
  ForwardCloudState before = b.cloud;
  CHECK_THROWS_AS(vf_apply_update(b.cloud, t5), CollisionError);
  CHECK(b.cloud == before);

  CHECK_THROWS_AS(vf_update_token(keys, id, {}, Structure::kAdd, b.owner, rng), InputError);
  CHECK_THROWS_AS(vf_update_token(keys, id, {Keyword("x"), Keyword("x")}, Structure::kAdd,
                                  b.owner, rng),
                  InputError);
}

TEST_CASE("stale cloud that skipped an update is caught by the count") {
  SeededRandom rng(10);
  ForwardVKeys keys = vf_keygen(rng);
  PlainDb db;
  db.add(Keyword("w"), DocId::from_u64(1));
  ForwardBuild b = vf_build(keys, db, rng);
  ForwardCloudState stale = b.cloud;
  FwdUpdateToken t = vf_update_token(keys, DocId::from_u64(2), {Keyword("w")},
                                     Structure::kAdd, b.owner, rng);
  vf_apply_update(b.cloud, t);
  CHECK(vf_search(keys, b.owner, b.cloud, Keyword("w"), Structure::kAdd).accepted());
  // The stale index cannot be walked from the new head at all...
  CHECK(vf_search(keys, b.owner, stale, Keyword("w"), Structure::kAdd).reason ==
        Reason::kIncompleteIndex);
  // ...and replaying the pre-update answer is one identifier short.
  ForwardBuild fresh = vf_build(keys, db, rng);
  CloudAnswer previous = honest_answer(keys, fresh, Keyword("w"));
  CHECK(vf_verify_answer(keys, Keyword("w"), Structure::kAdd, b.owner, previous).reason ==
        Reason::kCountMismatch);
}

TEST_CASE("deletions: set difference and twin tampering") {
  SeededRandom rng(11);
  ForwardVKeys keys = vf_keygen(rng);
  ForwardBuild b = vf_build(keys, PlainDb{}, rng);
  Keyword w("w");
  DocId A = DocId::from_u64(1), B = DocId::from_u64(2), C = DocId::from_u64(3);
  for (const DocId& id : {A, B, C}) {
    vf_apply_update(b.cloud, vf_update_token(keys, id, {w}, Structure::kAdd, b.owner, rng));
  }
  DeletionAwareOutcome none = vf_search_with_deletions(keys, b.owner, b.cloud, w);
  CHECK(none.accepted());
  CHECK(none.ids == std::vector<DocId>{A, B, C});

  vf_apply_update(b.cloud, vf_update_token(keys, B, {w}, Structure::kDel, b.owner, rng));
  CHECK(b.cloud.del_tsig.size() == 1);
  CHECK(b.cloud.tsig.size() == 3);
  DeletionAwareOutcome out = vf_search_with_deletions(keys, b.owner, b.cloud, w);
  CHECK(out.accepted());
  CHECK(out.ids == std::vector<DocId>{A, C});

  // Tampered del-structure proof with an honest add structure.
  CloudAnswer del = honest_answer(keys, b, w, Structure::kDel);
  del.pf_c *= G1Element::generator();
  CHECK(vf_verify_answer(keys, w, Structure::kDel, b.owner, del).reason == Reason::kPairingFail);
  ForwardCloudState broken = b.cloud;
  broken.del_tsig = SignatureTable{};
  DeletionAwareOutcome bad = vf_search_with_deletions(keys, b.owner, broken, w);
  CHECK_FALSE(bad.accepted());
  CHECK(bad.add.accepted());
  CHECK(bad.ids.empty());
}

TEST_CASE("property: aggregate correctness over random databases") {
  SeededRandom rng(12);
  for (int t = 0; t < 15; ++t) {
    oracle::Pairs pairs = oracle::random_pairs(rng, 20, 120);
    auto expected = oracle::invert(pairs);
    ForwardVKeys keys = vf_keygen(rng);
    ForwardBuild b = vf_build(keys, oracle::to_db(pairs), rng);
    for (const auto& [w, ids] : expected) {
      SearchOutcome o = vf_search(keys, b.owner, b.cloud, Keyword(w), Structure::kAdd);
      REQUIRE(o.accepted());
      REQUIRE(ids_of(o.result) == ids);
      REQUIRE(crypto::pairing(o.proof->pf_c, G2Element::generator()) ==
              crypto::pairing(G1Element::generator().pow(o.proof->pf_o), keys.bls.pk));
    }
  }
}

TEST_CASE("property: soundness case analysis on toy instances") {
  SeededRandom rng(13);
  for (int trial = 0; trial < 4; ++trial) {
    ForwardVKeys keys = vf_keygen(rng);
    std::vector<DocId> docs;
    for (int i = 0; i < 8; ++i) docs.push_back(oracle::random_id(rng));
    // Four keywords; two share a result size so case 2 is same-size.
    PlainDb db;
    db.add_all(Keyword("a"), {docs[0], docs[1], docs[2]});
    db.add_all(Keyword("b"), {docs[3], docs[4], docs[5]});
    db.add_all(Keyword("c"), {docs[6]});
    db.add_all(Keyword("d"), {docs[0], docs[7]});
    ForwardBuild b = vf_build(keys, db, rng);

    for (const auto& [w, ids] : db) {
      CloudAnswer honest = honest_answer(keys, b, w);
      REQUIRE(vf_verify_answer(keys, w, Structure::kAdd, b.owner, honest).accepted());

      // Case 1: wrong size, with a pf_c consistent with what is returned.
      CloudAnswer shorter = honest;
      shorter.result.pop_back();
      CHECK(vf_verify_answer(keys, w, Structure::kAdd, b.owner, shorter).reason ==
            Reason::kCountMismatch);
      CloudAnswer longer = honest;
      longer.result.push_back({docs[7], honest.result.size() + 1});
      CHECK(vf_verify_answer(keys, w, Structure::kAdd, b.owner, longer).reason ==
            Reason::kCountMismatch);

      // Case 2: another keyword's answer and proof.
      for (const auto& [w2, ids2] : db) {
        if (w2 == w) continue;
        CloudAnswer other = honest_answer(keys, b, w2);
        Reason r = vf_verify_answer(keys, w, Structure::kAdd, b.owner, other).reason;
        CHECK(r != Reason::kAccept);
        if (ids2.size() == ids.size()) CHECK(r == Reason::kPairingFail);
      }

      // Case 3: every single-id substitution, honest pf_c.
      for (std::size_t pos = 0; pos < honest.result.size(); ++pos) {
        for (const DocId& d : docs) {
          if (d == honest.result[pos].id) continue;
          CloudAnswer sub = honest;
          sub.result[pos].id = d;
          CHECK(vf_verify_answer(keys, w, Structure::kAdd, b.owner, sub).reason ==
                Reason::kPairingFail);
        }
      }
    }
  }
}

TEST_CASE("proof size is constant and costs are as counted") {
  SeededRandom rng(14);
  ForwardVKeys keys = vf_keygen(rng);
  PlainDb db;
  for (std::size_t n : {1, 10, 100}) {
    for (std::size_t i = 0; i < n; ++i) db.add(Keyword("n" + std::to_string(n)), oracle::random_id(rng));
  }
  ForwardBuild b = vf_build(keys, db, rng);
  for (std::size_t n : {0, 1, 10, 100}) {
    Keyword w("n" + std::to_string(n));
    ForwardSearchToken tok = vf_search_token(keys, w, b.owner, Structure::kAdd);

    OpCountScope cloud_scope;
    CloudAnswer ans = vf_cloud_search(b.cloud.index, b.cloud.tsig, tok);
    OpCounts cloud = cloud_scope.delta();
    CHECK(cloud.tsig_lookups == n);
    CHECK(cloud.g1_muls == (n == 0 ? 0 : n - 1));
    CHECK(cloud.pairings == 0);

    OpCountScope owner_scope;
    OwnerProof p = vf_owner_proof(keys, w, Structure::kAdd, ans.result, n);
    OpCounts owner = owner_scope.delta();
    CHECK(owner.scalar_muls == n);
    CHECK(owner.scalar_adds == n);
    CHECK(owner.pairings == 0);

    OpCountScope audit_scope;
    CHECK(vf_audit(keys.bls.pk, p.pf_o, ans.pf_c));
    CHECK(audit_scope.delta().pairings == 2);

    CHECK(SearchProof{ans.pf_c, p.pf_o}.encode().size() == 80);
  }
}
