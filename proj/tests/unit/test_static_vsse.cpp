#include <doctest.h>

#include <algorithm>

#include "support/oracle.hpp"
#include "vsse/counters.hpp"
#include "vsse/errors.hpp"
#include "vsse/static_vsse.hpp"

using namespace vsse;
using namespace vsse::vstatic;

namespace {

// Decrypted tagged posting list as the cloud would return it.
std::vector<Block32> cloud_answer(const StaticVKeys& keys, const StaticBuild& b,
                                  const Keyword& w) {
  return sse::static_search_blocks(b.index, vs_search_token(keys, b.counts, w));
}

}  // namespace

TEST_CASE("vs_keygen: fresh independent keys") {
  SeededRandom rng(1);
  StaticVKeys a = vs_keygen(rng), b = vs_keygen(rng);
  CHECK_FALSE(a.tag_master == b.tag_master);
  CHECK_FALSE(a.tag_master == a.base_key);
  CHECK(a.tag_master.bytes.size() == 32);
  CHECK(keyword_key(a, Keyword("x")) != keyword_key(a, Keyword("y")));
  CHECK(keyword_key(a, Keyword("x")) == crypto::hmac_sha256(a.tag_master.bytes, as_bytes("x")));
}

TEST_CASE("vs_build: sizes and tag placement") {
  SeededRandom rng(2);
  StaticVKeys keys = vs_keygen(rng);
  CHECK(vs_build(keys, PlainDb{}, rng).index.empty());

  PlainDb db;
  std::vector<DocId> ids = {DocId::from_u64(1), DocId::from_u64(2), DocId::from_u64(3)};
  db.add_all(Keyword("three"), ids);
  StaticBuild b = vs_build(keys, db, rng);
  CHECK(b.index.size() == 4);
  CHECK(b.counts.at(Keyword("three")) == 4);
  auto blocks = cloud_answer(keys, b, Keyword("three"));
  REQUIRE(blocks.size() == 4);
  CHECK(blocks.back() == compute_tag(keys, Keyword("three"), ids));
  // Independent tag recomputation: HMAC(HMAC(K', w), id1||id2||id3).
  Block32 kw = crypto::hmac_sha256(keys.tag_master.bytes, as_bytes("three"));
  CHECK(blocks.back() == crypto::hmac_sha256(kw, concat(ids[0].bytes, ids[1].bytes, ids[2].bytes)));
}

TEST_CASE("vs_search: honest, unknown keyword, replay, drop, incomplete index") {
  SeededRandom rng(3);
  StaticVKeys keys = vs_keygen(rng);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2)});
  db.add_all(Keyword("b"), {DocId::from_u64(3), DocId::from_u64(4)});
  StaticBuild b = vs_build(keys, db, rng);

  StaticVerdict honest = vs_search(keys, b.counts, Keyword("a"), b.index);
  CHECK(honest.accepted());
  CHECK(honest.ids == db.postings(Keyword("a")));

  StaticVerdict unknown = vs_search(keys, b.counts, Keyword("zzz"), b.index);
  CHECK(unknown.accepted());
  CHECK(unknown.ids.empty());

  auto token_a = vs_search_token(keys, b.counts, Keyword("a"));
  // Replay: the cloud answers a search for "a" with b's full tagged list.
  auto replay = vs_verify(keys, Keyword("a"), token_a, cloud_answer(keys, b, Keyword("b")));
  CHECK(replay.reason == StaticReason::kTagMismatch);

  auto dropped = cloud_answer(keys, b, Keyword("a"));
  dropped.erase(dropped.begin());
  CHECK(vs_verify(keys, Keyword("a"), token_a, dropped).reason == StaticReason::kTagMismatch);
  CHECK(vs_verify(keys, Keyword("a"), token_a, {}).reason == StaticReason::kShortResult);

  // A non-empty answer for a keyword the owner never indexed.
  auto token_z = vs_search_token(keys, b.counts, Keyword("zzz"));
  CHECK_FALSE(vs_verify(keys, Keyword("zzz"), token_z, cloud_answer(keys, b, Keyword("a"))).accepted());

  // Corrupted padding.
  auto bad = cloud_answer(keys, b, Keyword("a"));
  bad[0][31] ^= 1;
  CHECK(vs_verify(keys, Keyword("a"), token_a, bad).reason == StaticReason::kMalformedResult);

  StaticBuild truncated = vs_build(keys, db, rng);
  truncated.counts[Keyword("a")] = 5;
  CHECK(vs_search(keys, truncated.counts, Keyword("a"), truncated.index).reason ==
        StaticReason::kIncompleteIndex);
}

TEST_CASE("vs_search: exactly one tag MAC per verification") {
  SeededRandom rng(4);
  StaticVKeys keys = vs_keygen(rng);
  PlainDb db;
  for (int i = 0; i < 20; ++i) db.add(Keyword("w"), DocId::from_u64(i));
  StaticBuild b = vs_build(keys, db, rng);
  OpCountScope scope;
  CHECK(vs_search(keys, b.counts, Keyword("w"), b.index).accepted());
  CHECK(scope.delta().tag_macs == 1);
}

TEST_CASE("property: completeness over 100 random databases") {
  SeededRandom rng(5);
  for (int t = 0; t < 100; ++t) {
    oracle::Pairs pairs = oracle::random_pairs(rng, 50, 500);
    auto expected = oracle::invert(pairs);
    StaticVKeys keys = vs_keygen(rng);
    StaticBuild b = vs_build(keys, oracle::to_db(pairs), rng);
    REQUIRE(b.index.size() == pairs.size() + expected.size());
    for (const auto& [w, ids] : expected) {
      StaticVerdict v = vs_search(keys, b.counts, Keyword(w), b.index);
      REQUIRE(v.accepted());
      REQUIRE(v.ids == ids);
    }
  }
}

TEST_CASE("property: every single-id tamper of short results rejects") {
  SeededRandom rng(6);
  StaticVKeys keys = vs_keygen(rng);
  PlainDb db;
  std::vector<DocId> universe;
  for (int i = 0; i < 8; ++i) universe.push_back(oracle::random_id(rng));
  for (std::size_t len = 1; len <= 5; ++len) {
    db.add_all(Keyword("len" + std::to_string(len)),
               std::vector<DocId>(universe.begin(), universe.begin() + len));
  }
  StaticBuild b = vs_build(keys, db, rng);
  DocId outsider = oracle::random_id(rng);

  for (std::size_t len = 1; len <= 5; ++len) {
    Keyword w("len" + std::to_string(len));
    auto token = vs_search_token(keys, b.counts, w);
    const auto honest = cloud_answer(keys, b, w);
    REQUIRE(vs_verify(keys, w, token, honest).accepted());
    std::vector<Block32> ids(honest.begin(), honest.end() - 1);
    const Block32 tag = honest.back();
    auto rejects = [&](std::vector<Block32> tampered) {
      tampered.push_back(tag);
      return !vs_verify(keys, w, token, tampered).accepted();
    };
    std::vector<Block32> candidates;
    for (const DocId& id : universe) candidates.push_back(sse::pad_doc_id(id));
    candidates.push_back(sse::pad_doc_id(outsider));

    for (std::size_t pos = 0; pos < ids.size(); ++pos) {
      auto del = ids;
      del.erase(del.begin() + pos);
      CHECK(rejects(del));
      for (const Block32& c : candidates) {
        if (c == ids[pos]) continue;
        auto sub = ids;
        sub[pos] = c;
        CHECK(rejects(sub));
      }
      for (std::size_t other = pos + 1; other < ids.size(); ++other) {
        auto swapped = ids;
        std::swap(swapped[pos], swapped[other]);
        CHECK(rejects(swapped));
      }
    }
    for (std::size_t pos = 0; pos <= ids.size(); ++pos) {
      for (const Block32& c : candidates) {
        auto ins = ids;
        ins.insert(ins.begin() + pos, c);
        CHECK(rejects(ins));
      }
    }
  }
}
