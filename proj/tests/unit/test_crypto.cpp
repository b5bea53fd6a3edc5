#include <doctest.h>

#include <set>
#include <unordered_set>

#include "vsse/counters.hpp"
#include "vsse/crypto.hpp"
#include "vsse/errors.hpp"

using namespace vsse;
using namespace vsse::crypto;

namespace {
#include "unit/vectors.inc"

SymKey key_0_to_31() {
  SymKey k;
  for (std::size_t i = 0; i < k.bytes.size(); ++i) k.bytes[i] = static_cast<std::uint8_t>(i);
  return k;
}

DocId id_0_to_15() {
  DocId id;
  for (std::size_t i = 0; i < id.bytes.size(); ++i) id.bytes[i] = static_cast<std::uint8_t>(i);
  return id;
}

Scalar scalar_hex(std::string_view hex) { return Scalar::from_bytes(from_hex(hex)); }
}  // namespace

TEST_CASE("frozen vectors: hash_to_scalar") {
  CHECK(hash_to_scalar({}).hex() == kH2sEmpty);
  CHECK(hash_to_scalar(as_bytes("abc")).hex() == kH2sAbc);
  CHECK(hash_to_scalar(as_bytes("abc")) == hash_to_scalar(as_bytes("abc")));

  SeededRandom rng(7);
  auto a = rng.bytes<32>();
  auto b = rng.bytes<32>();
  CHECK_FALSE(hash_to_scalar(a) == hash_to_scalar(b));
}

TEST_CASE("frozen vectors: prf and hmac") {
  CHECK(to_hex(hmac_sha256(as_bytes("Jefe"), as_bytes("what do ya want for nothing?"))) ==
        kHmacRfc4231Case2);
  SymKey k = key_0_to_31();
  CHECK(to_hex(prf(k, as_bytes("hello"))) == kPrfKey0to31Hello);
  CHECK(prf(k, as_bytes("hello")) == prf(k, as_bytes("hello")));
  SymKey flipped = k;
  flipped.bytes[0] ^= 1;
  CHECK(to_hex(prf(flipped, as_bytes("hello"))) == kPrfKeyFlippedHello);
  CHECK(to_hex(prf(k, concat(id_0_to_15().bytes, be64(3)))) == kPositionKey0to31Id0to15Idx3);
}

TEST_CASE("frozen vectors: prg_block") {
  SymKey zero;
  CHECK(prg_block(zero, 1).hex() == kPrgZeroSeed1);
  CHECK(prg_block(zero, 2).hex() == kPrgZeroSeed2);
  CHECK(prg_block(zero, 1) == prg_block(zero, 1));
  CHECK_FALSE(prg_block(zero, 1) == prg_block(zero, 2));
  CHECK_THROWS_AS(prg_block(zero, 0), DomainError);
}

TEST_CASE("frozen vectors: doc_name") {
  CHECK(to_hex(doc_name(id_0_to_15())) == kDocName0to15);
  SeededRandom rng(11);
  DocId a{rng.bytes<16>()}, b{rng.bytes<16>()};
  CHECK(doc_name(a) == doc_name(a));
  CHECK_FALSE(doc_name(a) == doc_name(b));
}

TEST_CASE("doc_name: source is found only by exhaustive matching") {
  // 2^16 random ids; the target name must match exactly one candidate, the
  // source, and no name shares a prefix byte pattern with its id.
  SeededRandom rng(12);
  std::vector<DocId> ids(1u << 16);
  for (auto& id : ids) id.bytes = rng.bytes<16>();
  const DocId& source = ids[12345];
  const Block32 target = doc_name(source);
  std::size_t matches = 0;
  std::size_t prefix_leaks = 0;
  for (const DocId& id : ids) {
    Block32 name = doc_name(id);
    if (name == target) ++matches;
    if (std::equal(id.bytes.begin(), id.bytes.begin() + 4, name.begin())) ++prefix_leaks;
  }
  CHECK(matches == 1);
  CHECK(prefix_leaks == 0);
}

TEST_CASE("frozen vectors: generators, bilinear hash and BLS") {
  CHECK(to_hex(G1Element::generator().to_bytes()) == kG1Generator);
  CHECK(to_hex(G2Element::generator().to_bytes()) == kG2Generator);
  CHECK(to_hex(bilinear_hash({}).to_bytes()) == kBilinearHashEmpty);
  CHECK(bilinear_hash({}) == G1Element::generator().pow(hash_to_scalar({})));

  Scalar sk = scalar_hex(kBlsSk);
  Scalar m = scalar_hex(kBlsMsg);
  BlsKeyPair kp = bls_keypair_from_secret(sk);
  CHECK(to_hex(kp.pk.to_bytes()) == kBlsPk);
  G1Element sig = bls_sign(sk, m);
  CHECK(to_hex(sig.to_bytes()) == kBlsSig);
  CHECK(bls_verify(kp.pk, m, sig));
  CHECK(bls_verify_encoded(from_hex(kBlsPk), m, from_hex(kBlsSig)));
}

TEST_CASE("bilinear_hash equality follows hash_to_scalar equality") {
  CHECK(bilinear_hash(as_bytes("x")) == bilinear_hash(as_bytes("x")));
  CHECK_FALSE(bilinear_hash(as_bytes("x")) == bilinear_hash(as_bytes("y")));
}

TEST_CASE("pairing basics") {
  const G1Element g1 = G1Element::generator();
  const G2Element g2 = G2Element::generator();
  GtElement e = pairing(g1, g2);
  CHECK_FALSE(e.is_identity());
  CHECK(pairing(G1Element::identity(), g2).is_identity());
  CHECK(pairing(g1, G2Element::identity()).is_identity());
}

TEST_CASE("property: bilinearity over 200 random (a, b)") {
  SeededRandom rng(21);
  const G1Element g1 = G1Element::generator();
  const G2Element g2 = G2Element::generator();
  const GtElement base = pairing(g1, g2);
  for (int t = 0; t < 200; ++t) {
    Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    REQUIRE(pairing(g1.pow(a), g2.pow(b)) == base.pow(a * b));
  }
}

TEST_CASE("bls_gen and degenerate keys") {
  SeededRandom rng(31);
  BlsKeyPair kp = bls_gen(rng);
  CHECK(kp.pk == G2Element::generator().pow(kp.sk));
  CHECK_FALSE(kp.sk.is_zero());
  CHECK_FALSE(kp.sk == Scalar::one());
  // pairing(g1, pk) == pairing(g1, g2)^sk, checked by independent GT exponentiation.
  CHECK(pairing(G1Element::generator(), kp.pk) ==
        pairing(G1Element::generator(), G2Element::generator()).pow(kp.sk));

  CHECK(bls_keypair_from_secret(Scalar()).pk.is_identity());
  CHECK(bls_keypair_from_secret(Scalar::one()).pk == G2Element::generator());

  // m = 0 signs to the identity and verifies; m = 1 signs to g1^sk.
  CHECK(bls_sign(kp.sk, Scalar()).is_identity());
  CHECK(bls_verify(kp.pk, Scalar(), G1Element::identity()));
  CHECK(bls_sign(kp.sk, Scalar::one()) == G1Element::generator().pow(kp.sk));
}

TEST_CASE("property: sign/verify round trip and message-bit perturbation") {
  SeededRandom rng(41);
  auto perturbed_rejects = [](const BlsKeyPair& kp, const Scalar& m, const G1Element& sig,
                              std::size_t bit) {
    auto enc = m.to_bytes();
    enc[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    Scalar m2;
    try {
      m2 = Scalar::from_bytes(enc);
    } catch (const DecodeError&) {
      return true;  // not a valid message encoding at all
    }
    return !bls_verify(kp.pk, m2, sig);
  };
  for (int t = 0; t < 200; ++t) {
    BlsKeyPair kp = bls_gen(rng);
    Scalar m = Scalar::random(rng);
    G1Element sig = bls_sign(kp.sk, m);
    REQUIRE(bls_verify(kp.pk, m, sig));
    REQUIRE(perturbed_rejects(kp, m, sig, rng.uniform(256)));
    REQUIRE_FALSE(bls_verify(kp.pk, m, sig * G1Element::generator()));
  }
  BlsKeyPair kp = bls_gen(rng);
  Scalar m = Scalar::random(rng);
  G1Element sig = bls_sign(kp.sk, m);
  for (std::size_t bit = 0; bit < 256; ++bit) {
    REQUIRE(perturbed_rejects(kp, m, sig, bit));
  }
}

TEST_CASE("property: aggregation identity over 200 random message sets") {
  SeededRandom rng(51);
  for (int t = 0; t < 200; ++t) {
    Scalar sk = Scalar::random(rng);
    std::size_t k = 1 + rng.uniform(8);
    G1Element product;
    Scalar sum;
    for (std::size_t i = 0; i < k; ++i) {
      Scalar m = Scalar::random(rng);
      product *= bls_sign(sk, m);
      sum += m;
    }
    REQUIRE(product == bls_sign(sk, sum));
  }
}

TEST_CASE("canonical serialization round trips") {
  SeededRandom rng(61);
  for (int t = 0; t < 20; ++t) {
    Scalar s = Scalar::random(rng);
    CHECK(Scalar::from_bytes(s.to_bytes()) == s);
    G1Element p = G1Element::random(rng);
    CHECK(G1Element::from_bytes(p.to_bytes()) == p);
    G2Element q = G2Element::generator().pow(Scalar::random(rng));
    CHECK(G2Element::from_bytes(q.to_bytes()) == q);
  }
  GtElement e = pairing(G1Element::random(rng), G2Element::generator());
  CHECK(GtElement::from_bytes(e.to_bytes()) == e);
  CHECK(GtElement::from_bytes(GtElement::identity().to_bytes()).is_identity());
  CHECK(G1Element::from_bytes(G1Element::identity().to_bytes()).is_identity());
}

TEST_CASE("decoding rejects invalid encodings") {
  // q itself is not a canonical scalar.
  const std::string q_hex = "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
  CHECK_THROWS_AS(Scalar::from_bytes(from_hex(q_hex)), DecodeError);
  CHECK_THROWS_AS(Scalar::from_bytes(Bytes(31)), DecodeError);

  auto g = G1Element::generator().to_bytes();
  g[47] ^= 1;  // almost certainly not a curve point
  bool rejected = false;
  try {
    G1Element::from_bytes(g);
  } catch (const DecodeError&) {
    rejected = true;
  }
  CHECK(rejected);
  CHECK_FALSE(bls_verify_encoded(G2Element::generator().to_bytes(), Scalar::one(), g));

  Bytes gt(GtElement::kSize, 0xff);
  CHECK_THROWS_AS(GtElement::from_bytes(gt), DecodeError);
  Bytes gt_zero(GtElement::kSize, 0);
  CHECK_THROWS_AS(GtElement::from_bytes(gt_zero), DecodeError);
}

TEST_CASE("op counters track pairings and group operations") {
  OpCountScope scope;
  G1Element a = G1Element::generator();
  G1Element b = a * a;
  (void)pairing(b, G2Element::generator());
  OpCounts d = scope.delta();
  CHECK(d.pairings == 1);
  CHECK(d.g1_muls == 1);
}
