#include "vsse/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "vsse/counters.hpp"
#include "vsse/errors.hpp"

namespace vsse {

OpCounts& op_counts() {
  thread_local OpCounts counts;
  return counts;
}

}  // namespace vsse

namespace vsse::crypto {

namespace {

constexpr std::size_t kScalarBits = 255;

blst_scalar to_blst_scalar(const blst_fr& fr) {
  blst_scalar s;
  blst_scalar_from_fr(&s, &fr);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar() { std::memset(&fr_, 0, sizeof(fr_)); }

Scalar Scalar::one() { return from_u64(1); }

Scalar Scalar::from_u64(std::uint64_t v) {
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  Scalar s;
  blst_fr_from_uint64(&s.fr_, limbs);
  return s;
}

Scalar Scalar::from_bytes(ByteView be) {
  if (be.size() != kSize) {
    throw DecodeError("scalar encoding must be 32 bytes");
  }
  blst_scalar raw;
  blst_scalar_from_bendian(&raw, be.data());
  if (!blst_scalar_fr_check(&raw)) {
    throw DecodeError("scalar encoding is not reduced mod q");
  }
  Scalar s;
  blst_fr_from_scalar(&s.fr_, &raw);
  return s;
}

Scalar Scalar::reduce(ByteView be) {
  blst_scalar raw;
  blst_scalar_from_be_bytes(&raw, be.data(), be.size());
  Scalar s;
  blst_fr_from_scalar(&s.fr_, &raw);
  return s;
}

Scalar Scalar::random(RandomSource& rng) {
  ByteArray<64> wide = rng.bytes<64>();
  return reduce(wide);
}

Scalar Scalar::from_doc_id(const DocId& id) { return reduce(id.bytes); }

ByteArray<Scalar::kSize> Scalar::to_bytes() const {
  blst_scalar raw = to_blst_scalar(fr_);
  ByteArray<kSize> out{};
  blst_bendian_from_scalar(out.data(), &raw);
  return out;
}

bool Scalar::is_zero() const {
  static const Scalar kZero;
  return *this == kZero;
}

Scalar Scalar::operator+(const Scalar& o) const {
  ++op_counts().scalar_adds;
  Scalar r;
  blst_fr_add(&r.fr_, &fr_, &o.fr_);
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r;
  blst_fr_sub(&r.fr_, &fr_, &o.fr_);
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  ++op_counts().scalar_muls;
  Scalar r;
  blst_fr_mul(&r.fr_, &fr_, &o.fr_);
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  blst_fr_cneg(&r.fr_, &fr_, true);
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  return std::memcmp(&fr_, &o.fr_, sizeof(fr_)) == 0;
}

// ---------------------------------------------------------------------------
// G1

G1Element::G1Element() { std::memset(&p_, 0, sizeof(p_)); }

G1Element G1Element::generator() { return G1Element(*blst_p1_generator()); }

G1Element G1Element::random(RandomSource& rng) {
  return generator().pow(Scalar::random(rng));
}

G1Element G1Element::from_bytes(ByteView compressed) {
  if (compressed.size() != kSize) {
    throw DecodeError("G1 encoding must be 48 bytes");
  }
  blst_p1_affine aff;
  if (blst_p1_uncompress(&aff, compressed.data()) != BLST_SUCCESS) {
    throw DecodeError("invalid G1 encoding");
  }
  if (!blst_p1_affine_in_g1(&aff)) {
    throw DecodeError("G1 point outside the prime-order subgroup");
  }
  blst_p1 p;
  blst_p1_from_affine(&p, &aff);
  return G1Element(p);
}

ByteArray<G1Element::kSize> G1Element::to_bytes() const {
  ByteArray<kSize> out{};
  blst_p1_compress(out.data(), &p_);
  return out;
}

bool G1Element::is_identity() const { return blst_p1_is_inf(&p_); }

G1Element G1Element::pow(const Scalar& e) const {
  ++op_counts().g1_exps;
  blst_scalar s = to_blst_scalar(e.raw());
  blst_p1 out;
  blst_p1_mult(&out, &p_, s.b, kScalarBits);
  return G1Element(out);
}

G1Element G1Element::inverse() const {
  blst_p1 out = p_;
  blst_p1_cneg(&out, true);
  return G1Element(out);
}

G1Element G1Element::operator*(const G1Element& o) const {
  ++op_counts().g1_muls;
  blst_p1 out;
  blst_p1_add_or_double(&out, &p_, &o.p_);
  return G1Element(out);
}

bool G1Element::operator==(const G1Element& o) const {
  return blst_p1_is_equal(&p_, &o.p_);
}

// ---------------------------------------------------------------------------
// G2

G2Element::G2Element() { std::memset(&p_, 0, sizeof(p_)); }

G2Element G2Element::generator() { return G2Element(*blst_p2_generator()); }

G2Element G2Element::from_bytes(ByteView compressed) {
  if (compressed.size() != kSize) {
    throw DecodeError("G2 encoding must be 96 bytes");
  }
  blst_p2_affine aff;
  if (blst_p2_uncompress(&aff, compressed.data()) != BLST_SUCCESS) {
    throw DecodeError("invalid G2 encoding");
  }
  if (!blst_p2_affine_in_g2(&aff)) {
    throw DecodeError("G2 point outside the prime-order subgroup");
  }
  blst_p2 p;
  blst_p2_from_affine(&p, &aff);
  return G2Element(p);
}

ByteArray<G2Element::kSize> G2Element::to_bytes() const {
  ByteArray<kSize> out{};
  blst_p2_compress(out.data(), &p_);
  return out;
}

bool G2Element::is_identity() const { return blst_p2_is_inf(&p_); }

G2Element G2Element::pow(const Scalar& e) const {
  ++op_counts().g2_exps;
  blst_scalar s = to_blst_scalar(e.raw());
  blst_p2 out;
  blst_p2_mult(&out, &p_, s.b, kScalarBits);
  return G2Element(out);
}

G2Element G2Element::operator*(const G2Element& o) const {
  blst_p2 out;
  blst_p2_add_or_double(&out, &p_, &o.p_);
  return G2Element(out);
}

bool G2Element::operator==(const G2Element& o) const {
  return blst_p2_is_equal(&p_, &o.p_);
}

// ---------------------------------------------------------------------------
// GT

namespace {

constexpr std::size_t kFpCount = 12;
constexpr std::size_t kFpSize = 48;

// Flat view of the twelve base-field coordinates, in memory order.
blst_fp* coords(blst_fp12& f) { return &f.fp6[0].fp2[0].fp[0]; }
const blst_fp* coords(const blst_fp12& f) { return &f.fp6[0].fp2[0].fp[0]; }

static_assert(sizeof(blst_fp12) == kFpCount * sizeof(blst_fp));

}  // namespace

GtElement::GtElement() : f_(*blst_fp12_one()) {}

GtElement GtElement::from_bytes(ByteView data) {
  if (data.size() != kSize) {
    throw DecodeError("GT encoding must be 576 bytes");
  }
  GtElement g;
  for (std::size_t i = 0; i < kFpCount; ++i) {
    const std::uint8_t* chunk = data.data() + i * kFpSize;
    blst_fp_from_bendian(&coords(g.f_)[i], chunk);
    ByteArray<kFpSize> back{};
    blst_bendian_from_fp(back.data(), &coords(g.f_)[i]);
    if (!std::equal(back.begin(), back.end(), chunk)) {
      throw DecodeError("GT coordinate is not reduced");
    }
  }
  if (!blst_fp12_in_group(&g.f_)) {
    throw DecodeError("GT element outside the order-q subgroup");
  }
  return g;
}

ByteArray<GtElement::kSize> GtElement::to_bytes() const {
  ByteArray<kSize> out{};
  for (std::size_t i = 0; i < kFpCount; ++i) {
    blst_bendian_from_fp(out.data() + i * kFpSize, &coords(f_)[i]);
  }
  return out;
}

bool GtElement::is_identity() const { return blst_fp12_is_one(&f_); }

GtElement GtElement::operator*(const GtElement& o) const {
  GtElement r;
  blst_fp12_mul(&r.f_, &f_, &o.f_);
  return r;
}

GtElement GtElement::pow(const Scalar& e) const {
  // Plain left-to-right square-and-multiply over the big-endian encoding.
  ByteArray<Scalar::kSize> bits = e.to_bytes();
  GtElement acc;
  for (std::uint8_t byte : bits) {
    for (int b = 7; b >= 0; --b) {
      blst_fp12_sqr(&acc.f_, &acc.f_);
      if ((byte >> b) & 1) blst_fp12_mul(&acc.f_, &acc.f_, &f_);
    }
  }
  return acc;
}

bool GtElement::operator==(const GtElement& o) const {
  return blst_fp12_is_equal(&f_, &o.f_);
}

GtElement pairing(const G1Element& a, const G2Element& b) {
  ++op_counts().pairings;
  GtElement out;
  if (a.is_identity() || b.is_identity()) return out;
  blst_p1_affine pa;
  blst_p2_affine pb;
  blst_p1_to_affine(&pa, &a.raw());
  blst_p2_to_affine(&pb, &b.raw());
  blst_fp12 ml;
  blst_miller_loop(&ml, &pb, &pa);
  blst_final_exp(&out.f_, &ml);
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric primitives

Block32 sha256(ByteView msg) {
  Block32 out{};
  SHA256(msg.data(), msg.size(), out.data());
  return out;
}

ByteArray<64> sha512(ByteView msg) {
  ByteArray<64> out{};
  SHA512(msg.data(), msg.size(), out.data());
  return out;
}

Block32 hmac_sha256(ByteView key, ByteView msg) {
  Block32 out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(),
           msg.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
    throw std::runtime_error("HMAC-SHA256 failed");
  }
  return out;
}

Scalar hash_to_scalar(ByteView msg) {
  return Scalar::reduce(sha512(concat(as_bytes(kTagHashToScalar), msg)));
}

G1Element bilinear_hash(ByteView msg) {
  return G1Element::generator().pow(hash_to_scalar(msg));
}

Scalar prg_block(const SymKey& seed, std::uint64_t index) {
  if (index == 0) {
    throw DomainError("prg_block: index must be >= 1");
  }
  const ByteArray<8> idx = be64(index);
  const ByteArray<1> lo{0}, hi{1};
  Block32 a = prf(seed, concat(as_bytes(kTagPrg), idx, lo));
  Block32 b = prf(seed, concat(as_bytes(kTagPrg), idx, hi));
  return Scalar::reduce(concat(a, b));
}

Block32 doc_name(const DocId& id) {
  return sha256(concat(as_bytes(kTagDocName), id.bytes));
}

// ---------------------------------------------------------------------------
// BLS

BlsKeyPair bls_gen(RandomSource& rng) {
  for (;;) {
    Scalar sk = Scalar::random(rng);
    if (sk.is_zero() || sk == Scalar::one()) continue;
    return bls_keypair_from_secret(sk);
  }
}

BlsKeyPair bls_keypair_from_secret(const Scalar& sk) {
  return {sk, G2Element::generator().pow(sk)};
}

G1Element bls_sign(const Scalar& sk, const Scalar& m) {
  return G1Element::generator().pow(sk * m);
}

bool bls_verify(const G2Element& pk, const Scalar& m, const G1Element& sigma) {
  GtElement lhs = pairing(sigma, G2Element::generator());
  GtElement rhs = pairing(G1Element::generator().pow(m), pk);
  return lhs == rhs;
}

bool bls_verify_encoded(ByteView pk, const Scalar& m, ByteView sigma) {
  try {
    return bls_verify(G2Element::from_bytes(pk), m,
                      G1Element::from_bytes(sigma));
  } catch (const DecodeError&) {
    return false;
  }
}

}  // namespace vsse::crypto
