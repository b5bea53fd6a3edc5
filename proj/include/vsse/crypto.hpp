#pragma once

// Pairing-group arithmetic over BLS12-381 and the symmetric primitives the
// verifiable schemes are built from.
//
// The schemes are written against a symmetric pairing e: G x G -> GT. We fix
// the asymmetric split used everywhere in this library: messages and
// signatures live in G1, public keys and the pairing's second argument in
// G2, so the verification equation e(sigma, g2) == e(g1^m, pk) keeps its
// shape.

#include <blst.h>

#include <cstdint>
#include <string_view>

#include "vsse/bytes.hpp"
#include "vsse/random.hpp"
#include "vsse/types.hpp"

namespace vsse::crypto {

// Domain-separation tags. Every hash/PRF input starts with exactly one.
inline constexpr std::string_view kTagPrg = "r";
inline constexpr std::string_view kTagLocation = "loc";
inline constexpr std::string_view kTagChain = "chain";
inline constexpr std::string_view kTagMask = "mask";
inline constexpr std::string_view kTagDocName = "docname";
inline constexpr std::string_view kTagHashToScalar = "h2s";
inline constexpr std::string_view kTagDeletion = "del";

// Element of Z_q, q the prime order of G1/G2/GT.
class Scalar {
 public:
  static constexpr std::size_t kSize = 32;

  Scalar();  // zero
  static Scalar one();
  static Scalar from_u64(std::uint64_t v);
  // Canonical 32-byte big-endian decoding; rejects values >= q.
  static Scalar from_bytes(ByteView be);
  // Big-endian integer of any length reduced mod q.
  static Scalar reduce(ByteView be);
  static Scalar random(RandomSource& rng);
  static Scalar from_doc_id(const DocId& id);

  ByteArray<kSize> to_bytes() const;
  std::string hex() const { return to_hex(to_bytes()); }
  bool is_zero() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  bool operator==(const Scalar& o) const;

  const blst_fr& raw() const { return fr_; }

 private:
  blst_fr fr_;
};

class G1Element {
 public:
  static constexpr std::size_t kSize = 48;

  G1Element();  // identity
  static G1Element generator();
  static G1Element identity() { return {}; }
  static G1Element random(RandomSource& rng);
  // Compressed decoding with on-curve and subgroup checks.
  static G1Element from_bytes(ByteView compressed);

  ByteArray<kSize> to_bytes() const;
  bool is_identity() const;

  G1Element pow(const Scalar& e) const;
  G1Element inverse() const;
  G1Element operator*(const G1Element& o) const;
  G1Element& operator*=(const G1Element& o) { return *this = *this * o; }
  bool operator==(const G1Element& o) const;

  const blst_p1& raw() const { return p_; }

 private:
  explicit G1Element(const blst_p1& p) : p_(p) {}
  blst_p1 p_;
};

class G2Element {
 public:
  static constexpr std::size_t kSize = 96;

  G2Element();  // identity
  static G2Element generator();
  static G2Element identity() { return {}; }
  static G2Element from_bytes(ByteView compressed);

  ByteArray<kSize> to_bytes() const;
  bool is_identity() const;

  G2Element pow(const Scalar& e) const;
  G2Element operator*(const G2Element& o) const;
  bool operator==(const G2Element& o) const;

  const blst_p2& raw() const { return p_; }

 private:
  explicit G2Element(const blst_p2& p) : p_(p) {}
  blst_p2 p_;
};

class GtElement {
 public:
  static constexpr std::size_t kSize = 576;

  GtElement();  // identity
  static GtElement identity() { return {}; }
  // 12 big-endian base-field coordinates; rejects non-canonical values and
  // elements outside the order-q subgroup.
  static GtElement from_bytes(ByteView data);

  ByteArray<kSize> to_bytes() const;
  bool is_identity() const;

  GtElement operator*(const GtElement& o) const;
  GtElement pow(const Scalar& e) const;
  bool operator==(const GtElement& o) const;

 private:
  friend GtElement pairing(const G1Element&, const G2Element&);
  blst_fp12 f_;
};

GtElement pairing(const G1Element& a, const G2Element& b);

struct SymKey {
  static constexpr std::size_t kSize = 32;
  Block32 bytes{};

  static SymKey random(RandomSource& rng) { return {rng.bytes<kSize>()}; }
  bool operator==(const SymKey&) const = default;
};

Block32 sha256(ByteView msg);
ByteArray<64> sha512(ByteView msg);
Block32 hmac_sha256(ByteView key, ByteView msg);

// F: keyed PRF, HMAC-SHA256.
inline Block32 prf(const SymKey& key, ByteView input) {
  return hmac_sha256(key.bytes, input);
}

// SHA-512("h2s" || msg) reduced mod q.
Scalar hash_to_scalar(ByteView msg);

// H(m) = g1^hash_to_scalar(m).
G1Element bilinear_hash(ByteView msg);

// Indexed PRG: block `index` (>= 1) of the stream seeded by `seed`, as an
// element of Z_q. Random access; throws DomainError for index 0.
Scalar prg_block(const SymKey& seed, std::uint64_t index);

// H'(id): public one-way document name.
Block32 doc_name(const DocId& id);

struct BlsKeyPair {
  Scalar sk;
  G2Element pk;
};

// Samples sk uniformly, resampling the degenerate values 0 and 1.
BlsKeyPair bls_gen(RandomSource& rng);
// No degenerate-key policy; for tests and key reloading.
BlsKeyPair bls_keypair_from_secret(const Scalar& sk);

// sigma = g1^(sk * m).
G1Element bls_sign(const Scalar& sk, const Scalar& m);
// e(sigma, g2) == e(g1^m, pk).
bool bls_verify(const G2Element& pk, const Scalar& m, const G1Element& sigma);
// Same check on encodings; any decoding failure is a reject.
bool bls_verify_encoded(ByteView pk, const Scalar& m, ByteView sigma);

}  // namespace vsse::crypto
