#pragma once

// Privately verifiable static SSE: every keyword's posting list carries a
// trailing MAC tag bound to the keyword, tag_w = F(k_w, id_1 || ... || id_c)
// with k_w = F(K', w). The tag is stored encrypted like any other posting.

#include <map>
#include <string>
#include <vector>

#include "vsse/base_sse.hpp"

namespace vsse::vstatic {

using crypto::SymKey;

struct StaticVKeys {
  SymKey base_key;
  SymKey tag_master;
};

StaticVKeys vs_keygen(RandomSource& rng);

// Owner-held tagged list length per indexed keyword (postings + 1).
using StaticCounts = std::map<Keyword, std::uint64_t>;

struct StaticBuild {
  sse::EncryptedIndex index;
  StaticCounts counts;
};

Block32 keyword_key(const StaticVKeys& keys, const Keyword& w);
Block32 compute_tag(const StaticVKeys& keys, const Keyword& w,
                    const std::vector<DocId>& ids);

StaticBuild vs_build(const StaticVKeys& keys, const PlainDb& db,
                     RandomSource& rng);

sse::StaticToken vs_search_token(const StaticVKeys& keys,
                                 const StaticCounts& counts, const Keyword& w);

enum class StaticReason { kAccept, kShortResult, kMalformedResult, kTagMismatch, kIncompleteIndex };

std::string to_string(StaticReason r);

struct StaticVerdict {
  StaticReason reason = StaticReason::kAccept;
  std::vector<DocId> ids;  // empty unless accepted

  bool accepted() const { return reason == StaticReason::kAccept; }
};

// Owner-side check of the blocks the cloud returned for token `token`.
StaticVerdict vs_verify(const StaticVKeys& keys, const Keyword& w,
                        const sse::StaticToken& token,
                        const std::vector<Block32>& returned);

// Token, honest cloud search and verification in one call.
StaticVerdict vs_search(const StaticVKeys& keys, const StaticCounts& counts,
                        const Keyword& w, const sse::EncryptedIndex& index);

}  // namespace vsse::vstatic
