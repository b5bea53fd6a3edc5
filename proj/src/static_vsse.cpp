#include "vsse/static_vsse.hpp"

#include "vsse/counters.hpp"
#include "vsse/errors.hpp"

namespace vsse::vstatic {

StaticVKeys vs_keygen(RandomSource& rng) {
  return {SymKey::random(rng), SymKey::random(rng)};
}

Block32 keyword_key(const StaticVKeys& keys, const Keyword& w) {
  return crypto::prf(keys.tag_master, w.view());
}

Block32 compute_tag(const StaticVKeys& keys, const Keyword& w,
                    const std::vector<DocId>& ids) {
  // DocIds are fixed-width, so plain concatenation is unambiguous.
  Bytes joined;
  joined.reserve(ids.size() * DocId::kSize);
  for (const DocId& id : ids) {
    joined.insert(joined.end(), id.bytes.begin(), id.bytes.end());
  }
  ++op_counts().tag_macs;
  return crypto::hmac_sha256(keyword_key(keys, w), joined);
}

StaticBuild vs_build(const StaticVKeys& keys, const PlainDb& db,
                     RandomSource& rng) {
  StaticBuild out;
  sse::BlockLists lists;
  for (const auto& [w, ids] : db) {
    if (ids.empty()) continue;
    auto& blocks = lists[w];
    for (const DocId& id : ids) blocks.push_back(sse::pad_doc_id(id));
    blocks.push_back(compute_tag(keys, w, ids));
    out.counts[w] = blocks.size();
  }
  out.index = sse::static_build_blocks(keys.base_key, lists, rng);
  return out;
}

sse::StaticToken vs_search_token(const StaticVKeys& keys,
                                 const StaticCounts& counts,
                                 const Keyword& w) {
  auto it = counts.find(w);
  return sse::static_search_token(keys.base_key, w,
                                  it == counts.end() ? 0 : it->second);
}

std::string to_string(StaticReason r) {
  switch (r) {
    case StaticReason::kAccept: return "accept";
    case StaticReason::kShortResult: return "short-result";
    case StaticReason::kMalformedResult: return "malformed-result";
    case StaticReason::kTagMismatch: return "tag-mismatch";
    case StaticReason::kIncompleteIndex: return "incomplete-index";
  }
  return "unknown";
}

StaticVerdict vs_verify(const StaticVKeys& keys, const Keyword& w,
                        const sse::StaticToken& token,
                        const std::vector<Block32>& returned) {
  if (token.count == 0) {
    // Not indexed: only the empty answer is acceptable, no tag to check.
    return {returned.empty() ? StaticReason::kAccept
                             : StaticReason::kMalformedResult,
            {}};
  }
  if (returned.empty()) return {StaticReason::kShortResult, {}};

  std::vector<DocId> ids;
  ids.reserve(returned.size() - 1);
  try {
    for (std::size_t i = 0; i + 1 < returned.size(); ++i) {
      ids.push_back(sse::unpad_doc_id(returned[i]));
    }
  } catch (const DecodeError&) {
    return {StaticReason::kMalformedResult, {}};
  }
  if (compute_tag(keys, w, ids) != returned.back()) {
    return {StaticReason::kTagMismatch, {}};
  }
  return {StaticReason::kAccept, std::move(ids)};
}

StaticVerdict vs_search(const StaticVKeys& keys, const StaticCounts& counts,
                        const Keyword& w, const sse::EncryptedIndex& index) {
  sse::StaticToken token = vs_search_token(keys, counts, w);
  std::vector<Block32> returned;
  try {
    returned = sse::static_search_blocks(index, token);
  } catch (const IncompleteIndexError&) {
    return {StaticReason::kIncompleteIndex, {}};
  }
  return vs_verify(keys, w, token, returned);
}

}  // namespace vsse::vstatic
