#pragma once

// Test-only plaintext oracle: an inverted index built directly from a list of
// (keyword, id) pairs, independent of PlainDb and every scheme under test.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vsse/random.hpp"
#include "vsse/types.hpp"

namespace oracle {

using Pairs = std::vector<std::pair<std::string, vsse::DocId>>;
using Inverted = std::map<std::string, std::vector<vsse::DocId>>;

inline Inverted invert(const Pairs& pairs) {
  Inverted out;
  for (const auto& [w, id] : pairs) out[w].push_back(id);
  return out;
}

inline vsse::DocId random_id(vsse::RandomSource& rng) {
  return vsse::DocId{rng.bytes<16>()};
}

// Up to max_keywords keywords and max_pairs distinct pairs; every keyword has
// at least one posting. Keywords are "kw<n>".
inline Pairs random_pairs(vsse::RandomSource& rng, std::size_t max_keywords,
                          std::size_t max_pairs) {
  std::size_t nk = 1 + rng.uniform(max_keywords);
  std::size_t np = nk + rng.uniform(max_pairs - nk + 1);
  std::size_t ndocs = 1 + rng.uniform(np);
  std::vector<vsse::DocId> docs;
  for (std::size_t i = 0; i < ndocs; ++i) docs.push_back(random_id(rng));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  Pairs out;
  for (std::size_t k = 0; k < nk; ++k) {
    std::size_t d = rng.uniform(ndocs);
    seen.insert({k, d});
    out.push_back({"kw" + std::to_string(k), docs[d]});
  }
  std::size_t attempts = 0;
  while (out.size() < np && attempts++ < 20 * np) {
    std::size_t k = rng.uniform(nk), d = rng.uniform(ndocs);
    if (!seen.insert({k, d}).second) continue;
    out.push_back({"kw" + std::to_string(k), docs[d]});
  }
  // Random interleaving of keywords; per-keyword order is insertion order.
  for (std::size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[rng.uniform(i)]);
  }
  return out;
}

inline vsse::PlainDb to_db(const Pairs& pairs) {
  vsse::PlainDb db;
  for (const auto& [w, id] : pairs) db.add(vsse::Keyword(w), id);
  return db;
}

}  // namespace oracle
