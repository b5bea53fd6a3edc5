#pragma once

// Random well-formed simulator scripts. Added documents are always fresh ids;
// deletions only target live pairs.

#include <map>
#include <string>
#include <vector>

#include "support/oracle.hpp"
#include "vsse/sim.hpp"

namespace scripts {

struct Live {
  std::map<std::string, std::vector<vsse::DocId>> pairs;

  explicit Live(const vsse::PlainDb& db) {
    for (const auto& [w, ids] : db) pairs[w.text()] = ids;
  }
};

inline vsse::sim::Script random_script(vsse::RandomSource& rng,
                                       const vsse::PlainDb& db, std::size_t ops,
                                       std::size_t keyword_space) {
  using vsse::Keyword;
  using vsse::sim::ScriptOp;
  Live live(db);
  vsse::sim::Script s;
  auto kw = [&](std::size_t k) { return "kw" + std::to_string(k); };
  while (s.size() < ops) {
    const std::uint64_t roll = rng.uniform(10);
    if (roll < 5) {
      s.push_back(ScriptOp::search(Keyword(kw(rng.uniform(keyword_space)))));
    } else if (roll < 8) {
      std::vector<Keyword> kws;
      const std::size_t n = 1 + rng.uniform(3);
      std::vector<bool> used(keyword_space, false);
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t k = rng.uniform(keyword_space);
        if (used[k]) continue;
        used[k] = true;
        kws.emplace_back(kw(k));
      }
      const vsse::DocId id = oracle::random_id(rng);
      for (const auto& w : kws) live.pairs[w.text()].push_back(id);
      s.push_back(ScriptOp::add(id, kws));
    } else {
      std::vector<std::string> nonempty;
      for (const auto& [w, ids] : live.pairs) {
        if (!ids.empty()) nonempty.push_back(w);
      }
      if (nonempty.empty()) continue;
      const std::string& w = nonempty[rng.uniform(nonempty.size())];
      auto& ids = live.pairs[w];
      const std::size_t k = rng.uniform(ids.size());
      const vsse::DocId id = ids[k];
      ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(k));
      s.push_back(ScriptOp::del(id, {Keyword(w)}));
    }
  }
  return s;
}

}  // namespace scripts
