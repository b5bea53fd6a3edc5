#include <algorithm>
#include <sstream>

#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

namespace vsse::sim {

namespace {

DocId fresh_id(RandomSource& rng) { return DocId{rng.bytes<DocId::kSize>()}; }

}  // namespace

TrialPlan make_trial(RandomSource& rng) {
  TrialPlan plan;
  const std::size_t extra = 1 + rng.uniform(4);
  std::vector<Keyword> kws;
  for (std::size_t k = 0; k < 2 + extra; ++k) {
    kws.emplace_back("w" + std::to_string(k));
  }
  std::vector<DocId> pool;
  for (std::size_t k = 0; k < 12; ++k) pool.push_back(fresh_id(rng));

  // w0 and w1 share a size but not their postings, so a replayed answer
  // always has a same-size candidate that differs.
  const std::size_t n = 1 + rng.uniform(4);
  for (std::size_t k = 0; k < n; ++k) {
    plan.db.add(kws[0], pool[k]);
    plan.db.add(kws[1], pool[n + k]);
  }
  for (std::size_t k = 2; k < kws.size(); ++k) {
    const std::size_t size = rng.uniform(5);
    std::vector<DocId> ids = pool;
    for (std::size_t j = 0; j < size; ++j) {
      std::swap(ids[j], ids[j + rng.uniform(ids.size() - j)]);
      plan.db.add(kws[k], ids[j]);
    }
  }

  Script& s = plan.script;
  for (const Keyword& w : kws) s.push_back(ScriptOp::search(w));
  s.push_back(ScriptOp::search(kws[0]));

  // A new document touching w0 and a random other keyword.
  const DocId added = fresh_id(rng);
  const Keyword& other = kws[1 + rng.uniform(kws.size() - 1)];
  s.push_back(ScriptOp::add(added, {kws[0], other}));
  s.push_back(ScriptOp::search(kws[0]));
  s.push_back(ScriptOp::search(other));

  // Delete one original pair of w0; the deletion twin is then non-empty.
  const DocId victim = pool[rng.uniform(n)];
  s.push_back(ScriptOp::del(victim, {kws[0]}));
  s.push_back(ScriptOp::search(kws[0]));
  s.push_back(ScriptOp::search(kws[1]));

  s.push_back(ScriptOp::add(fresh_id(rng), {kws[1]}));
  for (const Keyword& w : kws) s.push_back(ScriptOp::search(w));
  return plan;
}

std::uint64_t SoundnessReport::total_forgeries() const {
  std::uint64_t n = 0;
  for (const auto& [s, t] : tallies) {
    if (s != Strategy::kHonest) n += t.accepted_forgeries;
  }
  return n;
}

std::string SoundnessReport::to_text() const {
  std::ostringstream out;
  for (const auto& [s, t] : tallies) {
    out << to_string(s) << ": sessions=" << t.sessions
        << " vacuous=" << t.vacuous_sessions << " searches=" << t.searches
        << " tampered=" << t.tampered_searches << " accepted=" << t.accepted
        << " forgeries=" << t.accepted_forgeries;
    for (const auto& [reason, n] : t.reasons) out << ' ' << reason << '=' << n;
    out << '\n';
  }
  return out.str();
}

SoundnessReport soundness_suite(std::uint64_t trials, RandomSource& rng,
                                const SessionOptions& options) {
  if (trials == 0) throw InputError("soundness suite needs at least one trial");
  SoundnessReport report;
  std::vector<Strategy> arms = {Strategy::kHonest};
  for (Strategy s : tampering_strategies()) arms.push_back(s);

  for (Strategy s : arms) {
    StrategyTally& tally = report.tallies[s];
    for (std::uint64_t k = 0; k < trials; ++k) {
      TrialPlan plan = make_trial(rng);
      AdversaryStrategy adv{s, rng.next_u64(),
                            rng.uniform(4) == 0 ? Structure::kDel
                                                : Structure::kAdd};
      Transcript t = run_session(plan.db, plan.script, adv, rng, options);
      ++tally.sessions;
      bool any_tamper = false;
      for (const SearchRecord& r : t.searches) {
        ++tally.searches;
        ++tally.reasons[vforward::to_string(r.reason)];
        if (r.tampered) {
          ++tally.tampered_searches;
          any_tamper = true;
        }
        if (r.accepted()) {
          ++tally.accepted;
          // A tampered answer that verifies counts even if it happens to
          // carry the right ids.
          if (r.forged() || r.tampered) ++tally.accepted_forgeries;
        }
      }
      if (!any_tamper) ++tally.vacuous_sessions;
    }
  }
  return report;
}

}  // namespace vsse::sim
