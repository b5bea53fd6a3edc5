// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracle.hpp"
#include "support/scripts.hpp"
#include "vsse/bench.hpp"
#include "vsse/counters.hpp"
#include "vsse/crypto.hpp"
#include "vsse/errors.hpp"
#include "vsse/forward_vsse.hpp"
#include "vsse/sim.hpp"
#include "vsse/static_vsse.hpp"

using namespace vsse;
using crypto::G1Element;
using crypto::G2Element;
using crypto::Scalar;

namespace {
#include "unit/vectors.inc"

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first failure; later checks only add to the summary.
class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && ok_) {
      ok_ = false;
      first_ = what;
    }
  }
  bool ok() const { return ok_; }
  Outcome done(const std::string& summary) const {
    return {ok_, ok_ ? summary : first_ + " (" + summary + ")"};
  }

 private:
  bool ok_ = true;
  std::string first_;
};

std::vector<DocId> ids_of(const std::vector<sse::IndexedId>& hits) {
  std::vector<DocId> out;
  for (const auto& h : hits) out.push_back(h.id);
  return out;
}

// Completeness for both schemes plus the pairing equation on every honest
// forward search; both criteria share the same runs.
struct CompletenessRun {
  Outcome completeness;
  Outcome equation;
};

CompletenessRun completeness() {
  SeededRandom rng(1001);
  Check comp, eq;
  std::uint64_t searches = 0, pairs_total = 0, equations = 0;
  const auto start = std::chrono::steady_clock::now();
  const G1Element g1 = G1Element::generator();
  const G2Element g2 = G2Element::generator();

  for (int t = 0; t < 100; ++t) {
    const oracle::Pairs pairs = oracle::random_pairs(rng, 50, 500);
    const oracle::Inverted expected = oracle::invert(pairs);
    const PlainDb db = oracle::to_db(pairs);
    pairs_total += pairs.size();

    const vstatic::StaticVKeys skeys = vstatic::vs_keygen(rng);
    const vstatic::StaticBuild sb = vstatic::vs_build(skeys, db, rng);
    const vforward::ForwardVKeys fkeys = vforward::vf_keygen(rng);
    const vforward::ForwardBuild fb = vforward::vf_build(fkeys, db, rng);

    for (const auto& [w, ids] : expected) {
      const Keyword kw(w);
      const vstatic::StaticVerdict sv = vstatic::vs_search(skeys, sb.counts, kw, sb.index);
      comp.expect(sv.accepted() && sv.ids == ids, "static mismatch on db " + std::to_string(t));

      const vforward::SearchOutcome fo =
          vforward::vf_search(fkeys, fb.owner, fb.cloud, kw, vforward::Structure::kAdd);
      comp.expect(fo.accepted() && ids_of(fo.result) == ids,
                  "forward mismatch on db " + std::to_string(t));
      const vforward::DeletionAwareOutcome full =
          vforward::vf_search_with_deletions(fkeys, fb.owner, fb.cloud, kw);
      comp.expect(full.accepted() && full.ids == ids,
                  "forward (with deletion twin) mismatch on db " + std::to_string(t));
      searches += 3;

      if (fo.accepted() && fo.proof) {
        eq.expect(crypto::pairing(fo.proof->pf_c, g2) ==
                      crypto::pairing(g1.pow(fo.proof->pf_o), fkeys.bls.pk),
                  "pairing equation fails on db " + std::to_string(t));
        ++equations;
      } else {
        eq.expect(false, "honest forward search without a proof");
      }
    }
    const Keyword absent("absent-keyword");
    comp.expect(vstatic::vs_search(skeys, sb.counts, absent, sb.index).ids.empty(),
                "static answer for an absent keyword");
    comp.expect(vforward::vf_search_with_deletions(fkeys, fb.owner, fb.cloud, absent).ids.empty(),
                "forward answer for an absent keyword");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  comp.expect(secs < 120.0, "over the 2 minute budget");

  std::ostringstream s;
  s.precision(1);
  s << std::fixed << "100 databases, " << pairs_total << " pairs, " << searches
    << " searches, 0 failures, " << secs << " s";
  std::ostringstream e;
  e << equations << " honest forward searches checked";
  return {comp.done(s.str()), eq.done(e.str())};
}

Outcome soundness() {
  SeededRandom rng(1002);
  const sim::SoundnessReport r = sim::soundness_suite(100, rng);
  Check c;
  std::ostringstream s;
  for (sim::Strategy st : sim::tampering_strategies()) {
    const sim::StrategyTally& t = r.tallies.at(st);
    c.expect(t.sessions == 100, sim::to_string(st) + " ran " + std::to_string(t.sessions) + " sessions");
    c.expect(t.tampered_searches > 0, sim::to_string(st) + " never tampered");
    c.expect(t.accepted_forgeries == 0,
             sim::to_string(st) + " accepted " + std::to_string(t.accepted_forgeries) + " forgeries");
    s << sim::to_string(st) << " " << t.accepted_forgeries << "/" << t.tampered_searches << ", ";
  }
  const sim::StrategyTally& h = r.tallies.at(sim::Strategy::kHonest);
  c.expect(h.sessions == 100 && h.searches > 0 && h.accepted == h.searches,
           "HONEST control did not accept every search");
  s << "HONEST " << h.accepted << "/" << h.searches << " accepted";
  return c.done(s.str());
}

Outcome static_binding() {
  using namespace vstatic;
  SeededRandom rng(1003);
  const StaticVKeys keys = vs_keygen(rng);

  // 20 keywords over a small id universe: lengths 1..5 repeat, so many pairs
  // have equal-size answers and overlapping postings.
  std::vector<DocId> universe;
  for (int i = 0; i < 12; ++i) universe.push_back(oracle::random_id(rng));
  PlainDb db;
  std::vector<Keyword> kws;
  for (int k = 0; k < 20; ++k) {
    Keyword w("fixture" + std::to_string(k));
    const std::size_t len = 1 + static_cast<std::size_t>(k % 5);
    const std::size_t offset = static_cast<std::size_t>(k / 5);
    for (std::size_t j = 0; j < len; ++j) db.add(w, universe[(offset + j) % universe.size()]);
    kws.push_back(w);
  }
  const StaticBuild b = vs_build(keys, db, rng);
  auto answer = [&](const Keyword& w) {
    return sse::static_search_blocks(b.index, vs_search_token(keys, b.counts, w));
  };

  Check c;
  std::uint64_t cross = 0, tampers = 0;
  for (const Keyword& a : kws) {
    const auto token = vs_search_token(keys, b.counts, a);
    c.expect(vs_verify(keys, a, token, answer(a)).accepted(), "honest fixture answer rejected");
    for (const Keyword& other : kws) {
      if (other == a) continue;
      ++cross;
      c.expect(!vs_verify(keys, a, token, answer(other)).accepted(),
               "cross-substitution " + other.text() + " for " + a.text() + " accepted");
    }
  }

  std::vector<Block32> candidates;
  for (const DocId& id : universe) candidates.push_back(sse::pad_doc_id(id));
  for (int i = 0; i < 4; ++i) candidates.push_back(sse::pad_doc_id(oracle::random_id(rng)));

  for (const Keyword& w : kws) {
    const auto token = vs_search_token(keys, b.counts, w);
    const auto honest = answer(w);
    const std::vector<Block32> ids(honest.begin(), honest.end() - 1);
    if (ids.size() > 5) continue;
    const Block32 tag = honest.back();
    auto rejects = [&](std::vector<Block32> tampered) {
      ++tampers;
      tampered.push_back(tag);
      return !vs_verify(keys, w, token, tampered).accepted();
    };
    for (std::size_t pos = 0; pos < ids.size(); ++pos) {
      auto dropped = ids;
      dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(pos));
      c.expect(rejects(dropped), "dropped id accepted");
      for (const Block32& cand : candidates) {
        if (cand == ids[pos]) continue;
        auto sub = ids;
        sub[pos] = cand;
        c.expect(rejects(sub), "substituted id accepted");
      }
      for (std::size_t bit = 0; bit < 8 * DocId{}.bytes.size(); ++bit) {
        auto flipped = ids;
        flipped[pos][bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        c.expect(rejects(flipped), "bit-flipped id accepted");
      }
      for (std::size_t other = pos + 1; other < ids.size(); ++other) {
        auto swapped = ids;
        std::swap(swapped[pos], swapped[other]);
        c.expect(rejects(swapped), "reordered ids accepted");
      }
    }
    for (std::size_t pos = 0; pos <= ids.size(); ++pos) {
      for (const Block32& cand : candidates) {
        auto ins = ids;
        ins.insert(ins.begin() + static_cast<std::ptrdiff_t>(pos), cand);
        c.expect(rejects(ins), "inserted id accepted");
      }
    }
  }
  return c.done(std::to_string(cross) + " ordered cross-substitutions, " +
                std::to_string(tampers) + " single-id tampers, all rejected");
}

Outcome proof_cost_shape() {
  SeededRandom rng(1004);
  const auto rows = bench::run_bench({1, 10, 100}, 5, rng);
  Check c;
  c.expect(rows.size() == 3, "expected three bench rows");
  for (const auto& r : rows) {
    const std::uint64_t n = r.result_size;
    const std::string at = " at |R_w|=" + std::to_string(n);
    c.expect(r.proof_bytes == rows.front().proof_bytes, "proof size varies" + at);
    c.expect(r.auditor_ops.pairings == 2, "auditor pairings != 2" + at);
    c.expect(r.owner_ops.scalar_muls == n && r.owner_ops.scalar_adds == n,
             "owner multiply-adds != |R_w|" + at);
    c.expect(r.owner_ops.pairings == 0, "owner performed pairings" + at);
    c.expect(r.cloud_ops.tsig_lookups == n, "cloud lookups != |R_w|" + at);
    c.expect(r.cloud_ops.g1_muls == n - 1, "cloud multiplications != |R_w|-1" + at);
  }

  // The serialized proofs themselves, not just their reported sizes.
  std::set<std::size_t> sizes;
  for (std::size_t n : {1, 10, 100}) {
    vforward::ForwardVKeys keys = vforward::vf_keygen(rng);
    PlainDb db;
    for (std::size_t i = 0; i < n; ++i) db.add(Keyword("w"), oracle::random_id(rng));
    const vforward::ForwardBuild b = vforward::vf_build(keys, db, rng);
    const auto o = vforward::vf_search(keys, b.owner, b.cloud, Keyword("w"), vforward::Structure::kAdd);
    c.expect(o.accepted() && o.proof.has_value(), "bench keyword did not verify");
    if (o.proof) sizes.insert(o.proof->encode().size());
  }
  c.expect(sizes.size() == 1, "encoded proof sizes differ");

  return c.done("proof " + std::to_string(rows.empty() ? 0 : rows.front().proof_bytes) +
                " bytes for |R_w| in {1,10,100}; 2 pairings; n multiply-adds; n lookups, n-1 multiplications");
}

Outcome storage() {
  SeededRandom rng(1005);
  Check c;
  std::uint64_t batches = 0;
  for (int t = 0; t < 10; ++t) {
    oracle::Pairs pairs = oracle::random_pairs(rng, 30, 200);
    const PlainDb db = oracle::to_db(pairs);
    const auto inverted = oracle::invert(pairs);

    const vstatic::StaticVKeys skeys = vstatic::vs_keygen(rng);
    const vstatic::StaticBuild sb = vstatic::vs_build(skeys, db, rng);
    c.expect(sb.index.size() == pairs.size() + inverted.size(),
             "static index is not N + |W| entries");

    const vforward::ForwardVKeys keys = vforward::vf_keygen(rng);
    vforward::ForwardBuild fb = vforward::vf_build(keys, db, rng);
    std::size_t added = pairs.size(), deleted = 0;
    c.expect(fb.cloud.tsig.size() == added, "|T_sig| != N after build");
    c.expect(fb.cloud.index.size() == added, "chain index size != N after build");

    // Live pairs for deletions; added documents are always fresh.
    std::vector<std::pair<std::string, DocId>> live(pairs.begin(), pairs.end());
    for (int batch = 0; batch < 5; ++batch) {
      const std::size_t ops = 1 + rng.uniform(6);
      for (std::size_t i = 0; i < ops; ++i) {
        if (rng.uniform(3) != 0 || live.empty()) {
          const DocId id = oracle::random_id(rng);
          std::vector<Keyword> kws;
          std::set<std::string> seen;
          for (std::size_t j = 0, n = 1 + rng.uniform(3); j < n; ++j) {
            const std::string w = "kw" + std::to_string(rng.uniform(40));
            if (seen.insert(w).second) kws.emplace_back(w);
          }
          vforward::vf_apply_update(
              fb.cloud, vforward::vf_update_token(keys, id, kws, vforward::Structure::kAdd, fb.owner, rng));
          for (const auto& w : kws) live.push_back({w.text(), id});
          added += kws.size();
        } else {
          const std::size_t k = rng.uniform(live.size());
          const auto [w, id] = live[k];
          live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
          vforward::vf_apply_update(
              fb.cloud, vforward::vf_update_token(keys, id, {Keyword(w)}, vforward::Structure::kDel, fb.owner, rng));
          ++deleted;
        }
      }
      ++batches;
      c.expect(fb.cloud.tsig.size() == added, "|T_sig| != N after an update batch");
      c.expect(fb.cloud.del_tsig.size() == deleted, "deletion twin T_sig size mismatch");
    }
  }
  return c.done("10 databases, |T_sig| = N after build and " + std::to_string(batches) +
                " update batches; static overhead one tag per keyword");
}

Outcome forward_privacy() {
  SeededRandom rng(1006);
  Check c;
  std::uint64_t candidates = 0, matches = 0, new_positions = 0;
  for (int t = 0; t < 50; ++t) {
    const oracle::Pairs pairs = oracle::random_pairs(rng, 8, 40);
    const auto inverted = oracle::invert(pairs);
    const PlainDb db = oracle::to_db(pairs);
    std::vector<std::string> words;
    for (const auto& [w, ids] : inverted) words.push_back(w);

    const Keyword target(words[rng.uniform(words.size())]);
    sim::Script script;
    // Reveal the target's ids plus those of a few other keywords.
    script.push_back(sim::ScriptOp::search(target));
    for (int i = 0; i < 3; ++i) script.push_back(sim::ScriptOp::search(Keyword(words[rng.uniform(words.size())])));
    const std::size_t adds = 1 + rng.uniform(4);
    for (std::size_t i = 0; i < adds; ++i) {
      std::vector<Keyword> kws = {target};
      const std::string extra = words[rng.uniform(words.size())];
      if (extra != target.text()) kws.emplace_back(extra);
      new_positions += kws.size();
      script.push_back(sim::ScriptOp::add(oracle::random_id(rng), kws));
    }
    const sim::Transcript tr = sim::run_session(db, script, {}, rng);
    const sim::LeakageAuditResult r = sim::leakage_audit(tr);
    c.expect(r.pass, "leakage audit failed on " + r.field + ": " + r.detail);
    c.expect(r.candidates_checked > 0, "no candidate positions recomputed");
    candidates += r.candidates_checked;
    matches += r.forward_privacy_matches;
  }
  c.expect(matches == 0, std::to_string(matches) + " new positions recomputed");
  return c.done("50 sessions, " + std::to_string(candidates) + " candidate positions against " +
                std::to_string(new_positions) + " new positions, " + std::to_string(matches) +
                " matches");
}

Outcome deletion_twin() {
  SeededRandom rng(1007);
  Check c;
  std::uint64_t final_searches = 0, tampered = 0, tampered_rejected = 0, deletions = 0;
  for (int t = 0; t < 100; ++t) {
    const oracle::Pairs pairs = oracle::random_pairs(rng, 6, 30);
    const PlainDb db = oracle::to_db(pairs);
    sim::Script script = scripts::random_script(rng, db, 25, 8);

    // Oracle: add-list in insertion order minus the deleted set.
    std::map<std::string, std::vector<DocId>> add_list;
    std::map<std::string, std::set<DocId>> del_set;
    for (const auto& [w, id] : pairs) add_list[w].push_back(id);
    for (const auto& op : script) {
      for (const auto& w : op.keywords) {
        if (op.kind == sim::ScriptOp::Kind::kAdd) add_list[w.text()].push_back(op.id);
        if (op.kind == sim::ScriptOp::Kind::kDel) {
          del_set[w.text()].insert(op.id);
          ++deletions;
        }
      }
    }
    for (std::size_t k = 0; k < 8; ++k) script.push_back(sim::ScriptOp::search(Keyword("kw" + std::to_string(k))));

    const sim::Transcript honest = sim::run_session(db, script, {}, rng);
    const std::size_t first_final = honest.searches.size() - 8;
    for (std::size_t i = first_final; i < honest.searches.size(); ++i) {
      const sim::SearchRecord& s = honest.searches[i];
      std::vector<DocId> expected;
      for (const DocId& id : add_list[s.keyword]) {
        if (!del_set[s.keyword].count(id)) expected.push_back(id);
      }
      c.expect(s.accepted() && s.ids == expected, "final result differs from add-set minus del-set");
      ++final_searches;
    }

    for (sim::Strategy st : {sim::Strategy::kDropOne, sim::Strategy::kFlipIdBit, sim::Strategy::kForgeProof}) {
      for (vforward::Structure target : {vforward::Structure::kAdd, vforward::Structure::kDel}) {
        sim::AdversaryStrategy adv;
        adv.name = st;
        adv.target = target;
        adv.seed = rng.uniform(1u << 30);
        const sim::Transcript tr = sim::run_session(db, script, adv, rng);
        for (const sim::SearchRecord& s : tr.searches) {
          if (!s.tampered) continue;
          ++tampered;
          if (!s.accepted() && s.ids.empty()) ++tampered_rejected;
        }
      }
    }
  }
  c.expect(deletions > 0, "scripts contained no deletions");
  c.expect(tampered > 0 && tampered == tampered_rejected, "a tampered twin was accepted");
  return c.done("100 scripts, " + std::to_string(deletions) + " deletions, " +
                std::to_string(final_searches) + " final searches match; " +
                std::to_string(tampered_rejected) + "/" + std::to_string(tampered) +
                " tampered searches rejected");
}

Outcome crypto_vectors() {
  using namespace crypto;
  Check c;
  SymKey k;
  for (std::size_t i = 0; i < k.bytes.size(); ++i) k.bytes[i] = static_cast<std::uint8_t>(i);
  SymKey flipped = k;
  flipped.bytes[0] ^= 1;
  DocId id;
  for (std::size_t i = 0; i < id.bytes.size(); ++i) id.bytes[i] = static_cast<std::uint8_t>(i);

  c.expect(hash_to_scalar({}).hex() == kH2sEmpty, "hash_to_scalar(\"\")");
  c.expect(hash_to_scalar(as_bytes("abc")).hex() == kH2sAbc, "hash_to_scalar(\"abc\")");
  c.expect(to_hex(hmac_sha256(as_bytes("Jefe"), as_bytes("what do ya want for nothing?"))) ==
               kHmacRfc4231Case2,
           "hmac_sha256 RFC 4231 case 2");
  c.expect(to_hex(prf(k, as_bytes("hello"))) == kPrfKey0to31Hello, "prf");
  c.expect(to_hex(prf(flipped, as_bytes("hello"))) == kPrfKeyFlippedHello, "prf with flipped key");
  c.expect(to_hex(prf(k, concat(id.bytes, be64(3)))) == kPositionKey0to31Id0to15Idx3, "prf position");
  c.expect(prg_block(SymKey{}, 1).hex() == kPrgZeroSeed1, "prg_block 1");
  c.expect(prg_block(SymKey{}, 2).hex() == kPrgZeroSeed2, "prg_block 2");
  c.expect(to_hex(doc_name(id)) == kDocName0to15, "doc_name");
  c.expect(to_hex(G1Element::generator().to_bytes()) == kG1Generator, "G1 generator");
  c.expect(to_hex(G2Element::generator().to_bytes()) == kG2Generator, "G2 generator");
  c.expect(to_hex(bilinear_hash({}).to_bytes()) == kBilinearHashEmpty, "bilinear_hash");

  const Scalar sk = Scalar::from_bytes(from_hex(kBlsSk));
  const Scalar m = Scalar::from_bytes(from_hex(kBlsMsg));
  c.expect(to_hex(bls_keypair_from_secret(sk).pk.to_bytes()) == kBlsPk, "BLS public key");
  c.expect(to_hex(bls_sign(sk, m).to_bytes()) == kBlsSig, "BLS signature");
  c.expect(bls_verify_encoded(from_hex(kBlsPk), m, from_hex(kBlsSig)), "BLS verify");
  c.expect(!bls_verify_encoded(from_hex(kBlsPk), m + Scalar::one(), from_hex(kBlsSig)),
           "BLS verify of another message");

  SeededRandom rng(1009);
  const G1Element g1 = G1Element::generator();
  const G2Element g2 = G2Element::generator();
  const GtElement base = pairing(g1, g2);
  for (int t = 0; t < 200; ++t) {
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    c.expect(pairing(g1.pow(a), g2.pow(b)) == base.pow(a * b), "bilinearity");
  }
  for (int t = 0; t < 200; ++t) {
    const BlsKeyPair kp = bls_gen(rng);
    G1Element product;
    Scalar sum;
    for (std::size_t i = 0, n = 1 + rng.uniform(8); i < n; ++i) {
      const Scalar mi = Scalar::random(rng);
      const G1Element sig = bls_sign(kp.sk, mi);
      c.expect(bls_verify(kp.pk, mi, sig), "BLS round trip");
      product *= sig;
      sum += mi;
    }
    c.expect(product == bls_sign(kp.sk, sum), "aggregation identity");
    c.expect(bls_verify(kp.pk, sum, product), "aggregate verification");
  }
  return c.done("frozen vectors reproduce; 200 bilinearity and 200 aggregation cases");
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
  };
  CompletenessRun comp;
  bool comp_ran = false;
  auto completeness_once = [&]() -> const CompletenessRun& {
    if (!comp_ran) {
      comp = completeness();
      comp_ran = true;
    }
    return comp;
  };

  const std::vector<Criterion> criteria = {
      {"completeness", [&] { return completeness_once().completeness; }},
      {"correctness-equation", [&] { return completeness_once().equation; }},
      {"soundness-game", soundness},
      {"static-binding", static_binding},
      {"proof-cost-shape", proof_cost_shape},
      {"storage-accounting", storage},
      {"forward-privacy", forward_privacy},
      {"deletion-twin", deletion_twin},
      {"crypto-vectors", crypto_vectors},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failures;
    std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
