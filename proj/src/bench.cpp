#include "vsse/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "vsse/errors.hpp"
#include "vsse/forward_vsse.hpp"

namespace vsse::bench {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

template <typename F>
double time_us(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<std::size_t>& sizes,
                                std::size_t reps, RandomSource& rng) {
  if (reps < 5) throw InputError("benchmarks need at least 5 repetitions");
  using namespace vforward;
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    if (n == 0) throw InputError("benchmark sizes must be at least 1");
    const Keyword w("bench");
    PlainDb db;
    for (std::size_t i = 0; i < n; ++i) db.add(w, DocId{rng.bytes<DocId::kSize>()});
    const ForwardVKeys keys = vf_keygen(rng);
    const ForwardBuild b = vf_build(keys, db, rng);
    const ForwardSearchToken token = vf_search_token(keys, w, b.owner, Structure::kAdd);

    BenchRow row;
    row.result_size = n;
    row.tsig_entries = b.cloud.tsig.size();
    std::vector<double> owner, cloud, auditor;
    for (std::size_t r = 0; r < reps; ++r) {
      CloudAnswer answer;
      OwnerProof proof;
      bool ok = false;
      OpCountScope c;
      cloud.push_back(time_us([&] { answer = vf_cloud_search(b.cloud.index, b.cloud.tsig, token); }));
      row.cloud_ops = c.delta();
      OpCountScope o;
      owner.push_back(time_us([&] {
        proof = vf_owner_proof(keys, w, Structure::kAdd, answer.result, n);
      }));
      row.owner_ops = o.delta();
      OpCountScope a;
      auditor.push_back(time_us([&] { ok = vf_audit(keys.bls.pk, proof.pf_o, answer.pf_c); }));
      row.auditor_ops = a.delta();
      if (!proof.ok() || !ok) throw Error("benchmark search did not verify");
      row.proof_bytes = SearchProof{answer.pf_c, proof.pf_o}.encode().size();
    }
    row.owner_us = median(owner);
    row.cloud_us = median(cloud);
    row.auditor_us = median(auditor);
    rows.push_back(row);
  }
  return rows;
}

std::string to_tsv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "result_size\towner_us\tcloud_us\tauditor_us\tproof_bytes\ttsig_entries"
         "\towner_scalar_muls\towner_scalar_adds\tcloud_tsig_lookups"
         "\tcloud_g1_muls\tauditor_pairings\n";
  for (const BenchRow& r : rows) {
    out << r.result_size << '\t' << r.owner_us << '\t' << r.cloud_us << '\t'
        << r.auditor_us << '\t' << r.proof_bytes << '\t' << r.tsig_entries << '\t'
        << r.owner_ops.scalar_muls << '\t' << r.owner_ops.scalar_adds << '\t'
        << r.cloud_ops.tsig_lookups << '\t' << r.cloud_ops.g1_muls << '\t'
        << r.auditor_ops.pairings << '\n';
  }
  return out.str();
}

}  // namespace vsse::bench
