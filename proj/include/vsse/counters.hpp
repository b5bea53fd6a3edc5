#pragma once

#include <cstdint>

namespace vsse {

// Per-thread operation tallies. Cost claims (pairings per audit, multiply-adds
// per owner verification, cloud lookups) are checked against these counts
// rather than wall-clock time.
struct OpCounts {
  std::uint64_t pairings = 0;
  std::uint64_t g1_muls = 0;  // group operations (point additions) in G1
  std::uint64_t g1_exps = 0;
  std::uint64_t g2_exps = 0;
  std::uint64_t scalar_muls = 0;
  std::uint64_t scalar_adds = 0;
  std::uint64_t tsig_lookups = 0;
  std::uint64_t tag_macs = 0;  // keyword-bound tag computations

  OpCounts operator-(const OpCounts& o) const {
    return {pairings - o.pairings,         g1_muls - o.g1_muls,
            g1_exps - o.g1_exps,           g2_exps - o.g2_exps,
            scalar_muls - o.scalar_muls,   scalar_adds - o.scalar_adds,
            tsig_lookups - o.tsig_lookups, tag_macs - o.tag_macs};
  }
  bool operator==(const OpCounts&) const = default;
};

OpCounts& op_counts();

// Snapshot on construction; delta() reports what happened since.
class OpCountScope {
 public:
  OpCountScope() : start_(op_counts()) {}
  OpCounts delta() const { return op_counts() - start_; }

 private:
  OpCounts start_;
};

}  // namespace vsse
