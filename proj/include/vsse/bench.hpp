#pragma once

// Per-role cost of one forward search as a function of the result size.

#include <string>
#include <vector>

#include "vsse/counters.hpp"
#include "vsse/random.hpp"

namespace vsse::bench {

struct BenchRow {
  std::size_t result_size = 0;
  // Wall-clock medians over the repetitions, in microseconds.
  double owner_us = 0;
  double cloud_us = 0;
  double auditor_us = 0;
  std::size_t proof_bytes = 0;
  std::size_t tsig_entries = 0;
  // Counted operations of a single repetition.
  OpCounts owner_ops;
  OpCounts cloud_ops;
  OpCounts auditor_ops;
};

// For each size builds a one-keyword database of that cardinality and times
// the cloud's answer, the owner's aggregation and the auditor's check.
// Throws InputError for a size of 0 or fewer than 5 repetitions.
std::vector<BenchRow> run_bench(const std::vector<std::size_t>& sizes,
                                std::size_t reps, RandomSource& rng);

std::string to_tsv(const std::vector<BenchRow>& rows);

}  // namespace vsse::bench
