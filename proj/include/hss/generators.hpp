#pragma once

#include <vector>

#include "hss/hashing.hpp"
#include "hss/hypergraph.hpp"

namespace hss {

// Synthetic stream generators for tests and benchmarks. All are
// deterministic in (parameters, seed).

// m distinct edges, arity uniform in [arity_min, arity_max], insertions only.
std::vector<StreamUpdate> gen_uniform(uint32_t n, uint64_t m, uint32_t arity_min,
                                      uint32_t arity_max, uint64_t seed);

// Dense blocks (strong components by construction) joined by sparse cross
// edges; exercises contraction.
std::vector<StreamUpdate> gen_planted(uint32_t n, uint32_t blocks,
                                      uint64_t intra_per_block, uint64_t cross_edges,
                                      uint64_t seed);

// Insert m distinct edges with k deletions of previously inserted edges
// interleaved into the suffix of the stream.
std::vector<StreamUpdate> gen_deletion_heavy(uint32_t n, uint64_t m, uint32_t arity_min,
                                             uint32_t arity_max, uint64_t k, uint64_t seed);

// O(1)-memory enumeration of distinct fixed-arity edges in a pseudorandom
// order: a Feistel permutation of combination ranks. Backs the large
// benchmark streams where a dedupe set would not fit.
class DistinctEdgeStream {
 public:
  DistinctEdgeStream(uint32_t n, uint32_t arity, uint64_t seed);

  uint64_t capacity() const { return capacity_; }
  // i-th edge of the permutation, i < capacity()
  Hyperedge edge_at(uint64_t index) const;

 private:
  uint64_t permute(uint64_t x) const;

  uint32_t n_;
  uint32_t arity_;
  uint64_t capacity_;
  uint32_t bits_;
  Key128 key_;
  std::vector<uint64_t> choose_;  // binomials [v][j], j <= arity
};

}  // namespace hss
