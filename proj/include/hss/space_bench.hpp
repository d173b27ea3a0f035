#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hss/stream_engine.hpp"

namespace hss {

// Space-scaling probes: a k-matrix of bounded-deletion runs over matched
// streams (same base insertions, k extra insert-then-delete churn pairs),
// plus an insertion-vs-dynamic comparison on one long insertion-only stream.

struct BenchRow {
  std::string label;
  std::string mode;
  uint64_t k = 0;
  uint64_t updates = 0;
  uint64_t nonzero_samplers = 0;
  uint64_t nonzero_testers = 0;
  uint64_t bytes = 0;
  uint64_t peak_nonzero_samplers = 0;
  uint64_t peak_bytes = 0;
};

struct BenchConfig {
  uint32_t n = 256;
  uint32_t r = 4;
  uint32_t arity = 3;          // fixed arity of synthetic edges
  uint64_t base_edges = 1 << 18;
  std::vector<uint64_t> ks;    // bounded-mode deletion budgets
  bool compare_engines = false;
  uint64_t compare_edges = 0;  // 0: n^3
  uint64_t seed = 1;
  std::string profile = "desk";
  std::map<std::string, double> overrides;
  uint32_t threads = 1;        // runs are independent; rows stay ordered
};

std::vector<BenchRow> run_space_bench(const BenchConfig& cfg);

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace hss
