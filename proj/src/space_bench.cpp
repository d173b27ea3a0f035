#include "hss/space_bench.hpp"

#include <atomic>
#include <ostream>
#include <thread>

#include "hss/generators.hpp"

namespace hss {

namespace {

BenchRow summarize(const std::string& label, const StreamEngine& eng) {
  SpaceReport rep = eng.space_report();
  BenchRow row;
  row.label = label;
  row.mode = mode_name(eng.config().mode);
  row.k = eng.config().k;
  row.updates = eng.update_count();
  row.nonzero_samplers = rep.total_nonzero_samplers;
  row.nonzero_testers = rep.total_nonzero_testers;
  row.bytes = rep.total_bytes;
  row.peak_nonzero_samplers = rep.peak_nonzero_samplers;
  row.peak_bytes = rep.peak_bytes;
  return row;
}

}  // namespace

std::vector<BenchRow> run_space_bench(const BenchConfig& cfg) {
  DistinctEdgeStream edges(cfg.n, cfg.arity, cfg.seed);

  struct Task {
    EngineMode mode;
    uint64_t k;
    uint64_t m;
    bool churn;  // k-matrix runs weave k insert-then-delete pairs in
    std::string label;
  };
  std::vector<Task> tasks;
  for (uint64_t k : cfg.ks) {
    if (cfg.base_edges + k > edges.capacity())
      throw MalformedInput("bench: stream longer than the distinct edge space");
    tasks.push_back({EngineMode::kBounded, k, cfg.base_edges, true, "k-matrix"});
  }
  if (cfg.compare_engines) {
    uint64_t m = cfg.compare_edges ? cfg.compare_edges
                                   : static_cast<uint64_t>(cfg.n) * cfg.n * cfg.n;
    if (m > edges.capacity())
      throw MalformedInput("bench: comparison stream exceeds distinct edge space");
    tasks.push_back({EngineMode::kInsertion, 0, m, false, "engine-compare"});
    tasks.push_back({EngineMode::kDynamic, 0, m, false, "engine-compare"});
  }

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) break;
      const Task& task = tasks[idx];
      EngineConfig ec = EngineConfig::resolve(task.mode, cfg.n, cfg.r, task.k, 0.5,
                                              cfg.seed, cfg.profile, cfg.overrides);
      StreamEngine eng(ec);
      if (task.churn) {
        // matched streams: identical base insertions for every k; churn
        // edges (insert then delete) come from past the base range so the
        // final hypergraph is identical across the matrix
        uint64_t churn_every =
            task.k ? std::max<uint64_t>(task.m / task.k, 1) : task.m + 1;
        uint64_t churned = 0;
        for (uint64_t i = 0; i < task.m; ++i) {
          eng.insert(edges.edge_at(i));
          if (churned < task.k && (i + 1) % churn_every == 0) {
            Hyperedge churn = edges.edge_at(task.m + churned);
            eng.insert(churn);
            eng.update({churn, -1});
            ++churned;
          }
        }
        while (churned < task.k) {
          Hyperedge churn = edges.edge_at(task.m + churned);
          eng.insert(churn);
          eng.update({churn, -1});
          ++churned;
        }
      } else {
        for (uint64_t i = 0; i < task.m; ++i) eng.insert(edges.edge_at(i));
      }
      rows[idx] = summarize(task.label, eng);
    }
  };

  uint32_t nthreads = std::max<uint32_t>(cfg.threads, 1);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (uint32_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "label,mode,k,updates,nonzero_samplers,nonzero_testers,bytes,"
        "peak_nonzero_samplers,peak_bytes\n";
  for (const auto& r : rows) {
    os << r.label << ',' << r.mode << ',' << r.k << ',' << r.updates << ','
       << r.nonzero_samplers << ',' << r.nonzero_testers << ',' << r.bytes << ','
       << r.peak_nonzero_samplers << ',' << r.peak_bytes << "\n";
  }
}

}  // namespace hss
