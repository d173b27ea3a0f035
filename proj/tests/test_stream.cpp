#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "hss/generators.hpp"
#include "hss/hgs_io.hpp"
#include "hss/oracle.hpp"
#include "hss/stream_engine.hpp"

using namespace hss;

namespace {

Hyperedge he(std::vector<VertexId> vs) { return Hyperedge(std::move(vs)); }

EngineConfig desk(EngineMode mode, uint32_t n, uint32_t r, uint64_t k, uint64_t seed,
                  std::map<std::string, double> overrides = {}) {
  return EngineConfig::resolve(mode, n, r, k, 0.5, seed, "desk", overrides);
}

Hypergraph materialize(const std::vector<StreamUpdate>& updates, uint32_t n, uint32_t r) {
  Hypergraph h(n, r);
  for (const auto& u : updates) h.apply(u);
  return h;
}

std::string hgw_bytes(const WeightedHypergraph& w) {
  std::ostringstream os;
  write_hgw(os, w);
  return os.str();
}

}  // namespace

TEST_CASE("offline strong components: levels refine and edges sample geometrically") {
  Rng rng(61);
  Hypergraph h(16, 3);
  auto updates = gen_uniform(16, 60, 2, 3, 5);
  for (const auto& u : updates) h.apply(u);
  auto parts = find_strong_components_offline(h, 99, 12);
  REQUIRE(parts.size() == 13);
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    CHECK(parts[i + 1].refines(parts[i]));  // laminar family
  }
  // empty graph: all singletons everywhere
  Hypergraph empty(8, 3);
  for (const auto& p : find_strong_components_offline(empty, 1, 6))
    CHECK(p.block_count() == 8);
  // complete graph: one component at level 0
  Hypergraph complete(8, 2);
  for (VertexId u = 0; u < 8; ++u)
    for (VertexId v = u + 1; v < 8; ++v) complete.insert(he({u, v}));
  CHECK(find_strong_components_offline(complete, 3, 6)[0].block_count() == 1);
  (void)rng;
}

TEST_CASE("offline components equal online trackers under a shared seed") {
  uint32_t n = 12, r = 4;
  auto updates = gen_uniform(n, 80, 2, 4, 17);
  uint64_t seed = 4242;
  EngineConfig cfg = desk(EngineMode::kInsertion, n, r, 0, seed);
  StreamEngine eng(cfg);
  for (const auto& u : updates) eng.update(u);

  Hypergraph h = materialize(updates, n, r);
  auto offline = find_strong_components_offline(h, seed, cfg.L_max);
  // engine trackers are not exposed directly; compare via live component
  // counts at every level (equality of partitions is implied by equal
  // construction; counts catch any divergence cheaply)
  for (uint32_t i = 0; i <= cfg.L_max; ++i) {
    uint32_t off = cfg.delta;
    if (i + off <= cfg.L_max)
      CHECK(offline[i + off].block_count() == eng.live_components(i));
  }
}

TEST_CASE("fresh engines are empty and recover nothing") {
  for (EngineMode mode : {EngineMode::kInsertion, EngineMode::kBounded,
                          EngineMode::kDynamic}) {
    StreamEngine eng(desk(mode, 8, 3, mode == EngineMode::kBounded ? 4 : 0, 7));
    SpaceReport rep = eng.space_report();
    CHECK(rep.total_nonzero_samplers == 0);
    CHECK(rep.total_bytes > 0);  // empty markers still cost bits
    auto out = eng.recover();
    CHECK(out.edge_count() == 0);
  }
}

TEST_CASE("config resolution and manifest echo") {
  auto cfg = desk(EngineMode::kBounded, 12, 5, 16, 3, {{"kappa", 4.0}, {"c_delta", 2.0}});
  CHECK(cfg.kappa == 4);
  CHECK(cfg.kappa_hat == 8);
  CHECK(cfg.c_delta == 2);
  CHECK(cfg.delta == 8);                       // 2 * ceil(log2 12)
  CHECK(cfg.delta_k == 2 * 8);                 // 2 * ceil(log2 192)
  CHECK(cfg.delta_k >= cfg.delta);
  auto manifest = cfg.manifest();
  bool saw_kappa = false;
  for (auto& [k, v] : manifest)
    if (k == "kappa") {
      saw_kappa = true;
      CHECK(v == "4");
    }
  CHECK(saw_kappa);
  // at k = 1 the bounded layout degenerates to the insertion layout plus
  // the connectivity bank: the two merge offsets coincide
  auto k1 = desk(EngineMode::kBounded, 12, 5, 1, 3);
  auto ins = desk(EngineMode::kInsertion, 12, 5, 0, 3);
  CHECK(k1.delta_k == ins.delta);
  CHECK_THROWS_AS(desk(EngineMode::kBounded, 12, 5, 0, 3), MalformedInput);
  CHECK_THROWS_AS(desk(EngineMode::kInsertion, 12, 5, 0, 3, {{"bogus", 1.0}}),
                  MalformedInput);
}

TEST_CASE("single edge stream recovers that edge at weight 1") {
  StreamEngine eng(desk(EngineMode::kInsertion, 6, 3, 0, 11));
  eng.insert(he({1, 4}));
  auto out = eng.recover();
  REQUIRE(out.edge_count() == 1);
  CHECK(out.weighted_edges().begin()->first == he({1, 4}));
  CHECK(out.weighted_edges().begin()->second == 1);
}

TEST_CASE("small streams recover everything at unit weight") {
  // m small: every edge has strength <= kappa, all land in F_0. Holds
  // whenever no tracker level at or above the merge offset fired (otherwise
  // an unbacked contraction may hide an edge: that is the desk-profile
  // failure budget, checked statistically elsewhere).
  int qualified = 0;
  for (uint64_t seed = 1; seed <= 30 && qualified < 10; ++seed) {
    auto updates = gen_uniform(8, 10, 2, 3, 23 + seed);
    Hypergraph h = materialize(updates, 8, 3);
    StreamEngine eng(desk(EngineMode::kInsertion, 8, 3, 0, seed));
    for (const auto& u : updates) eng.update(u);
    if (eng.live_components(0) != 8) continue;  // a contraction fired
    StrengthOracle oracle(OracleConfig{12});
    auto lambda = oracle.compute_strengths(h);
    bool all_low = true;
    for (const auto& [e, st] : lambda)
      all_low &= st.finite &&
                 st.value <= Rational(static_cast<int64_t>(eng.config().kappa));
    if (!all_low) continue;
    ++qualified;
    auto out = eng.recover();
    CHECK(out.edge_count() == h.edge_count());
    for (const auto& [e, w] : out.weighted_edges()) {
      CHECK(w == 1);
      CHECK(h.contains(e));
    }
  }
  CHECK(qualified >= 10);
}

TEST_CASE("insert-then-delete cancels all sketch state") {
  StreamEngine eng(desk(EngineMode::kBounded, 10, 4, 8, 31));
  auto updates = gen_uniform(10, 8, 2, 4, 41);
  for (const auto& u : updates) eng.update(u);
  CHECK(eng.space_report().total_nonzero_samplers > 0);
  for (const auto& u : updates) eng.update({u.edge, -1});
  CHECK(eng.space_report().total_nonzero_samplers == 0);
  auto out = eng.recover();
  CHECK(out.edge_count() == 0);
}

TEST_CASE("deletion budget is enforced") {
  StreamEngine eng(desk(EngineMode::kBounded, 8, 2, 2, 3));
  eng.insert(he({0, 1}));
  eng.insert(he({2, 3}));
  eng.insert(he({4, 5}));
  eng.update({he({0, 1}), -1});
  eng.update({he({2, 3}), -1});
  CHECK_THROWS_AS(eng.update({he({4, 5}), -1}), DeletionBudgetExceeded);
  StreamEngine ins(desk(EngineMode::kInsertion, 8, 2, 0, 3));
  ins.insert(he({0, 1}));
  CHECK_THROWS_AS(ins.update({he({0, 1}), -1}), MalformedInput);
}

TEST_CASE("arity-1 edges are carried through untouched") {
  StreamEngine eng(desk(EngineMode::kBounded, 6, 3, 4, 13));
  eng.insert(he({2}));
  eng.insert(he({0, 1}));
  eng.insert(he({4}));
  eng.update({he({4}), -1});
  auto out = eng.recover();
  CHECK(out.weighted_edges().count(he({2})) == 1);
  CHECK(out.weighted_edges().count(he({4})) == 0);
  CHECK(out.weighted_edges().at(he({2})) == 1);
}

TEST_CASE("dense insertion streams contract below n live components") {
  // with c_delta = 2 and m = n^3 the level-0 tracker must have merged
  int hits = 0, trials = 30;
  for (int t = 0; t < trials; ++t) {
    uint32_t n = 16;
    StreamEngine eng(desk(EngineMode::kInsertion, n, 5, 0, 900 + t,
                          {{"c_delta", 2.0}, {"kappa", 1.0}, {"M", 64.0}, {"c_s", 1.0}}));
    DistinctEdgeStream edges(n, 5, 77 + t);
    uint64_t m = std::min<uint64_t>(n * n * n, edges.capacity());
    for (uint64_t i = 0; i < m; ++i) eng.insert(edges.edge_at(i));
    if (eng.live_components(0) < n) ++hits;
  }
  CHECK(hits >= trials * 9 / 10);
}

TEST_CASE("recovered per-level sets match the oracle on the realized levels") {
  // reconstruct H_i from the final edge set and the level hashes, then
  // compare F_i with the oracle's low-strength set, exactly. Restricted to
  // runs where no tracker contraction fired, so the realized cascade is the
  // pure per-vertex one.
  int agree = 0, total = 0;
  for (int trial = 0; trial < 24 && total < 10; ++trial) {
    uint32_t n = 8 + (trial % 3);  // 8..10
    auto updates = gen_uniform(n, 20 + 5 * (trial % 4), 2, 4, 500 + trial);
    StreamEngine eng(desk(EngineMode::kInsertion, n, 4, 0, 1000 + trial));
    for (const auto& u : updates) eng.update(u);
    if (eng.live_components(0) != n) continue;
    ++total;

    std::vector<std::set<Hyperedge>> trace;
    WeightedHypergraph out = eng.recover(&trace);
    Hypergraph h = materialize(updates, n, 4);
    StrengthOracle oracle(OracleConfig{12});
    Rational kappa(static_cast<int64_t>(eng.config().kappa));

    // realized level hypergraphs: edges with L_kappa >= i minus recovered
    // edges from lower levels
    std::set<Hyperedge> removed;
    bool ok = true;
    for (uint32_t i = 0; i <= eng.config().L_max; ++i) {
      MultiEdgeList level;
      for (const auto& e : h.edges()) {
        if (e.arity() < 2) continue;
        if (removed.count(e)) continue;
        if (eng.level_kappa(e) >= i) level.emplace_back(e, 1);
      }
      auto lambda = oracle.compute_strengths(n, level);
      std::set<Hyperedge> expect;
      for (const auto& [e, st] : lambda)
        if (st.finite && st.value <= kappa) expect.insert(e);
      ok &= (trace[i] == expect);
      for (const auto& e : trace[i]) removed.insert(e);
    }
    agree += ok;
  }
  CHECK(total >= 8);
  CHECK(agree >= total - 1);  // probabilistic recovery; allow one miss
}

TEST_CASE("engine outputs are valid sparsifiers (smoke, all modes)") {
  int checked = 0, passed = 0;
  for (int trial = 0; trial < 8; ++trial) {
    uint32_t n = 10, r = 4;
    auto inserts = gen_uniform(n, 40 + 10 * trial, 2, r, 7100 + trial);
    auto bounded_stream = gen_deletion_heavy(n, 40 + 10 * trial, 2, r, 6, 7100 + trial);

    struct Run {
      EngineMode mode;
      const std::vector<StreamUpdate>* updates;
      uint64_t k;
    } runs[] = {
        {EngineMode::kInsertion, &inserts, 0},
        {EngineMode::kBounded, &bounded_stream, 6},
        {EngineMode::kDynamic, &bounded_stream, 0},
    };
    for (const auto& run : runs) {
      StreamEngine eng(desk(run.mode, n, r, run.k, 8200 + trial));
      for (const auto& u : *run.updates) eng.update(u);
      Hypergraph h = materialize(*run.updates, n, r);
      ++checked;
      try {
        auto out = eng.recover();
        if (verify_sparsifier(h, out, 0.5).pass) ++passed;
      } catch (const RecoveryFailure&) {
      }
    }
  }
  CHECK(passed >= checked - 2);
}

TEST_CASE("bounded engine with a deletion-free stream matches insertion output") {
  int equal = 0, total = 0;
  for (int trial = 0; trial < 10; ++trial) {
    uint32_t n = 9;
    auto updates = gen_uniform(n, 30, 2, 3, 60 + trial);
    uint64_t seed = 971 + static_cast<uint64_t>(trial);
    StreamEngine a(desk(EngineMode::kInsertion, n, 3, 0, seed));
    StreamEngine b(desk(EngineMode::kBounded, n, 3, 1, seed));
    for (const auto& u : updates) {
      a.update(u);
      b.update(u);
    }
    try {
      std::string wa = hgw_bytes(a.recover());
      std::string wb = hgw_bytes(b.recover());
      ++total;
      equal += (wa == wb);
    } catch (const RecoveryFailure&) {
    }
  }
  CHECK(equal >= total * 7 / 10);
}

TEST_CASE("determinism: identical stream, seed and config give identical bytes") {
  auto updates = gen_deletion_heavy(10, 60, 2, 4, 8, 333);
  for (EngineMode mode : {EngineMode::kBounded, EngineMode::kDynamic}) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      StreamEngine eng(desk(mode, 10, 4, 8, 90909));
      for (const auto& u : updates) eng.update(u);
      std::string bytes = hgw_bytes(eng.recover());
      if (run == 0)
        first = bytes;
      else
        CHECK(bytes == first);
    }
  }
}

TEST_CASE("space accounting: totals equal per-level sums, monotone until merges") {
  StreamEngine eng(desk(EngineMode::kInsertion, 12, 3, 0, 5511));
  auto updates = gen_uniform(12, 50, 2, 3, 8080);
  uint64_t prev = 0;
  uint64_t prev_live = 0;
  bool monotone = true;
  bool coarsen_only = true;
  for (const auto& u : updates) {
    eng.update(u);
    SpaceReport rep = eng.space_report();
    uint64_t sum = 0, live = 0;
    for (const auto& lv : rep.levels) {
      sum += lv.nonzero_samplers;
      live += lv.live_components;
    }
    CHECK(sum == rep.total_nonzero_samplers);
    // insertion-only trackers never split: live components only coarsen
    if (prev_live != 0) coarsen_only &= live <= prev_live;
    // totals may only drop when some component merge fired (cancelling
    // interior edges); live-component counts witness those merges
    if (live == prev_live) monotone &= rep.total_nonzero_samplers >= prev;
    prev = rep.total_nonzero_samplers;
    prev_live = live;
  }
  CHECK(coarsen_only);
  CHECK(monotone);
  CHECK(eng.space_report().peak_nonzero_samplers >=
        eng.space_report().total_nonzero_samplers);
}

TEST_CASE("stream generators") {
  auto uni = gen_uniform(8, 40, 2, 4, 1);
  CHECK(uni.size() == 40);
  std::set<Hyperedge> distinct;
  for (const auto& u : uni) {
    CHECK(u.delta == +1);
    distinct.insert(u.edge);
  }
  CHECK(distinct.size() == 40);

  auto del = gen_deletion_heavy(8, 30, 2, 3, 7, 2);
  uint64_t deletions = 0;
  Hypergraph h(8, 3);
  for (const auto& u : del) {
    h.apply(u);  // throws if a deletion precedes its insertion
    deletions += u.delta < 0;
  }
  CHECK(deletions == 7);
  CHECK(h.edge_count() == 23);

  auto planted = gen_planted(12, 3, 6, 4, 3);
  Hypergraph hp = materialize(planted, 12, 2);
  CHECK(hp.edge_count() == 3 * 6 + 4);

  DistinctEdgeStream des(10, 3, 5);
  CHECK(des.capacity() == 120);
  std::set<Hyperedge> seen;
  for (uint64_t i = 0; i < des.capacity(); ++i) seen.insert(des.edge_at(i));
  CHECK(seen.size() == des.capacity());  // a true permutation
}

TEST_CASE("planted blocks are strong above the cross edges") {
  StrengthOracle oracle(OracleConfig{12});
  auto updates = gen_planted(9, 3, 3, 3, 77);  // each block is a triangle
  Hypergraph h = materialize(updates, 9, 2);
  // each contiguous block of 3 vertices certifies above strength 1 while
  // the sparse cross edges stay at 1 or below
  for (uint32_t b = 0; b < 3; ++b) {
    std::vector<VertexId> block{b * 3, b * 3 + 1, b * 3 + 2};
    Strength st = oracle.component_strength(h, block);
    CHECK(Strength::of(Rational(1)) < st);
  }
}
