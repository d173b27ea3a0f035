#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "hss/connsketch.hpp"
#include "hss/strengthsketch.hpp"

using namespace hss;

namespace {

Hyperedge he(std::vector<VertexId> vs) { return Hyperedge(std::move(vs)); }

std::vector<VertexId> position_labels(const Hyperedge& e, const Partition& p) {
  std::vector<VertexId> out;
  for (VertexId v : e.vertices()) out.push_back(p.block_of(v));
  return out;
}

// the exact signed incidence vector, as a map oracle
std::map<U320, int64_t> incidence_oracle(const std::vector<Hyperedge>& edges,
                                         const std::vector<VertexId>& members,
                                         uint32_t n) {
  std::set<VertexId> in(members.begin(), members.end());
  std::map<U320, int64_t> vec;
  for (const auto& e : edges) {
    int a = static_cast<int>(e.arity());
    for (VertexId v : e.vertices()) {
      if (!in.count(v)) continue;
      // v's row: (a-1) at (e,v), -1 at (e,u)
      for (VertexId u : e.vertices()) {
        U320 x = encode_incidence(e, u, n);
        vec[x] += (u == v) ? a - 1 : -1;
      }
    }
  }
  std::erase_if(vec, [](const auto& kv) { return kv.second == 0; });
  return vec;
}

Hypergraph random_graph(uint32_t n, uint32_t r, size_t m, Rng& rng) {
  Hypergraph h(n, r);
  size_t guard = 0;
  while (h.edge_count() < m && ++guard < m * 64) {
    uint32_t a = 2 + static_cast<uint32_t>(rng.below(std::min(r, n) - 1));
    std::set<VertexId> vs;
    while (vs.size() < a) vs.insert(static_cast<VertexId>(rng.below(n)));
    h.insert(Hyperedge(std::vector<VertexId>(vs.begin(), vs.end())));
  }
  return h;
}

std::string bank_state(SketchBank& bank, uint32_t n) {
  std::ostringstream os;
  for (auto& [label, sk] : bank.sketches()) {
    for (uint32_t b = 0; b < bank.config().num_banks; ++b) {
      for (uint32_t t = 0; t < bank.config().reps; ++t) {
        const L0Sampler* s = sk.sampler_if(b, t);
        if (s && !s->is_zero()) {
          os << label << ":" << b << ":" << t << ":";
          s->serialize(os);
        }
      }
    }
  }
  (void)n;
  return os.str();
}

}  // namespace

TEST_CASE("incidence encoding cancels exactly on full supernodes") {
  // oracle-level check of the signed encoding itself
  uint32_t n = 10;
  Hyperedge e = he({1, 4, 7});
  auto full = incidence_oracle({e}, {1, 4, 7}, n);
  CHECK(full.empty());  // summing all member rows zeroes the edge block
  auto part = incidence_oracle({e}, {1, 4}, n);
  // strict subset: every coordinate of e is nonzero
  CHECK(part.size() == 3);
  CHECK(part.at(encode_incidence(e, 1, n)) == 1);   // |e| - |S cap e| = 1
  CHECK(part.at(encode_incidence(e, 7, n)) == -2);  // -|S cap e|
}

TEST_CASE("conn bank: insert/delete cancellation and interior-edge no-op") {
  SeedContext seeds(5);
  BankConfig cfg = make_conn_config(8, 4, 0, 12, 1 << 12);
  SketchBank bank(cfg, seeds);
  Partition p = Partition::singletons(8);
  p.merge(1, 2);

  Hyperedge cross = he({1, 5});
  Hyperedge interior = he({1, 2});

  std::string empty = bank_state(bank, 8);
  bank.apply_edge(interior, position_labels(interior, p), +1);
  CHECK(bank_state(bank, 8) == empty);  // fully inside supernode 1

  bank.apply_edge(cross, position_labels(cross, p), +1);
  CHECK(bank_state(bank, 8) != empty);
  bank.apply_edge(cross, position_labels(cross, p), -1);
  CHECK(bank_state(bank, 8) == empty);
}

TEST_CASE("conn bank: two endpoints of one edge cancel after merging") {
  SeedContext seeds(6);
  SketchBank bank(make_conn_config(4, 2, 0, 8, 256), seeds);
  Partition p = Partition::singletons(4);
  Hyperedge e = he({0, 3});
  bank.apply_edge(e, position_labels(e, p), +1);
  REQUIRE(bank.find(0) != nullptr);
  REQUIRE(bank.find(3) != nullptr);
  // sampling either endpoint returns the edge
  auto out = bank.find(0)->sampler(0, 0).sample();
  REQUIRE(out.kind == SampleOutcome::kFound);
  auto dec = decode_incidence(out.coord, 4, 2);
  REQUIRE(dec.has_value());
  CHECK(dec->first == e);

  bank.merge(0, 3);
  CHECK(bank.find(0)->is_zero());
  CHECK(bank.find(3) == nullptr);
}

TEST_CASE("recover_components equals union-find truth on random graphs") {
  int exact = 0, sound = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(9000 + trial);
    uint32_t n = 32;
    Hypergraph h = random_graph(n, 4, 40 + rng.below(30), rng);

    SeedContext seeds(777 + static_cast<uint64_t>(trial));
    SketchBank bank(make_conn_config(n, 4, 0, 4 * 6, 1 << 16), seeds);
    Partition base = Partition::singletons(n);
    for (const auto& e : h.edges()) bank.apply_edge(e, position_labels(e, base), +1);

    UnionFind uf(n);
    for (const auto& e : h.edges())
      for (size_t i = 1; i < e.vertices().size(); ++i)
        uf.unite(e.vertices()[0], e.vertices()[i]);
    Partition truth = uf.to_partition();

    Partition got = base;
    bool failed = false;
    try {
      got = recover_components(bank, base);
    } catch (const RecoveryFailure&) {
      failed = true;
    }
    if (failed) continue;
    // soundness: never merges vertices that are disconnected in truth
    bool is_sound = got.refines(truth);
    sound += is_sound;
    exact += (got == truth);
  }
  CHECK(sound == trials);
  CHECK(exact >= trials * 95 / 100);
}

TEST_CASE("recover_components respects a coarsened base") {
  Rng rng(424);
  uint32_t n = 16;
  Hypergraph h = random_graph(n, 3, 20, rng);
  SeedContext seeds(31);
  SketchBank bank(make_conn_config(n, 3, 0, 24, 1 << 12), seeds);
  UnionFind pre(n);
  pre.unite(0, 1);
  Partition base = pre.to_partition();
  for (const auto& e : h.edges()) bank.apply_edge(e, position_labels(e, base), +1);
  Partition got = recover_components(bank, base);
  CHECK(base.refines(got));  // output coarsens the base
}

TEST_CASE("strength bank: bank membership is edge-determined and geometric") {
  SeedContext seeds(71);
  uint32_t n = 64;
  BankConfig cfg = make_strength_config(n, 4, 3, 12, 4, 1 << 12);
  SketchBank bank(cfg, seeds);
  SketchBank bank2(make_strength_config(n, 4, 9, 12, 4, 1 << 12), seeds);
  Rng rng(5150);
  std::vector<uint64_t> bucket(12, 0);
  const int total = 10000;
  for (int i = 0; i < total; ++i) {
    std::set<VertexId> vs;
    while (vs.size() < 3) vs.insert(static_cast<VertexId>(rng.below(n)));
    Hyperedge e(std::vector<VertexId>(vs.begin(), vs.end()));
    uint32_t g = bank.bank_of_edge(e);
    CHECK(bank2.bank_of_edge(e) == g);  // level-independent
    for (uint32_t b = 0; b <= g && b < 12; ++b) ++bucket[b];
  }
  // empirical bank population within 3 sigma of 2^-b
  for (uint32_t b = 1; b < 8; ++b) {
    double pb = std::pow(0.5, b);
    double sigma = std::sqrt(total * pb * (1 - pb));
    CHECK(std::abs(static_cast<double>(bucket[b]) - total * pb) <= 3.5 * sigma);
  }
}

TEST_CASE("strength bank: subtraction linearity is bit-exact") {
  // recover on (ingest H, subtract F) == recover on ingest (H - F)
  Rng rng(4242);
  uint32_t n = 12;
  Hypergraph h = random_graph(n, 4, 30, rng);
  std::vector<Hyperedge> all(h.edges().begin(), h.edges().end());
  std::set<Hyperedge> f;
  for (size_t i = 0; i < all.size(); i += 3) f.insert(all[i]);

  Partition base = Partition::singletons(n);
  SeedContext s1(99), s2(99);
  SketchBank a(make_strength_config(n, 4, 0, 10, 8, 1 << 10), s1);
  SketchBank b(make_strength_config(n, 4, 0, 10, 8, 1 << 10), s2);

  for (const auto& e : h.edges()) a.apply_edge(e, position_labels(e, base), +1);
  for (const auto& e : f) a.apply_edge(e, position_labels(e, base), -1);

  for (const auto& e : h.edges())
    if (!f.count(e)) b.apply_edge(e, position_labels(e, base), +1);

  CHECK(bank_state(a, n) == bank_state(b, n));
}

TEST_CASE("recover_low_strength on hand instances") {
  StrengthOracle oracle(OracleConfig{12});
  auto run = [&](const Hypergraph& h, uint64_t kappa) {
    SeedContext seeds(1234);
    uint32_t log_m = 12;
    RecoveryParams params;
    params.kappa = kappa;
    params.kappa_hat = 2 * kappa;
    params.decode_budget = static_cast<uint32_t>(8 * params.kappa_hat);
    uint32_t reps = static_cast<uint32_t>(4 * params.kappa_hat * log_m);
    SketchBank bank(make_strength_config(h.n(), h.r(), 0, log_m + 1, reps, 1ull << log_m),
                    seeds);
    Partition base = Partition::singletons(h.n());
    for (const auto& e : h.edges()) bank.apply_edge(e, position_labels(e, base), +1);
    return recover_low_strength(bank, base, params, oracle);
  };

  {
    Hypergraph tri(3, 2);
    tri.insert(he({0, 1}));
    tri.insert(he({1, 2}));
    tri.insert(he({0, 2}));
    CHECK(run(tri, 1).empty());       // strengths are all 3/2 > 1
    CHECK(run(tri, 2).size() == 3);   // 3/2 <= 2
  }
  {
    Hypergraph star(5, 2);
    for (VertexId i = 1; i < 5; ++i) star.insert(he({0, i}));
    auto rec = run(star, 1);
    CHECK(rec.size() == 4);  // all spokes have strength 1
  }
}

TEST_CASE("recover_low_strength matches the oracle on random instances") {
  int exact = 0, total = 0, sound = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(31000 + trial);
    uint32_t n = 6 + static_cast<uint32_t>(rng.below(5));  // 6..10
    Hypergraph h = random_graph(n, 4, 10 + rng.below(51), rng);
    uint64_t kappa = 1 + rng.below(4);

    StrengthOracle oracle(OracleConfig{12});
    auto lambda = oracle.compute_strengths(h);
    std::set<Hyperedge> truth;
    for (const auto& [e, st] : lambda)
      if (st.finite && st.value <= Rational(static_cast<int64_t>(kappa)))
        truth.insert(e);

    SeedContext seeds(52000 + static_cast<uint64_t>(trial));
    uint32_t log_m = 13;
    RecoveryParams params;
    params.kappa = kappa;
    params.kappa_hat = 2 * kappa;
    params.decode_budget = static_cast<uint32_t>(8 * params.kappa_hat);
    uint32_t reps = static_cast<uint32_t>(4 * params.kappa_hat * log_m);
    SketchBank bank(make_strength_config(n, 4, 0, log_m + 1, reps, 1ull << log_m), seeds);
    Partition base = Partition::singletons(n);
    for (const auto& e : h.edges()) bank.apply_edge(e, position_labels(e, base), +1);

    ++total;
    std::set<Hyperedge> got;
    StrengthOracle rec_oracle(OracleConfig{12});
    try {
      got = recover_low_strength(bank, base, params, rec_oracle);
    } catch (const RecoveryFailure&) {
      continue;  // probabilistic failure budget
    }
    bool subset_ok = true;
    for (const auto& e : got) subset_ok &= h.contains(e);
    sound += subset_ok;
    exact += (got == truth);
  }
  CHECK(sound == total);
  CHECK(exact >= total * 90 / 100);
}
