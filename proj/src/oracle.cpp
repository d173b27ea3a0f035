#include "hss/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace hss {

namespace {

// Exhaustive minimum-normalized-k-cut search over all set partitions, in
// restricted-growth (lex) order, as a DFS with incremental crossing counts.
// A subtree is pruned when even the most favorable completion (every
// remaining vertex opening a new block, no new crossings) cannot beat the
// incumbent strictly; ties therefore all survive, which the deterministic
// most-blocks/lex tie-break and the randomized tie-break both rely on.
class KCutSearch {
 public:
  // edges as (vertex list, multiplicity) over local ids [0, k)
  KCutSearch(uint32_t k, const std::vector<std::vector<uint8_t>>& edges,
             const std::vector<uint64_t>& mult)
      : k_(k), mult_(mult), assign_(k, 0), crossed_(edges.size(), 0), probes_(k) {
    emin_.reserve(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
      uint8_t mn = edges[i][0];
      emin_.push_back(mn);
      for (uint8_t v : edges[i])
        if (v != mn) probes_[v].push_back(static_cast<uint32_t>(i));
    }
  }

  // visit(cross, blocks, assign) is called for every partition with >= 2
  // blocks that survives pruning; it returns true if it became the new
  // incumbent strictly (tightening the bound)
  template <class Visit>
  void run(uint64_t seed_cross, uint32_t seed_blocks, Visit&& visit) {
    best_cross_ = seed_cross;
    best_k_ = seed_blocks;
    visit_ = &visit;
    dfs<Visit>(1, 1, 0);
  }

 private:
  template <class Visit>
  void dfs(uint32_t v, uint32_t blocks, uint64_t cross) {
    if (v == k_) {
      if (blocks >= 2) {
        auto& visit = *static_cast<Visit*>(visit_);
        if (visit(cross, blocks, assign_)) {
          best_cross_ = cross;
          best_k_ = blocks;
        }
      }
      return;
    }
    for (uint32_t b = 0; b <= blocks; ++b) {
      assign_[v] = b;
      uint64_t added = 0;
      size_t undo_from = undo_.size();
      for (uint32_t eid : probes_[v]) {
        if (crossed_[eid]) continue;
        if (assign_[emin_[eid]] != b) {
          crossed_[eid] = 1;
          undo_.push_back(eid);
          added += mult_[eid];
        }
      }
      uint64_t ncross = cross + added;
      uint32_t nblocks = blocks + (b == blocks ? 1 : 0);
      // most favorable completion: every remaining vertex gets its own block
      uint32_t max_final_k = nblocks + (k_ - v - 1);
      bool prune = max_final_k < 2;
      if (!prune) {
        // prune iff ncross/(max_final_k-1) > best strictly
        __uint128_t lhs = static_cast<__uint128_t>(ncross) * (best_k_ - 1);
        __uint128_t rhs = static_cast<__uint128_t>(best_cross_) * (max_final_k - 1);
        prune = lhs > rhs;
      }
      if (!prune) dfs<Visit>(v + 1, nblocks, ncross);
      while (undo_.size() > undo_from) {
        crossed_[undo_.back()] = 0;
        undo_.pop_back();
      }
    }
  }

  uint32_t k_;
  const std::vector<uint64_t>& mult_;
  std::vector<uint32_t> assign_;
  std::vector<uint8_t> crossed_;
  std::vector<std::vector<uint32_t>> probes_;  // per vertex: incident edge ids (non-min)
  std::vector<uint8_t> emin_;
  std::vector<uint32_t> undo_;
  uint64_t best_cross_ = 0;
  uint32_t best_k_ = 2;
  void* visit_ = nullptr;
};

}  // namespace

// Localized subproblem over vertices relabeled to [0, k).
struct StrengthOracle::Sub {
  uint32_t k = 0;
  // arity >= 2 edges, vertices as local indices (sorted), with multiplicity
  std::vector<std::vector<uint8_t>> edges;
  std::vector<uint32_t> mult;
  std::vector<Hyperedge> original;  // aligned: global-id edge for output

  std::vector<uint64_t> canonical_key() const {
    std::vector<uint64_t> key;
    key.reserve(edges.size() + 1);
    key.push_back(k);
    std::vector<std::pair<uint64_t, uint64_t>> packed(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
      uint64_t code = edges[i].size();
      for (uint8_t v : edges[i]) code = (code << 4) | v;
      packed[i] = {code, mult[i]};
    }
    std::sort(packed.begin(), packed.end());
    for (auto& [c, m] : packed) {
      key.push_back(c);
      key.push_back(m);
    }
    return key;
  }
};

StrengthOracle::StrengthOracle(OracleConfig cfg) : cfg_(cfg) {}

void StrengthOracle::check_bound(uint32_t n) {
  if (n > 12 || n > std::max(cfg_.max_vertices, 12u))
    throw TooLarge("oracle: instance has " + std::to_string(n) + " vertices");
  if (n > cfg_.max_vertices) {
    if (n > 12) throw TooLarge("oracle: hard cap is 12 vertices");
    if (!warned_) {
      std::fprintf(stderr, "[oracle] warning: enumerating partitions of %u vertices\n", n);
      warned_ = true;
    }
  }
}

KCutResult StrengthOracle::min_normalized_kcut(const Hypergraph& h) {
  MultiEdgeList edges;
  for (const auto& e : h.edges()) edges.emplace_back(e, 1);
  return min_normalized_kcut(h.n(), edges);
}

std::vector<uint64_t> StrengthOracle::kcut_key(uint32_t n, const MultiEdgeList& edges) {
  std::vector<std::pair<uint64_t, uint64_t>> packed;
  packed.reserve(edges.size());
  for (const auto& [e, m] : edges) {
    uint64_t code = e.arity();
    for (VertexId v : e.vertices()) code = (code << 4) | v;
    packed.emplace_back(code, m);
  }
  std::sort(packed.begin(), packed.end());
  std::vector<uint64_t> key;
  key.reserve(2 * packed.size() + 1);
  key.push_back(n);
  for (auto& [c, m] : packed) {
    key.push_back(c);
    key.push_back(m);
  }
  return key;
}

KCutResult StrengthOracle::min_normalized_kcut(uint32_t n, const MultiEdgeList& edges) {
  if (n < 2) throw NoCut("min_normalized_kcut: need at least 2 vertices");
  check_bound(n);

  // Disconnected fast path: the all-components split has value 0 and the
  // most blocks among zero-value partitions.
  UnionFind uf(n);
  for (const auto& [e, m] : edges) {
    (void)m;
    for (size_t i = 1; i < e.vertices().size(); ++i)
      uf.unite(e.vertices()[0], e.vertices()[i]);
  }
  if (uf.components() > 1) {
    return KCutResult{Rational(0), uf.to_partition(), uf.components()};
  }

  std::vector<uint64_t> memo_key = kcut_key(n, edges);
  if (auto it = kcut_memo_.find(memo_key); it != kcut_memo_.end()) {
    auto& [cross, blocks, block_of] = it->second;
    return KCutResult{Rational(static_cast<int64_t>(cross), blocks - 1),
                      Partition(block_of), blocks};
  }

  std::vector<std::vector<uint8_t>> evs;
  std::vector<uint64_t> emult;
  uint64_t total = 0;
  for (const auto& [e, m] : edges) {
    if (e.arity() < 2) continue;
    std::vector<uint8_t> vs;
    for (VertexId v : e.vertices()) vs.push_back(static_cast<uint8_t>(v));
    evs.push_back(std::move(vs));
    emult.push_back(m);
    total += m;
  }

  uint64_t best_cross = 0;
  uint32_t best_k = 0;
  std::vector<uint32_t> best_rgs;
  bool have = false;

  KCutSearch search(n, evs, emult);
  // the all-singleton partition crosses everything: a valid starting bound
  search.run(total, n, [&](uint64_t cross, uint32_t kb, const std::vector<uint32_t>& a) {
    bool take = false, strict = false;
    if (!have) {
      take = true;
      strict = true;
    } else {
      __uint128_t lhs = static_cast<__uint128_t>(cross) * (best_k - 1);
      __uint128_t rhs = static_cast<__uint128_t>(best_cross) * (kb - 1);
      strict = lhs < rhs;
      take = strict || (lhs == rhs && kb > best_k);
      // equal value and equal block count: keep the first (lex smallest)
    }
    if (take) {
      have = true;
      best_cross = cross;
      best_k = kb;
      best_rgs = a;
    }
    return strict;
  });

  std::vector<VertexId> block_of(n);
  std::vector<VertexId> first_of_block(n, kMaxVertices);
  for (VertexId v = 0; v < n; ++v) {
    if (first_of_block[best_rgs[v]] == kMaxVertices) first_of_block[best_rgs[v]] = v;
    block_of[v] = first_of_block[best_rgs[v]];
  }
  kcut_memo_.emplace(std::move(memo_key), std::make_tuple(best_cross, best_k, block_of));
  return KCutResult{Rational(static_cast<int64_t>(best_cross), best_k - 1),
                    Partition(std::move(block_of)), best_k};
}

StrengthMap StrengthOracle::compute_strengths(const Hypergraph& h) {
  MultiEdgeList edges;
  for (const auto& e : h.edges()) edges.emplace_back(e, 1);
  return compute_strengths(h.n(), edges);
}

StrengthMap StrengthOracle::compute_strengths(uint32_t n, const MultiEdgeList& edges) {
  return compute_strengths(n, edges, TieBreak::kDeterministic, 0);
}

StrengthMap StrengthOracle::compute_strengths(uint32_t n, const MultiEdgeList& edges,
                                              TieBreak tb, uint64_t tie_seed) {
  check_bound(n);
  StrengthMap out;
  Sub root;
  root.k = n;
  for (const auto& [e, m] : edges) {
    if (e.arity() < 2) {
      out[e] = Strength::infinity();
      continue;
    }
    std::vector<uint8_t> vs;
    for (VertexId v : e.vertices()) vs.push_back(static_cast<uint8_t>(v));
    root.edges.push_back(std::move(vs));
    root.mult.push_back(m);
    root.original.push_back(e);
  }
  Rng tie_rng(tie_seed);
  solve(root, out, tb, tb == TieBreak::kRandomized ? &tie_rng : nullptr);
  return out;
}

// Splits into connected components, then hands each to the k-cut recursion.
void StrengthOracle::solve(Sub& sub, StrengthMap& out, TieBreak tb, Rng* tie_rng) {
  if (sub.edges.empty()) return;
  UnionFind uf(sub.k);
  for (const auto& vs : sub.edges)
    for (size_t i = 1; i < vs.size(); ++i) uf.unite(vs[0], vs[i]);

  if (uf.components() == 1) {
    solve_connected(sub, out, tb, tie_rng);
    return;
  }
  // group vertices by component, relabel, recurse
  std::map<VertexId, std::vector<uint8_t>> comp_vertices;
  for (uint32_t v = 0; v < sub.k; ++v)
    comp_vertices[uf.find(v)].push_back(static_cast<uint8_t>(v));
  for (auto& [root, verts] : comp_vertices) {
    Sub child;
    child.k = static_cast<uint32_t>(verts.size());
    std::vector<uint8_t> local(sub.k, 0xff);
    for (uint8_t i = 0; i < verts.size(); ++i) local[verts[i]] = i;
    for (size_t i = 0; i < sub.edges.size(); ++i) {
      if (uf.find(sub.edges[i][0]) != root) continue;
      std::vector<uint8_t> vs;
      for (uint8_t v : sub.edges[i]) vs.push_back(local[v]);
      child.edges.push_back(std::move(vs));
      child.mult.push_back(sub.mult[i]);
      child.original.push_back(sub.original[i]);
    }
    if (!child.edges.empty()) solve(child, out, tb, tie_rng);
  }
}

void StrengthOracle::solve_connected(Sub& sub, StrengthMap& out, TieBreak tb,
                                     Rng* tie_rng) {
  std::vector<uint64_t> key;
  if (tb == TieBreak::kDeterministic) {
    key = sub.canonical_key();
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      // memo stores strengths aligned with the canonical edge order
      std::vector<std::pair<uint64_t, size_t>> order(sub.edges.size());
      for (size_t i = 0; i < sub.edges.size(); ++i) {
        uint64_t code = sub.edges[i].size();
        for (uint8_t v : sub.edges[i]) code = (code << 4) | v;
        order[i] = {code, i};
      }
      std::sort(order.begin(), order.end());
      for (size_t pos = 0; pos < order.size(); ++pos)
        out[sub.original[order[pos].second]] = it->second[pos];
      return;
    }
  }

  // minimum normalized k-cut over the local vertex set
  std::vector<uint64_t> mult64(sub.mult.begin(), sub.mult.end());
  uint64_t total = 0;
  for (uint64_t m : mult64) total += m;

  uint64_t best_cross = 0;
  uint32_t best_k = 0;
  std::vector<uint32_t> best_rgs;
  uint64_t ties = 0;
  bool have = false;

  KCutSearch search(sub.k, sub.edges, mult64);
  search.run(total, sub.k, [&](uint64_t cross, uint32_t kb, const std::vector<uint32_t>& a) {
    bool take = false, tie = false, strict = false;
    if (!have) {
      take = true;
      strict = true;
      have = true;
    } else {
      __uint128_t lhs = static_cast<__uint128_t>(cross) * (best_k - 1);
      __uint128_t rhs = static_cast<__uint128_t>(best_cross) * (kb - 1);
      if (lhs < rhs) {
        take = true;
        strict = true;
      } else if (lhs == rhs) {
        if (tb == TieBreak::kDeterministic) {
          take = kb > best_k;
        } else {
          tie = true;  // any minimizer is fair game under randomized ties
        }
      }
    }
    if (tie && tie_rng) {
      ++ties;
      if (tie_rng->below(ties + 1) == 0) take = true;
    } else if (take) {
      ties = 0;
    }
    if (take) {
      best_cross = cross;
      best_k = kb;
      best_rgs = a;
    }
    return strict;
  });

  Rational phi(static_cast<int64_t>(best_cross), best_k - 1);

  // crossing edges take phi; contained edges recurse per block
  std::vector<Sub> children(best_k);
  std::vector<std::vector<uint8_t>> block_verts(best_k);
  for (uint32_t v = 0; v < sub.k; ++v) block_verts[best_rgs[v]].push_back(static_cast<uint8_t>(v));
  std::vector<std::vector<uint8_t>> local(best_k, std::vector<uint8_t>(sub.k, 0xff));
  for (uint32_t b = 0; b < best_k; ++b) {
    children[b].k = static_cast<uint32_t>(block_verts[b].size());
    for (uint8_t i = 0; i < block_verts[b].size(); ++i) local[b][block_verts[b][i]] = i;
  }

  for (size_t i = 0; i < sub.edges.size(); ++i) {
    uint32_t b = best_rgs[sub.edges[i][0]];
    bool crossing = false;
    for (uint8_t v : sub.edges[i])
      if (best_rgs[v] != b) {
        crossing = true;
        break;
      }
    if (crossing) {
      out[sub.original[i]] = Strength::of(phi);
    } else {
      std::vector<uint8_t> vs;
      for (uint8_t v : sub.edges[i]) vs.push_back(local[b][v]);
      children[b].edges.push_back(std::move(vs));
      children[b].mult.push_back(sub.mult[i]);
      children[b].original.push_back(sub.original[i]);
    }
  }
  for (auto& child : children)
    if (!child.edges.empty()) solve(child, out, tb, tie_rng);

  if (tb == TieBreak::kDeterministic) {
    std::vector<std::pair<uint64_t, size_t>> order(sub.edges.size());
    for (size_t i = 0; i < sub.edges.size(); ++i) {
      uint64_t code = sub.edges[i].size();
      for (uint8_t v : sub.edges[i]) code = (code << 4) | v;
      order[i] = {code, i};
    }
    std::sort(order.begin(), order.end());
    std::vector<Strength> vals;
    vals.reserve(order.size());
    for (auto& [code, idx] : order) {
      (void)code;
      vals.push_back(out.at(sub.original[idx]));
    }
    memo_.emplace(std::move(key), std::move(vals));
  }
}

Strength StrengthOracle::component_strength(const Hypergraph& h,
                                            const std::vector<VertexId>& s) {
  if (s.empty()) throw MalformedInput("component_strength: empty vertex set");
  std::vector<uint8_t> in(h.n(), 0);
  for (VertexId v : s) in[v] = 1;
  std::vector<VertexId> sorted(s);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<VertexId, VertexId> local;
  for (VertexId i = 0; i < sorted.size(); ++i) local[sorted[i]] = i;

  MultiEdgeList induced;
  for (const auto& e : h.edges()) {
    bool inside = true;
    for (VertexId v : e.vertices())
      if (!in[v]) {
        inside = false;
        break;
      }
    if (!inside) continue;
    std::vector<VertexId> vs;
    for (VertexId v : e.vertices()) vs.push_back(local[v]);
    induced.emplace_back(Hyperedge(vs), 1);
  }
  if (induced.empty()) return Strength::infinity();
  auto lambda = compute_strengths(static_cast<uint32_t>(sorted.size()), induced);
  Strength best = Strength::infinity();
  for (const auto& [e, st] : lambda)
    if (st < best) best = st;
  return best;
}

Partition StrengthOracle::strong_components_above(uint32_t n, const MultiEdgeList& edges,
                                                  const Rational& kappa) {
  Partition p = Partition::singletons(n);
  // recursion by explicit stack of (vertex subset, edge subset)
  struct Item {
    std::vector<VertexId> verts;
    MultiEdgeList edges;
  };
  std::vector<Item> stack;
  {
    Item root;
    root.verts.resize(n);
    std::iota(root.verts.begin(), root.verts.end(), 0u);
    root.edges = edges;
    stack.push_back(std::move(root));
  }
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.verts.size() < 2 || it.edges.empty()) continue;

    // localize
    std::map<VertexId, VertexId> local;
    for (VertexId i = 0; i < it.verts.size(); ++i) local[it.verts[i]] = i;
    MultiEdgeList localized;
    for (const auto& [e, m] : it.edges) {
      std::vector<VertexId> vs;
      for (VertexId v : e.vertices()) vs.push_back(local.at(v));
      localized.emplace_back(Hyperedge(vs), m);
    }
    KCutResult cut = min_normalized_kcut(static_cast<uint32_t>(it.verts.size()), localized);
    if (cut.value > kappa) {
      // the whole (connected) span is a strong component
      for (size_t i = 1; i < it.verts.size(); ++i) p.merge(it.verts[0], it.verts[i]);
      continue;
    }
    // split by the minimizing partition and recurse into blocks
    auto blocks = cut.partition.blocks();
    for (auto& [label, lverts] : blocks) {
      (void)label;
      if (lverts.size() < 2) continue;
      Item child;
      std::vector<uint8_t> inb(it.verts.size(), 0);
      for (VertexId lv : lverts) {
        child.verts.push_back(it.verts[lv]);
        inb[lv] = 1;
      }
      for (const auto& [e, m] : it.edges) {
        bool inside = true;
        for (VertexId v : e.vertices())
          if (!inb[local.at(v)]) {
            inside = false;
            break;
          }
        if (inside) child.edges.emplace_back(e, m);
      }
      if (!child.edges.empty()) stack.push_back(std::move(child));
    }
  }
  return p;
}

Rational StrengthOracle::reciprocal_strength_sum(const StrengthMap& lambda,
                                                 const MultiEdgeList& edges) {
  Rational sum(0);
  for (const auto& [e, m] : edges) {
    const Strength& st = lambda.at(e);
    if (!st.finite) continue;
    sum = sum + st.value.reciprocal() * Rational(static_cast<int64_t>(m));
  }
  return sum;
}

bool certified_stronger_than(uint32_t n, const MultiEdgeList& edges,
                             const std::vector<VertexId>& span, uint64_t kappa) {
  if (span.size() < 2) return true;
  std::vector<uint8_t> in(n, 0);
  for (VertexId v : span) in[v] = 1;

  uint32_t max_arity = 2;
  std::vector<std::pair<const Hyperedge*, uint32_t>> avail;  // edge, remaining copies
  for (const auto& [e, m] : edges) {
    bool inside = true;
    for (VertexId v : e.vertices())
      if (!in[v]) {
        inside = false;
        break;
      }
    if (!inside) continue;
    avail.emplace_back(&e, m);
    max_arity = std::max(max_arity, e.arity());
  }

  // A spanning connected subhypergraph of arity r crosses any p-partition at
  // least (p-1)/(r-1) times, so kappa*(r-1)+1 edge-disjoint ones certify
  // normalized cut value > kappa.
  uint64_t need = kappa * (max_arity - 1) + 1;
  for (uint64_t round = 0; round < need; ++round) {
    UnionFind uf(n);
    uint32_t comps = static_cast<uint32_t>(span.size());
    for (auto& [e, left] : avail) {
      if (left == 0 || comps == 1) continue;
      bool used = false;
      const auto& vs = e->vertices();
      for (size_t i = 1; i < vs.size(); ++i) {
        if (uf.unite(vs[0], vs[i])) {
          used = true;
          --comps;
        }
      }
      if (used) --left;
    }
    if (comps != 1) return false;
  }
  return true;
}

WeightedHypergraph static_sparsify(const Hypergraph& h, double eps, uint64_t seed,
                                   StrengthOracle& oracle, double C) {
  if (eps < 0) throw MalformedInput("static_sparsify: negative epsilon");
  auto lambda = oracle.compute_strengths(h);
  WeightedHypergraph out(h.n(), h.r());
  double logn = std::log2(std::max<uint32_t>(h.n(), 2));
  for (const auto& e : h.edges()) {
    const Strength& st = lambda.at(e);
    int j = 0;
    if (st.finite && eps > 0) {
      double p = C * logn / (eps * eps * st.value.to_double());
      if (p < 1.0) j = static_cast<int>(std::floor(std::log2(1.0 / p)));
      if (j > 62) j = 62;
    }
    // keep with probability exactly 2^-j
    U320 code = encode_edge(e, h.n());
    Rng rng(derive_key(seed, "static-sparsify",
                       {code.w[0], code.w[1], code.w[2], code.w[3], code.w[4]}));
    if (j == 0 || (rng.next() & ((1ull << j) - 1)) == 0) {
      out.add(e, 1ull << j);
    }
  }
  return out;
}

WeightedHypergraph simple_sparsify(const Hypergraph& h, double eps, uint64_t seed,
                                   StrengthOracle& oracle, double C) {
  if (eps <= 0) throw MalformedInput("simple_sparsify: epsilon must be positive");
  WeightedHypergraph out(h.n(), h.r());
  double logn = std::log2(std::max<uint32_t>(h.n(), 2));
  double lratio = std::log2(std::max(static_cast<double>(h.n()) / eps, 2.0));
  Rational threshold = Rational(static_cast<int64_t>(
      std::ceil(C * logn * lratio * lratio * lratio * lratio / (eps * eps))));

  std::set<Hyperedge> level(h.edges().begin(), h.edges().end());
  for (int i = 0; !level.empty(); ++i) {
    if (i > 62) throw RecoveryFailure("simple_sparsify: level overflow");
    MultiEdgeList edges;
    std::set<Hyperedge> arity1;
    for (const auto& e : level) {
      if (e.arity() < 2 && i == 0) {
        arity1.insert(e);  // unit edges cross no cut; emit once at level 0
        continue;
      }
      if (e.arity() < 2) continue;
      edges.emplace_back(e, 1);
    }
    auto lambda = oracle.compute_strengths(h.n(), edges);
    std::set<Hyperedge> next;
    for (const auto& [e, m] : edges) {
      (void)m;
      const Strength& st = lambda.at(e);
      if (st.finite && st.value <= threshold) {
        out.add(e, 1ull << i);
      } else {
        U320 code = encode_edge(e, h.n());
        Rng rng(derive_key(seed, "simple-sparsify",
                           {static_cast<uint64_t>(i), code.w[0], code.w[1], code.w[2],
                            code.w[3], code.w[4]}));
        if (rng.coin()) next.insert(e);
      }
    }
    for (const auto& e : arity1) out.add(e, 1);
    level = std::move(next);
  }
  return out;
}

}  // namespace hss
