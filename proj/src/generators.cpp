#include "hss/generators.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace hss {

namespace {

Hyperedge random_edge(uint32_t n, uint32_t arity, Rng& rng) {
  std::set<VertexId> vs;
  while (vs.size() < arity) vs.insert(static_cast<VertexId>(rng.below(n)));
  return Hyperedge(std::vector<VertexId>(vs.begin(), vs.end()));
}

uint64_t binom(uint64_t n, uint32_t k) {
  if (k > n) return 0;
  __uint128_t r = 1;
  for (uint32_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (static_cast<__uint128_t>(1) << 62))
      throw MalformedInput("binom: combination space too large");
  }
  return static_cast<uint64_t>(r);
}

}  // namespace

std::vector<StreamUpdate> gen_uniform(uint32_t n, uint64_t m, uint32_t arity_min,
                                      uint32_t arity_max, uint64_t seed) {
  if (arity_min < 1 || arity_max < arity_min || arity_max > std::min(n, kMaxArity))
    throw MalformedInput("gen_uniform: bad arity range");
  Rng rng(derive_key(seed, "gen-uniform"));
  std::set<Hyperedge> seen;
  std::vector<StreamUpdate> out;
  uint64_t attempts = 0, max_attempts = m * 64 + 1024;
  while (out.size() < m) {
    if (++attempts > max_attempts)
      throw MalformedInput("gen_uniform: edge space too small for m distinct edges");
    uint32_t a = arity_min + static_cast<uint32_t>(rng.below(arity_max - arity_min + 1));
    Hyperedge e = random_edge(n, a, rng);
    if (seen.insert(e).second) out.push_back({e, +1});
  }
  return out;
}

std::vector<StreamUpdate> gen_planted(uint32_t n, uint32_t blocks,
                                      uint64_t intra_per_block, uint64_t cross_edges,
                                      uint64_t seed) {
  if (blocks < 2 || blocks > n) throw MalformedInput("gen_planted: need 2 <= blocks <= n");
  Rng rng(derive_key(seed, "gen-planted"));
  // near-equal contiguous blocks
  std::vector<std::pair<VertexId, VertexId>> span(blocks);  // [lo, hi)
  for (uint32_t b = 0; b < blocks; ++b) {
    span[b] = {static_cast<VertexId>(static_cast<uint64_t>(n) * b / blocks),
               static_cast<VertexId>(static_cast<uint64_t>(n) * (b + 1) / blocks)};
    if (span[b].second - span[b].first < 2)
      throw MalformedInput("gen_planted: blocks too small");
  }
  std::set<Hyperedge> seen;
  std::vector<StreamUpdate> out;
  auto push_unique = [&](const Hyperedge& e) {
    if (seen.insert(e).second) {
      out.push_back({e, +1});
      return true;
    }
    return false;
  };
  for (uint32_t b = 0; b < blocks; ++b) {
    auto [lo, hi] = span[b];
    uint64_t want = intra_per_block, guard = 0;
    while (want > 0) {
      if (++guard > intra_per_block * 64 + 1024)
        throw MalformedInput("gen_planted: block too dense for distinct edges");
      VertexId u = lo + static_cast<VertexId>(rng.below(hi - lo));
      VertexId v = lo + static_cast<VertexId>(rng.below(hi - lo));
      if (u == v) continue;
      if (push_unique(Hyperedge({u, v}))) --want;
    }
  }
  uint64_t want = cross_edges, guard = 0;
  while (want > 0) {
    if (++guard > cross_edges * 64 + 1024)
      throw MalformedInput("gen_planted: cross space too small");
    uint32_t b1 = static_cast<uint32_t>(rng.below(blocks));
    uint32_t b2 = static_cast<uint32_t>(rng.below(blocks));
    if (b1 == b2) continue;
    VertexId u = span[b1].first + static_cast<VertexId>(rng.below(span[b1].second - span[b1].first));
    VertexId v = span[b2].first + static_cast<VertexId>(rng.below(span[b2].second - span[b2].first));
    if (push_unique(Hyperedge({u, v}))) --want;
  }
  return out;
}

std::vector<StreamUpdate> gen_deletion_heavy(uint32_t n, uint64_t m, uint32_t arity_min,
                                             uint32_t arity_max, uint64_t k, uint64_t seed) {
  if (k > m) throw MalformedInput("gen_deletion_heavy: k exceeds m");
  auto inserts = gen_uniform(n, m, arity_min, arity_max, seed);
  Rng rng(derive_key(seed, "gen-del-positions"));
  // choose k distinct victims, then interleave each deletion uniformly after
  // its insertion
  std::set<uint64_t> victims;
  while (victims.size() < k) victims.insert(rng.below(m));

  struct Timed {
    uint64_t time;
    uint64_t tiebreak;
    StreamUpdate u;
  };
  std::vector<Timed> events;
  events.reserve(m + k);
  for (uint64_t i = 0; i < m; ++i) events.push_back({2 * i, 0, inserts[i]});
  for (uint64_t v : victims) {
    uint64_t t = 2 * v + 1 + 2 * rng.below(m - v);  // odd slot after insertion
    events.push_back({t, rng.next(), {inserts[v].edge, -1}});
  }
  std::stable_sort(events.begin(), events.end(), [](const Timed& a, const Timed& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.tiebreak < b.tiebreak;
  });
  std::vector<StreamUpdate> out;
  out.reserve(events.size());
  for (auto& ev : events) out.push_back(std::move(ev.u));
  return out;
}

DistinctEdgeStream::DistinctEdgeStream(uint32_t n, uint32_t arity, uint64_t seed)
    : n_(n), arity_(arity), capacity_(binom(n, arity)),
      bits_(std::max<uint32_t>(2, static_cast<uint32_t>(std::bit_width(capacity_ ? capacity_ - 1 : 1)))),
      key_(derive_key(seed, "distinct-edges")) {
  if (arity < 1 || arity > std::min(n, kMaxArity))
    throw MalformedInput("DistinctEdgeStream: bad arity");
  if (bits_ % 2) ++bits_;
  choose_.assign(static_cast<size_t>(n + 1) * (arity + 1), 0);
  for (uint32_t v = 0; v <= n; ++v)
    for (uint32_t j = 0; j <= arity; ++j)
      choose_[v * (arity + 1) + j] = binom(v, j);
}

uint64_t DistinctEdgeStream::permute(uint64_t x) const {
  // balanced Feistel with cycle walking to stay below capacity
  const uint32_t half = bits_ / 2;
  const uint64_t mask = (1ull << half) - 1;
  do {
    uint64_t l = x >> half, r = x & mask;
    for (int round = 0; round < 4; ++round) {
      uint64_t f = mix64(key_.a ^ (r + 0x9e3779b97f4a7c15ull * (round + 1)) ^ key_.b) & mask;
      uint64_t nl = r, nr = l ^ f;
      l = nl;
      r = nr;
    }
    x = (l << half) | r;
  } while (x >= capacity_);
  return x;
}

Hyperedge DistinctEdgeStream::edge_at(uint64_t index) const {
  if (index >= capacity_) throw MalformedInput("DistinctEdgeStream: index past capacity");
  uint64_t rank = permute(index);
  // combinatorial number system, descending
  std::vector<VertexId> vs(arity_);
  uint64_t rem = rank;
  uint32_t v = n_;
  for (uint32_t i = arity_; i-- > 0;) {
    // largest c with binom(c, i+1) <= rem
    while (choose_[(v - 1) * (arity_ + 1) + i + 1] > rem) --v;
    --v;
    vs[i] = static_cast<VertexId>(v);
    rem -= choose_[v * (arity_ + 1) + i + 1];
  }
  return Hyperedge(vs);
}

}  // namespace hss
