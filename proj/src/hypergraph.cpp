#include "hss/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hss {

Hyperedge::Hyperedge(std::vector<VertexId> vs) : vs_(std::move(vs)) {
  if (vs_.empty()) throw MalformedInput("hyperedge: empty vertex set");
  std::sort(vs_.begin(), vs_.end());
  if (std::adjacent_find(vs_.begin(), vs_.end()) != vs_.end())
    throw MalformedInput("hyperedge: duplicate vertex");
}

bool Hyperedge::contains(VertexId v) const {
  return std::binary_search(vs_.begin(), vs_.end(), v);
}

std::string Hyperedge::to_string() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < vs_.size(); ++i) os << (i ? "," : "") << vs_[i];
  os << "}";
  return os.str();
}

unsigned vertex_bits(uint32_t n) {
  if (n <= 2) return 1;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

U320 encode_edge(const Hyperedge& e, uint32_t n) {
  unsigned b = vertex_bits(n);
  U320 code = U320::from_u64(e.arity());  // occupies the top 16-bit field
  for (VertexId v : e.vertices()) code = code.shifted_in(b, v);
  return code;
}

std::optional<Hyperedge> decode_edge(const U320& code, uint32_t n, uint32_t r) {
  unsigned b = vertex_bits(n);
  for (uint32_t a = 1; a <= r; ++a) {
    U320 top = code.shifted_right(a * b);
    if (top.w[1] || top.w[2] || top.w[3] || top.w[4]) continue;
    if (top.w[0] != a) continue;
    std::vector<VertexId> vs(a);
    for (uint32_t i = 0; i < a; ++i) {
      uint64_t field = code.shifted_right((a - 1 - i) * b).low_bits(b);
      if (field >= n) goto next;
      vs[i] = static_cast<VertexId>(field);
    }
    for (uint32_t i = 1; i < a; ++i)
      if (vs[i] <= vs[i - 1]) goto next;
    return Hyperedge(vs);
  next:;
  }
  return std::nullopt;
}

U320 encode_incidence(const U320& edge_code, VertexId member, uint32_t n) {
  return edge_code.shifted_in(vertex_bits(n), member);
}

U320 encode_incidence(const Hyperedge& e, VertexId member, uint32_t n) {
  return encode_incidence(encode_edge(e, n), member, n);
}

std::optional<std::pair<Hyperedge, VertexId>> decode_incidence(const U320& coord,
                                                               uint32_t n, uint32_t r) {
  unsigned b = vertex_bits(n);
  uint64_t member = coord.low_bits(b);
  if (member >= n) return std::nullopt;
  auto edge = decode_edge(coord.shifted_right(b), n, r);
  if (!edge) return std::nullopt;
  if (!edge->contains(static_cast<VertexId>(member))) return std::nullopt;
  return std::make_pair(*edge, static_cast<VertexId>(member));
}

Hypergraph::Hypergraph(uint32_t n, uint32_t r) : n_(n), r_(r) {
  if (n == 0 || n > kMaxVertices) throw MalformedInput("hypergraph: n out of range");
  if (r == 0 || r > kMaxArity) throw MalformedInput("hypergraph: r out of range");
}

void Hypergraph::check_edge(const Hyperedge& e) const {
  if (e.arity() > r_) throw MalformedInput("edge arity exceeds r: " + e.to_string());
  if (e.vertices().back() >= n_)
    throw MalformedInput("edge vertex out of range: " + e.to_string());
}

void Hypergraph::insert(const Hyperedge& e) {
  check_edge(e);
  edges_.insert(e);
}

void Hypergraph::erase(const Hyperedge& e) { edges_.erase(e); }

void Hypergraph::apply(const StreamUpdate& u) {
  check_edge(u.edge);
  if (u.delta == +1) {
    if (!edges_.insert(u.edge).second)
      throw MalformedInput("duplicate insert of live edge " + u.edge.to_string());
  } else if (u.delta == -1) {
    if (edges_.erase(u.edge) == 0)
      throw MalformedInput("delete of absent edge " + u.edge.to_string());
  } else {
    throw MalformedInput("stream delta must be +/-1");
  }
}

void WeightedHypergraph::add(const Hyperedge& e, uint64_t weight) {
  if (weight == 0) throw MalformedInput("weighted edge with zero weight");
  edges_[e] += weight;
}

Partition Partition::singletons(uint32_t n) {
  Partition p;
  p.block_of_.resize(n);
  std::iota(p.block_of_.begin(), p.block_of_.end(), 0u);
  return p;
}

Partition::Partition(std::vector<VertexId> block_of) : block_of_(std::move(block_of)) {
  // input labels are arbitrary group markers; normalize every block to its
  // minimum member so equal partitions compare equal
  std::map<VertexId, VertexId> min_of;
  for (VertexId v = 0; v < block_of_.size(); ++v) {
    auto [it, fresh] = min_of.try_emplace(block_of_[v], v);
    if (!fresh) it->second = std::min(it->second, v);
  }
  for (auto& l : block_of_) l = min_of.at(l);
}

uint32_t Partition::block_count() const {
  uint32_t c = 0;
  for (VertexId v = 0; v < block_of_.size(); ++v)
    if (block_of_[v] == v) ++c;
  return c;
}

std::map<VertexId, std::vector<VertexId>> Partition::blocks() const {
  std::map<VertexId, std::vector<VertexId>> bs;
  for (VertexId v = 0; v < block_of_.size(); ++v) bs[block_of_[v]].push_back(v);
  return bs;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.n() != n()) return false;
  for (VertexId v = 0; v < block_of_.size(); ++v) {
    if (coarser.block_of_[block_of_[v]] != coarser.block_of_[v]) return false;
  }
  return true;
}

void Partition::merge(VertexId a, VertexId b) {
  VertexId la = block_of_[a], lb = block_of_[b];
  if (la == lb) return;
  VertexId keep = std::min(la, lb), drop = std::max(la, lb);
  for (auto& l : block_of_)
    if (l == drop) l = keep;
}

UnionFind::UnionFind(uint32_t n) : parent_(n), size_(n, 1), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0u);
}

VertexId UnionFind::find(VertexId x) const {
  VertexId root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    VertexId next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(VertexId a, VertexId b) {
  VertexId ra = find(a), rb = find(b);
  if (ra == rb) return false;
  // keep the smaller id as representative so labels are deterministic
  if (ra > rb) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  --components_;
  return true;
}

Partition UnionFind::to_partition() const {
  std::vector<VertexId> bo(parent_.size());
  for (VertexId v = 0; v < parent_.size(); ++v) bo[v] = find(v);
  return Partition(std::move(bo));
}

namespace {

std::vector<uint8_t> cut_mask(uint32_t n, const std::vector<VertexId>& s) {
  std::vector<uint8_t> in(n, 0);
  for (VertexId v : s) {
    if (v >= n) throw InvalidCut("cut side contains out-of-range vertex");
    in[v] = 1;
  }
  size_t count = 0;
  for (uint8_t b : in) count += b;
  if (count == 0) throw InvalidCut("cut side is empty");
  if (count == n) throw InvalidCut("cut side is the whole vertex set");
  return in;
}

bool straddles(const Hyperedge& e, const std::vector<uint8_t>& in) {
  bool any_in = false, any_out = false;
  for (VertexId v : e.vertices()) {
    (in[v] ? any_in : any_out) = true;
    if (any_in && any_out) return true;
  }
  return false;
}

}  // namespace

uint64_t cut_value(const Hypergraph& h, const std::vector<VertexId>& s) {
  auto in = cut_mask(h.n(), s);
  uint64_t total = 0;
  for (const auto& e : h.edges())
    if (straddles(e, in)) ++total;
  return total;
}

uint64_t cut_value(const WeightedHypergraph& h, const std::vector<VertexId>& s) {
  auto in = cut_mask(h.n(), s);
  uint64_t total = 0;
  for (const auto& [e, w] : h.weighted_edges())
    if (straddles(e, in)) total += w;
  return total;
}

ContractResult contract(const Hypergraph& h, const Partition& p) {
  if (p.n() != h.n()) throw MalformedInput("contract: partition size mismatch");
  std::vector<VertexId> labels;
  for (VertexId v = 0; v < h.n(); ++v)
    if (p.block_of(v) == v) labels.push_back(v);
  std::map<VertexId, VertexId> dense;
  for (VertexId i = 0; i < labels.size(); ++i) dense[labels[i]] = i;

  std::vector<VertexId> vmap(h.n());
  for (VertexId v = 0; v < h.n(); ++v) vmap[v] = dense[p.block_of(v)];

  ContractResult res{Hypergraph(static_cast<uint32_t>(labels.size()), h.r()), vmap,
                     labels, {}};
  for (const auto& e : h.edges()) {
    std::set<VertexId> touched;
    for (VertexId v : e.vertices()) touched.insert(vmap[v]);
    if (touched.size() <= 1) continue;  // fully inside one block
    Hyperedge img(std::vector<VertexId>(touched.begin(), touched.end()));
    res.graph.insert(img);
    res.preimage_count[img] += 1;
  }
  return res;
}

VerifyReport verify_sparsifier(const Hypergraph& h, const WeightedHypergraph& s,
                               double eps, uint32_t exhaustive_bound) {
  if (h.n() > exhaustive_bound)
    throw TooLarge("verify_sparsifier: n exceeds exhaustive bound");
  if (eps < 0) throw MalformedInput("verify_sparsifier: negative epsilon");
  for (const auto& [e, w] : s.weighted_edges()) {
    if (!h.contains(e)) throw NotASubgraph("sparsifier edge not in original: " + e.to_string());
  }

  VerifyReport rep;
  rep.pass = true;
  uint32_t n = h.n();
  if (n < 2) return rep;

  double worst_dev = -1.0;
  // enumerate all cuts with vertex 0 on the S side; skip S = V
  uint64_t masks = 1ull << (n - 1);
  for (uint64_t m = 0; m + 1 < masks; ++m) {
    std::vector<VertexId> side{0};
    for (uint32_t v = 1; v < n; ++v)
      if (m & (1ull << (v - 1))) side.push_back(v);
    uint64_t orig = cut_value(h, side);
    uint64_t spars = cut_value(s, side);
    ++rep.cuts_checked;

    bool ok;
    double ratio;
    if (orig == 0) {
      ok = spars == 0;
      ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      ratio = static_cast<double>(spars) / static_cast<double>(orig);
      ok = ratio >= 1.0 - eps && ratio <= 1.0 + eps;
    }
    double dev = std::abs(ratio - 1.0);
    if (dev > worst_dev) {
      worst_dev = dev;
      rep.worst_ratio = ratio;
      rep.witness = side;
    }
    if (!ok) rep.pass = false;
  }
  if (rep.pass) rep.witness.clear();
  return rep;
}

}  // namespace hss
