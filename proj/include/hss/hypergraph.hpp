#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hss/errors.hpp"
#include "hss/wideint.hpp"

namespace hss {

using VertexId = uint32_t;

constexpr uint32_t kMaxVertices = 1u << 16;
constexpr uint32_t kMaxArity = 16;

// Sorted, duplicate-free vertex subset. Construction canonicalizes; an edge
// compares equal iff its canonical encoding does.
class Hyperedge {
 public:
  Hyperedge() = default;
  explicit Hyperedge(std::vector<VertexId> vs);

  uint32_t arity() const { return static_cast<uint32_t>(vs_.size()); }
  const std::vector<VertexId>& vertices() const { return vs_; }
  bool contains(VertexId v) const;

  auto operator<=>(const Hyperedge&) const = default;

  std::string to_string() const;

 private:
  std::vector<VertexId> vs_;
};

struct StreamUpdate {
  Hyperedge edge;
  int delta = +1;  // +1 insert, -1 delete
};

// Bit width of one vertex field for a hypergraph on n vertices.
unsigned vertex_bits(uint32_t n);

// Canonical code: (arity as 16 bits) followed by arity vertex fields of
// vertex_bits(n) each, most significant first.
U320 encode_edge(const Hyperedge& e, uint32_t n);
std::optional<Hyperedge> decode_edge(const U320& code, uint32_t n, uint32_t r);

// Incidence coordinate: encode_edge(e) followed by one member vertex field.
U320 encode_incidence(const U320& edge_code, VertexId member, uint32_t n);
U320 encode_incidence(const Hyperedge& e, VertexId member, uint32_t n);
// Returns (edge, member) with member guaranteed to lie in the edge.
std::optional<std::pair<Hyperedge, VertexId>> decode_incidence(const U320& coord,
                                                               uint32_t n, uint32_t r);

class Hypergraph {
 public:
  Hypergraph(uint32_t n, uint32_t r);

  uint32_t n() const { return n_; }
  uint32_t r() const { return r_; }
  const std::set<Hyperedge>& edges() const { return edges_; }
  size_t edge_count() const { return edges_.size(); }
  bool contains(const Hyperedge& e) const { return edges_.count(e) > 0; }

  // validates vertex range and arity; throws MalformedInput
  void insert(const Hyperedge& e);
  void erase(const Hyperedge& e);
  // multiplicity-checked application; throws MalformedInput on 0/1 violation
  void apply(const StreamUpdate& u);

  void check_edge(const Hyperedge& e) const;

 private:
  uint32_t n_;
  uint32_t r_;
  std::set<Hyperedge> edges_;
};

class WeightedHypergraph {
 public:
  WeightedHypergraph(uint32_t n, uint32_t r) : n_(n), r_(r) {}

  uint32_t n() const { return n_; }
  uint32_t r() const { return r_; }
  const std::map<Hyperedge, uint64_t>& weighted_edges() const { return edges_; }
  size_t edge_count() const { return edges_.size(); }

  void add(const Hyperedge& e, uint64_t weight);

 private:
  uint32_t n_;
  uint32_t r_;
  std::map<Hyperedge, uint64_t> edges_;
};

// Partition of [0, n); block label = minimum member vertex.
class Partition {
 public:
  Partition() = default;
  static Partition singletons(uint32_t n);
  // input labels are arbitrary group markers; normalized to min-of-block
  explicit Partition(std::vector<VertexId> block_of);

  uint32_t n() const { return static_cast<uint32_t>(block_of_.size()); }
  VertexId block_of(VertexId v) const { return block_of_[v]; }
  const std::vector<VertexId>& labels() const { return block_of_; }
  uint32_t block_count() const;
  std::map<VertexId, std::vector<VertexId>> blocks() const;

  bool same_block(VertexId a, VertexId b) const { return block_of_[a] == block_of_[b]; }
  // true if every block of *this lies inside one block of coarser
  bool refines(const Partition& coarser) const;
  // merge the blocks containing a and b; relabels to min
  void merge(VertexId a, VertexId b);

  bool operator==(const Partition&) const = default;

 private:
  std::vector<VertexId> block_of_;
};

// Union-find with minimum-id representatives, the backbone of the
// per-level component trackers.
class UnionFind {
 public:
  explicit UnionFind(uint32_t n);

  VertexId find(VertexId x) const;
  // returns false if already joined
  bool unite(VertexId a, VertexId b);
  uint32_t components() const { return components_; }
  Partition to_partition() const;

 private:
  mutable std::vector<VertexId> parent_;
  std::vector<uint32_t> size_;
  uint32_t components_;
};

// --- cut machinery -----------------------------------------------------

// Total weight of hyperedges meeting both S and its complement. S must be a
// nonempty proper subset of [0, n); throws InvalidCut otherwise.
uint64_t cut_value(const Hypergraph& h, const std::vector<VertexId>& s);
uint64_t cut_value(const WeightedHypergraph& h, const std::vector<VertexId>& s);

struct ContractResult {
  Hypergraph graph;            // on dense block ids [0, k)
  std::vector<VertexId> vertex_map;   // original vertex -> contracted id
  std::vector<VertexId> block_label;  // contracted id -> original block label
  // contracted edge -> number of distinct preimages (collapsed duplicates)
  std::map<Hyperedge, uint32_t> preimage_count;
};

ContractResult contract(const Hypergraph& h, const Partition& p);

struct VerifyReport {
  bool pass = false;
  double worst_ratio = 1.0;              // sparsifier / original at the worst cut
  std::vector<VertexId> witness;         // the worst-violating cut (empty if pass)
  uint64_t cuts_checked = 0;
};

// Exhaustive check over all 2^(n-1) - 1 cuts. Throws NotASubgraph if the
// sparsifier contains an edge absent from h, TooLarge past exhaustive_bound.
VerifyReport verify_sparsifier(const Hypergraph& h, const WeightedHypergraph& s,
                               double eps, uint32_t exhaustive_bound = 16);

}  // namespace hss
