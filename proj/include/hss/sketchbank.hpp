#pragma once

#include <map>
#include <string>
#include <vector>

#include "hss/hypergraph.hpp"
#include "hss/l0sampler.hpp"

namespace hss {

// Signed incidence encoding shared by the connectivity and low-strength
// sketches: vertex v of edge e contributes (|e|-1) at coordinate (e,v) and
// -1 at every other (e,u). Summing all member rows of a supernode S leaves
// (|e|-|S cap e|) at member coordinates and -|S cap e| elsewhere, so edges
// interior to a supernode vanish and crossing edges stay visible at every
// coordinate.

struct IncidencePlan {
  std::vector<U320> coords;     // one per member position
  std::vector<uint64_t> exps;   // coord mod (p-1) for the fingerprint
  IncidencePlan(const Hyperedge& e, uint32_t n);
};

struct BankConfig {
  uint32_t n = 0;
  uint32_t r = 0;
  uint32_t level = 0;
  uint32_t num_banks = 1;  // strength sketches: ceil(log2 M) + 1; conn: 1
  uint32_t reps = 1;
  uint32_t depth = 1;      // sampler rows
  std::string domain;      // seed domain tag ("conn" / "kappa")
  bool bank_subsample = false;  // strength sketches gate banks by g(e)
};

// All samplers of one supernode at one level: banks x reps, lazily built.
class SupernodeSketch {
 public:
  SupernodeSketch(VertexId supernode, const BankConfig* cfg, SeedContext* seeds)
      : supernode_(supernode), cfg_(cfg), seeds_(seeds) {}

  VertexId supernode() const { return supernode_; }

  L0Sampler& sampler(uint32_t bank, uint32_t rep);
  const L0Sampler* sampler_if(uint32_t bank, uint32_t rep) const;
  bool bank_materialized(uint32_t bank) const {
    return bank < banks_.size() && !banks_[bank].empty();
  }

  void merge_from(SupernodeSketch& other);

  bool is_zero() const { return nonzero_samplers_ == 0; }
  uint64_t nonzero_samplers() const { return nonzero_samplers_; }
  uint64_t nonzero_testers() const { return nonzero_testers_; }
  // diagnostic dump: nonzero tester count per bank, for space accounting
  std::vector<uint64_t> bank_nonzero_testers() const;

  // counter bookkeeping around a mutation of one sampler
  template <class F>
  void mutate(L0Sampler& s, F&& f) {
    bool was = s.is_zero();
    uint64_t before = s.nonzero_testers();
    f(s);
    uint64_t after = s.nonzero_testers();
    nonzero_testers_ += after - before;  // modular wrap handles decreases
    if (was && !s.is_zero()) ++nonzero_samplers_;
    if (!was && s.is_zero()) --nonzero_samplers_;
  }

 private:
  void recount();

  VertexId supernode_;
  const BankConfig* cfg_;
  SeedContext* seeds_;
  std::vector<std::vector<L0Sampler>> banks_;
  uint64_t nonzero_samplers_ = 0;
  uint64_t nonzero_testers_ = 0;
};

// Per-level map supernode -> sketch with the shared update path.
class SketchBank {
 public:
  SketchBank(BankConfig cfg, SeedContext& seeds);

  const BankConfig& config() const { return cfg_; }

  // labels[i] = supernode of e.vertices()[i]; delta is +/-1. Edges interior
  // to one supernode are skipped outright (their rows sum to zero).
  void apply_edge(const Hyperedge& e, const std::vector<VertexId>& labels, int delta);

  // subsampling bank of an edge (num_banks-1 clamp; 0 when gating is off)
  uint32_t bank_of_edge(const Hyperedge& e) const;

  void merge(VertexId keep, VertexId drop);

  SupernodeSketch* find(VertexId label);
  const SupernodeSketch* find(VertexId label) const;
  SupernodeSketch& materialize(VertexId label);
  std::map<VertexId, SupernodeSketch>& sketches() { return sketches_; }
  const std::map<VertexId, SupernodeSketch>& sketches() const { return sketches_; }

  uint64_t nonzero_samplers() const;
  uint64_t nonzero_testers() const;

 private:
  const SamplerSeed& seed_for(uint32_t bank, uint32_t rep);

  BankConfig cfg_;
  SeedContext* seeds_;
  Key128 bank_key_;
  std::map<VertexId, SupernodeSketch> sketches_;
  std::vector<std::vector<SeedRef>> seed_cache_;  // [bank][rep], lazy per bank
  // scratch reused across apply_edge calls
  std::vector<VertexId> group_labels_;
  std::vector<uint32_t> group_sizes_;
};

}  // namespace hss
