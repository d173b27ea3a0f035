#include "hss/strengthsketch.hpp"

#include <algorithm>
#include <bit>

namespace hss {

namespace {

// Contracted image of the recovered edge set over the working partition.
struct ContractedView {
  std::vector<VertexId> labels;                    // touched block labels, sorted
  std::map<VertexId, VertexId> local_of;           // label -> dense id
  MultiEdgeList edges;                             // images with multiplicity
  std::map<Hyperedge, std::vector<const Hyperedge*>> originals;  // image -> sources
};

ContractedView contract_recovered(const std::set<Hyperedge>& rec, const Partition& p) {
  ContractedView view;
  std::set<VertexId> touched;
  std::map<Hyperedge, uint32_t> mult;  // on label space first
  std::map<Hyperedge, std::vector<const Hyperedge*>> srcs;
  for (const auto& e : rec) {
    std::set<VertexId> img;
    for (VertexId v : e.vertices()) img.insert(p.block_of(v));
    if (img.size() <= 1) continue;  // interior: already certified strong
    Hyperedge ie(std::vector<VertexId>(img.begin(), img.end()));
    mult[ie] += 1;
    srcs[ie].push_back(&e);
    for (VertexId l : img) touched.insert(l);
  }
  view.labels.assign(touched.begin(), touched.end());
  for (VertexId i = 0; i < view.labels.size(); ++i) view.local_of[view.labels[i]] = i;
  for (auto& [ie, m] : mult) {
    std::vector<VertexId> lv;
    for (VertexId l : ie.vertices()) lv.push_back(view.local_of[l]);
    Hyperedge local(lv);
    view.edges.emplace_back(local, m);
    view.originals[local] = std::move(srcs[ie]);
  }
  return view;
}

// Connected components of the contracted view, as groups of dense ids.
std::vector<std::vector<VertexId>> view_components(const ContractedView& view) {
  if (view.labels.empty()) return {};
  UnionFind uf(static_cast<uint32_t>(view.labels.size()));
  for (const auto& [e, m] : view.edges) {
    (void)m;
    for (size_t i = 1; i < e.vertices().size(); ++i)
      uf.unite(e.vertices()[0], e.vertices()[i]);
  }
  std::map<VertexId, std::vector<VertexId>> by_root;
  for (VertexId v = 0; v < view.labels.size(); ++v) by_root[uf.find(v)].push_back(v);
  std::vector<std::vector<VertexId>> out;
  for (auto& [root, vs] : by_root) {
    (void)root;
    out.push_back(std::move(vs));
  }
  return out;
}

MultiEdgeList component_edges(const ContractedView& view, const std::vector<uint8_t>& in) {
  MultiEdgeList out;
  for (const auto& [e, m] : view.edges) {
    if (in[e.vertices()[0]]) out.emplace_back(e, m);
  }
  return out;
}

// Localize a component's edges to [0, comp size) for the oracle.
MultiEdgeList localize(const MultiEdgeList& edges, const std::vector<VertexId>& comp) {
  std::map<VertexId, VertexId> local;
  for (VertexId i = 0; i < comp.size(); ++i) local[comp[i]] = i;
  MultiEdgeList out;
  for (const auto& [e, m] : edges) {
    std::vector<VertexId> vs;
    for (VertexId v : e.vertices()) vs.push_back(local.at(v));
    out.emplace_back(Hyperedge(vs), m);
  }
  return out;
}

}  // namespace

BankConfig make_strength_config(uint32_t n, uint32_t r, uint32_t level,
                                uint32_t num_banks, uint32_t reps,
                                uint64_t support_bound) {
  BankConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.level = level;
  cfg.num_banks = num_banks;
  cfg.reps = reps;
  cfg.depth = static_cast<uint32_t>(std::bit_width(std::max<uint64_t>(support_bound, 1))) + 1;
  cfg.domain = "kappa";
  cfg.bank_subsample = true;
  return cfg;
}

std::set<Hyperedge> recover_low_strength(SketchBank& bank, const Partition& base,
                                         const RecoveryParams& params,
                                         StrengthOracle& oracle) {
  const uint32_t n = bank.config().n;
  const uint32_t r = bank.config().r;
  const uint32_t num_banks = bank.config().num_banks;
  const uint32_t reps = bank.config().reps;
  Partition p = base;
  std::set<Hyperedge> rec;

  for (;;) {
    bool new_edges = false;
    std::vector<VertexId> stuck;

    // decode phase: every live block draws up to the budget of new edges
    for (VertexId label = 0; label < n; ++label) {
      if (p.block_of(label) != label) continue;
      SupernodeSketch* sk = bank.find(label);
      if (!sk || sk->is_zero()) continue;

      uint32_t got = 0;
      bool found_any = false;
      for (uint32_t bi = num_banks; bi-- > 0 && got < params.decode_budget;) {
        if (!sk->bank_materialized(bi)) continue;
        for (uint32_t t = 0; t < reps && got < params.decode_budget; ++t) {
          const L0Sampler* s = sk->sampler_if(bi, t);
          if (!s || s->is_zero()) continue;
          SampleOutcome out = s->sample();
          if (out.kind != SampleOutcome::kFound) continue;
          auto dec = decode_incidence(out.coord, n, r);
          if (!dec) continue;  // corrupt decode; treated as a failed draw
          found_any = true;
          if (rec.insert(dec->first).second) {
            ++got;
            new_edges = true;
          }
        }
      }
      if (!found_any) stuck.push_back(label);  // nonzero but nothing decodable
    }

    // certification phase: contract recovered components stronger than
    // kappa_hat; interior sketch mass cancels via the merges. Nothing new
    // decoded means nothing new to certify.
    bool merged_any = false;
    if (new_edges) {
      ContractedView view = contract_recovered(rec, p);
      for (const auto& comp : view_components(view)) {
        if (comp.size() < 2) continue;
        std::vector<uint8_t> in(view.labels.size(), 0);
        for (VertexId v : comp) in[v] = 1;
        MultiEdgeList ce = component_edges(view, in);

        std::vector<std::vector<VertexId>> groups;  // dense ids to contract
        if (comp.size() <= params.oracle_cap) {
          Partition strong = oracle.strong_components_above(
              static_cast<uint32_t>(comp.size()), localize(ce, comp),
              Rational(static_cast<int64_t>(params.kappa_hat)));
          for (auto& [lbl, members] : strong.blocks()) {
            (void)lbl;
            if (members.size() < 2) continue;
            std::vector<VertexId> g;
            for (VertexId lv : members) g.push_back(comp[lv]);
            groups.push_back(std::move(g));
          }
        } else if (certified_stronger_than(static_cast<uint32_t>(view.labels.size()), ce,
                                           comp, params.kappa_hat)) {
          groups.push_back(comp);
        }

        for (const auto& g : groups) {
          VertexId keep = view.labels[g[0]];
          for (size_t i = 1; i < g.size(); ++i) keep = std::min(keep, view.labels[g[i]]);
          for (VertexId lv : g) {
            VertexId drop = view.labels[lv];
            if (drop == keep) continue;
            bank.merge(keep, drop);
            p.merge(keep, drop);
            merged_any = true;
          }
        }
      }
    }

    if (!new_edges && !merged_any) {
      if (!stuck.empty())
        throw RecoveryFailure("low-strength recovery: block " +
                              std::to_string(stuck.front()) +
                              " has nonzero state but no decodable repetition");
      break;
    }
  }

  // classification: strengths of the recovered graph over the final
  // contraction; contracted-away edges are certified above kappa_hat >= kappa
  std::set<Hyperedge> result;
  ContractedView view = contract_recovered(rec, p);
  Rational kap(static_cast<int64_t>(params.kappa));
  for (const auto& comp : view_components(view)) {
    std::vector<uint8_t> in(view.labels.size(), 0);
    for (VertexId v : comp) in[v] = 1;
    MultiEdgeList ce = component_edges(view, in);
    if (comp.size() <= params.oracle_cap) {
      std::map<VertexId, VertexId> local;
      for (VertexId i = 0; i < comp.size(); ++i) local[comp[i]] = i;
      auto lambda = oracle.compute_strengths(static_cast<uint32_t>(comp.size()),
                                             localize(ce, comp));
      for (const auto& [e, m] : ce) {
        (void)m;
        std::vector<VertexId> lv;
        for (VertexId v : e.vertices()) lv.push_back(local.at(v));
        const Strength& st = lambda.at(Hyperedge(lv));
        if (st.finite && st.value <= kap) {
          for (const Hyperedge* src : view.originals.at(e)) result.insert(*src);
        }
      }
    } else if (!certified_stronger_than(static_cast<uint32_t>(view.labels.size()), ce,
                                        comp, params.kappa)) {
      // oversized and not certifiably strong: keep everything. Over-inclusion
      // only tightens the sparsifier; exactness holds within the oracle cap.
      for (const auto& [e, m] : ce) {
        (void)m;
        for (const Hyperedge* src : view.originals.at(e)) result.insert(*src);
      }
    }
  }
  return result;
}

}  // namespace hss
