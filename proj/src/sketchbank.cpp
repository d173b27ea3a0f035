#include "hss/sketchbank.hpp"

#include <algorithm>

namespace hss {

IncidencePlan::IncidencePlan(const Hyperedge& e, uint32_t n) {
  U320 code = encode_edge(e, n);
  coords.reserve(e.arity());
  exps.reserve(e.arity());
  for (VertexId v : e.vertices()) {
    U320 x = encode_incidence(code, v, n);
    exps.push_back(x.mod_u64(m61::P - 1));
    coords.push_back(x);
  }
}

L0Sampler& SupernodeSketch::sampler(uint32_t bank, uint32_t rep) {
  if (banks_.empty()) banks_.resize(cfg_->num_banks);
  auto& reps = banks_[bank];
  if (reps.empty()) {
    reps.reserve(cfg_->reps);
    for (uint32_t t = 0; t < cfg_->reps; ++t)
      reps.emplace_back(seeds_->get(cfg_->domain, cfg_->level, bank, t, cfg_->depth));
  }
  return reps[rep];
}

const L0Sampler* SupernodeSketch::sampler_if(uint32_t bank, uint32_t rep) const {
  if (bank >= banks_.size() || banks_[bank].empty()) return nullptr;
  return &banks_[bank][rep];
}

std::vector<uint64_t> SupernodeSketch::bank_nonzero_testers() const {
  std::vector<uint64_t> out(cfg_->num_banks, 0);
  for (uint32_t b = 0; b < banks_.size(); ++b)
    for (const auto& s : banks_[b]) out[b] += s.nonzero_testers();
  return out;
}

void SupernodeSketch::recount() {
  nonzero_samplers_ = 0;
  nonzero_testers_ = 0;
  for (const auto& reps : banks_) {
    for (const auto& s : reps) {
      if (!s.is_zero()) ++nonzero_samplers_;
      nonzero_testers_ += s.nonzero_testers();
    }
  }
}

void SupernodeSketch::merge_from(SupernodeSketch& other) {
  for (uint32_t b = 0; b < other.banks_.size(); ++b) {
    if (other.banks_[b].empty()) continue;
    for (uint32_t t = 0; t < cfg_->reps; ++t) {
      if (other.banks_[b][t].is_zero()) continue;
      sampler(b, t).merge_from(other.banks_[b][t]);
    }
  }
  recount();
}

SketchBank::SketchBank(BankConfig cfg, SeedContext& seeds)
    : cfg_(std::move(cfg)),
      seeds_(&seeds),
      bank_key_(derive_key(seeds.master(), "kappa-sub")) {}

const SamplerSeed& SketchBank::seed_for(uint32_t bank, uint32_t rep) {
  if (seed_cache_.empty()) seed_cache_.resize(cfg_.num_banks);
  auto& reps = seed_cache_[bank];
  if (reps.empty()) {
    reps.reserve(cfg_.reps);
    for (uint32_t t = 0; t < cfg_.reps; ++t)
      reps.push_back(seeds_->get(cfg_.domain, cfg_.level, bank, t, cfg_.depth));
  }
  return *reps[rep];
}

uint32_t SketchBank::bank_of_edge(const Hyperedge& e) const {
  if (!cfg_.bank_subsample) return 0;
  U320 code = encode_edge(e, cfg_.n);
  uint64_t h = coord_hash64(bank_key_, code);
  uint32_t g = static_cast<uint32_t>(leading_zeros64(h));
  return std::min(g, cfg_.num_banks - 1);
}

SupernodeSketch* SketchBank::find(VertexId label) {
  auto it = sketches_.find(label);
  return it == sketches_.end() ? nullptr : &it->second;
}

const SupernodeSketch* SketchBank::find(VertexId label) const {
  auto it = sketches_.find(label);
  return it == sketches_.end() ? nullptr : &it->second;
}

SupernodeSketch& SketchBank::materialize(VertexId label) {
  auto it = sketches_.find(label);
  if (it == sketches_.end())
    it = sketches_.emplace(label, SupernodeSketch(label, &cfg_, seeds_)).first;
  return it->second;
}

void SketchBank::apply_edge(const Hyperedge& e, const std::vector<VertexId>& labels,
                            int delta) {
  const uint32_t a = e.arity();
  // group positions by supernode
  group_labels_.assign(labels.begin(), labels.end());
  std::sort(group_labels_.begin(), group_labels_.end());
  group_labels_.erase(std::unique(group_labels_.begin(), group_labels_.end()),
                      group_labels_.end());
  if (group_labels_.size() == 1) return;  // interior edge: rows cancel

  group_sizes_.assign(group_labels_.size(), 0);
  for (VertexId l : labels) {
    size_t gi = static_cast<size_t>(
        std::lower_bound(group_labels_.begin(), group_labels_.end(), l) -
        group_labels_.begin());
    ++group_sizes_[gi];
  }

  IncidencePlan plan(e, cfg_.n);
  uint32_t top_bank = cfg_.bank_subsample ? bank_of_edge(e) : 0;

  thread_local std::vector<uint64_t> zx, rh;
  zx.resize(a);
  rh.resize(a);
  for (uint32_t b = 0; b <= top_bank; ++b) {
    // z is bank-shared, so each coordinate's fingerprint term is computed
    // once here and reused by every repetition and supernode
    for (uint32_t i = 0; i < a; ++i) zx[i] = seed_for(b, 0).zpow.pow(plan.exps[i]);
    for (uint32_t t = 0; t < cfg_.reps; ++t) {
      const SamplerSeed& seed = seed_for(b, t);
      for (uint32_t i = 0; i < a; ++i) rh[i] = coord_hash64(seed.row_key, plan.coords[i]);
      for (size_t gi = 0; gi < group_labels_.size(); ++gi) {
        SupernodeSketch& sk = materialize(group_labels_[gi]);
        L0Sampler& s = sk.sampler(b, t);
        int c = static_cast<int>(group_sizes_[gi]);
        int member_val = delta * (static_cast<int>(a) - c);
        int other_val = -delta * c;
        sk.mutate(s, [&](L0Sampler& sm) {
          for (uint32_t i = 0; i < a; ++i) {
            int val = labels[i] == group_labels_[gi] ? member_val : other_val;
            if (val != 0) sm.update_fp(plan.coords[i], val, zx[i], rh[i]);
          }
        });
      }
    }
  }
}

void SketchBank::merge(VertexId keep, VertexId drop) {
  if (keep == drop) return;
  auto dit = sketches_.find(drop);
  if (dit == sketches_.end()) return;
  materialize(keep).merge_from(dit->second);
  sketches_.erase(dit);
}

uint64_t SketchBank::nonzero_samplers() const {
  uint64_t total = 0;
  for (const auto& [l, sk] : sketches_) total += sk.nonzero_samplers();
  return total;
}

uint64_t SketchBank::nonzero_testers() const {
  uint64_t total = 0;
  for (const auto& [l, sk] : sketches_) total += sk.nonzero_testers();
  return total;
}

}  // namespace hss
