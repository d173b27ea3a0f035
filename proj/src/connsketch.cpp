#include "hss/connsketch.hpp"

#include <algorithm>
#include <bit>

namespace hss {

BankConfig make_conn_config(uint32_t n, uint32_t r, uint32_t level, uint32_t reps,
                            uint64_t support_bound) {
  BankConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.level = level;
  cfg.num_banks = 1;
  cfg.reps = reps;
  cfg.depth = static_cast<uint32_t>(std::bit_width(std::max<uint64_t>(support_bound, 1))) + 1;
  cfg.domain = "conn";
  cfg.bank_subsample = false;
  return cfg;
}

Partition recover_components(SketchBank& bank, const Partition& base) {
  const uint32_t n = base.n();
  Partition p = base;
  const uint32_t reps = bank.config().reps;

  for (uint32_t t = 0; t < reps; ++t) {
    // snapshot of live labels; components absorbed mid-round are skipped
    std::vector<VertexId> live;
    for (VertexId v = 0; v < n; ++v)
      if (p.block_of(v) == v) live.push_back(v);

    bool all_empty = true;
    bool merged_any = false;
    std::vector<VertexId> failing;

    for (VertexId label : live) {
      if (p.block_of(label) != label) continue;  // absorbed earlier this round
      SupernodeSketch* sk = bank.find(label);
      if (!sk || sk->is_zero()) continue;
      const L0Sampler* s = sk->sampler_if(0, t);
      if (!s || s->is_zero()) continue;
      all_empty = false;

      SampleOutcome out = s->sample();
      if (out.kind == SampleOutcome::kEmpty) continue;
      if (out.kind == SampleOutcome::kFail) {
        failing.push_back(label);
        continue;
      }
      auto dec = decode_incidence(out.coord, bank.config().n, bank.config().r);
      if (!dec) {
        failing.push_back(label);  // corrupt decode counts as a failed draw
        continue;
      }
      const Hyperedge& e = dec->first;
      // union every block the edge touches
      VertexId target = p.block_of(e.vertices()[0]);
      for (VertexId v : e.vertices()) {
        VertexId b = p.block_of(v);
        if (b == target) continue;
        VertexId keep = std::min(target, b), drop = std::max(target, b);
        bank.merge(keep, drop);
        p.merge(keep, drop);
        target = keep;
        merged_any = true;
      }
    }

    if (all_empty) return p;
    if (!merged_any && t + 1 == reps && !failing.empty()) {
      throw RecoveryFailure("component recovery: block " +
                            std::to_string(failing.front()) +
                            " failed on the last repetition");
    }
  }
  return p;
}

}  // namespace hss
