#include "hss/stream_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace hss {

namespace {

uint32_t ceil_log2(uint64_t v) {
  if (v <= 1) return 1;
  return static_cast<uint32_t>(std::bit_width(v - 1));
}

}  // namespace

std::string mode_name(EngineMode m) {
  switch (m) {
    case EngineMode::kInsertion: return "insertion";
    case EngineMode::kBounded: return "bounded";
    case EngineMode::kDynamic: return "dynamic";
  }
  return "?";
}

EngineConfig EngineConfig::resolve(EngineMode mode, uint32_t n, uint32_t r, uint64_t k,
                                   double eps, uint64_t seed, const std::string& profile,
                                   const std::map<std::string, double>& overrides) {
  if (n < 2 || n > kMaxVertices) throw MalformedInput("engine: n out of range");
  if (r < 1 || r > kMaxArity) throw MalformedInput("engine: r out of range");
  if (eps <= 0 || eps >= 1) throw MalformedInput("engine: eps must be in (0,1)");
  if (mode == EngineMode::kBounded && k < 1)
    throw MalformedInput("engine: bounded mode needs k >= 1");
  if (profile != "desk" && profile != "paper")
    throw MalformedInput("engine: unknown profile " + profile);

  EngineConfig cfg;
  cfg.mode = mode;
  cfg.n = n;
  cfg.r = r;
  cfg.k = mode == EngineMode::kBounded ? k : 0;
  cfg.eps = eps;
  cfg.seed = seed;
  cfg.profile = profile;

  double log_n = std::log2(std::max<double>(n, 2.0));
  if (profile == "paper") {
    cfg.c_delta = 20;
    double lg = std::log2(std::max(n / eps, 2.0));
    cfg.kappa = static_cast<uint64_t>(std::ceil(cfg.C * std::pow(lg, 5.0) / (eps * eps)));
  } else {
    // c_delta = 1 makes lone high-level edges merge unbacked components too
    // often at desk sizes; 2 keeps that hazard at the percent level while
    // still letting dense streams contract. kappa = 16: every cut of value
    // <= kappa is recovered exactly, and at desk densities that is what
    // keeps the worst verified cut inside 1 +/- 0.5 (smaller kappa leaves
    // small cuts to ride the halving cascade, whose variance blows the
    // tolerance on a tenth of seeds). The lighter per-bank repetition
    // constant keeps the repetition count where the recovery yield already
    // saturates.
    cfg.c_delta = 2;
    cfg.kappa = 16;
    cfg.c_s = 1;
  }

  auto ov = [&](const char* key, auto& slot) {
    auto it = overrides.find(key);
    if (it != overrides.end())
      slot = static_cast<std::remove_reference_t<decltype(slot)>>(it->second);
  };
  uint32_t t_s_override = 0, t_conn_override = 0;
  ov("C", cfg.C);
  ov("c_delta", cfg.c_delta);
  ov("c_T", cfg.c_T);
  ov("c_s", cfg.c_s);
  ov("c_D", cfg.c_D);
  ov("kappa", cfg.kappa);
  ov("kappa_hat", cfg.kappa_hat);
  ov("M", cfg.M);
  ov("L_max", cfg.L_max);
  ov("reps_cap", cfg.reps_cap);
  ov("oracle_cap", cfg.oracle_cap);
  ov("t_s", t_s_override);
  ov("t_conn", t_conn_override);
  for (const auto& [key, val] : overrides) {
    (void)val;
    static const char* known[] = {"C",     "c_delta",  "c_T",        "c_s",
                                  "c_D",   "kappa",    "kappa_hat",  "M",
                                  "L_max", "reps_cap", "oracle_cap", "t_s",
                                  "t_conn"};
    bool ok = false;
    for (const char* kk : known) ok |= key == kk;
    if (!ok) throw MalformedInput("engine: unknown override key " + key);
  }

  if (cfg.kappa < 1) throw MalformedInput("engine: kappa must be >= 1");
  if (cfg.kappa_hat == 0) cfg.kappa_hat = 2 * cfg.kappa;
  if (cfg.M == 0) {
    double m = std::pow(static_cast<double>(n), 4.0) * r;
    cfg.M = m > static_cast<double>(1ull << 40) ? (1ull << 40) : static_cast<uint64_t>(m);
  }
  if (cfg.L_max == 0)
    cfg.L_max = static_cast<uint32_t>(std::ceil(r * log_n));
  cfg.L_max = std::min(cfg.L_max, 62u);

  uint32_t log_m = ceil_log2(cfg.M);
  cfg.delta = cfg.c_delta * ceil_log2(n);
  cfg.delta_k = cfg.c_delta * ceil_log2(static_cast<uint64_t>(n) * std::max<uint64_t>(cfg.k, 1));
  cfg.t_conn = std::min<uint32_t>(cfg.c_T * ceil_log2(n), cfg.reps_cap);
  cfg.t_s = std::min<uint32_t>(
      static_cast<uint32_t>(std::min<uint64_t>(
          static_cast<uint64_t>(cfg.c_s) * cfg.kappa_hat * log_m, cfg.reps_cap)),
      cfg.reps_cap);
  if (t_s_override) cfg.t_s = t_s_override;
  if (t_conn_override) cfg.t_conn = t_conn_override;
  cfg.num_banks = log_m + 1;
  cfg.depth = log_m + 1;
  cfg.decode_budget = static_cast<uint32_t>(
      std::min<uint64_t>(static_cast<uint64_t>(cfg.c_D) * cfg.kappa_hat, 65536));
  return cfg;
}

std::vector<std::pair<std::string, std::string>> EngineConfig::manifest() const {
  std::vector<std::pair<std::string, std::string>> m;
  auto add = [&](const std::string& k2, const std::string& v) { m.emplace_back(k2, v); };
  char buf[64];
  add("mode", mode_name(mode) + (mode == EngineMode::kBounded ? ":" + std::to_string(k) : ""));
  add("n", std::to_string(n));
  add("r", std::to_string(r));
  add("k", std::to_string(k));
  snprintf(buf, sizeof buf, "%.17g", eps);
  add("epsilon", buf);
  add("seed", std::to_string(seed));
  add("profile", profile);
  snprintf(buf, sizeof buf, "%.17g", C);
  add("C", buf);
  add("c_delta", std::to_string(c_delta));
  add("c_T", std::to_string(c_T));
  add("c_s", std::to_string(c_s));
  add("c_D", std::to_string(c_D));
  add("kappa", std::to_string(kappa));
  add("kappa_hat", std::to_string(kappa_hat));
  add("M", std::to_string(M));
  add("L_max", std::to_string(L_max));
  add("delta", std::to_string(delta));
  add("delta_k", std::to_string(delta_k));
  add("t_conn", std::to_string(t_conn));
  add("t_s", std::to_string(t_s));
  add("num_banks", std::to_string(num_banks));
  add("depth", std::to_string(depth));
  add("decode_budget", std::to_string(decode_budget));
  add("reps_cap", std::to_string(reps_cap));
  add("oracle_cap", std::to_string(oracle_cap));
  return m;
}

StreamEngine::StreamEngine(EngineConfig cfg)
    : cfg_(cfg),
      seeds_(cfg.seed),
      key_cc_(derive_key(cfg.seed, "level-cc")),
      key_conn_(derive_key(cfg.seed, "level-conn")),
      key_kappa_(derive_key(cfg.seed, "level-kappa")) {
  if (cfg_.mode != EngineMode::kDynamic) {
    trackers_.reserve(cfg_.L_max + 1);
    for (uint32_t i = 0; i <= cfg_.L_max; ++i) trackers_.emplace_back(cfg_.n);
  }
  strength_.reserve(cfg_.L_max + 1);
  for (uint32_t i = 0; i <= cfg_.L_max; ++i) {
    strength_.emplace_back(
        make_strength_config(cfg_.n, cfg_.r, i, cfg_.num_banks, cfg_.t_s, cfg_.M),
        seeds_);
  }
  if (cfg_.mode == EngineMode::kBounded) {
    conn_.reserve(cfg_.L_max + 1);
    for (uint32_t i = 0; i <= cfg_.L_max; ++i)
      conn_.emplace_back(make_conn_config(cfg_.n, cfg_.r, i, cfg_.t_conn, cfg_.M), seeds_);
  }
}

uint32_t StreamEngine::hashed_level(const Key128& key, const U320& code) const {
  return std::min<uint32_t>(
      static_cast<uint32_t>(leading_zeros64(coord_hash64(key, code))), cfg_.L_max);
}

uint32_t StreamEngine::level_cc(const Hyperedge& e) const {
  return hashed_level(key_cc_, encode_edge(e, cfg_.n));
}
uint32_t StreamEngine::level_conn(const Hyperedge& e) const {
  return hashed_level(key_conn_, encode_edge(e, cfg_.n));
}
uint32_t StreamEngine::level_kappa(const Hyperedge& e) const {
  return hashed_level(key_kappa_, encode_edge(e, cfg_.n));
}

VertexId StreamEngine::strength_label(uint32_t level, VertexId v) const {
  if (cfg_.mode == EngineMode::kDynamic) return v;
  uint32_t off = cfg_.mode == EngineMode::kBounded ? cfg_.delta_k : cfg_.delta;
  uint64_t t = static_cast<uint64_t>(level) + off;
  if (t > cfg_.L_max) return v;
  return trackers_[t].find(v);
}

VertexId StreamEngine::conn_label(uint32_t level, VertexId v) const {
  uint64_t t = static_cast<uint64_t>(level) + cfg_.delta_k;
  if (t > cfg_.L_max) return v;
  return trackers_[t].find(v);
}

void StreamEngine::fill_labels(uint32_t level, const Hyperedge& e, bool conn,
                               std::vector<VertexId>& out) const {
  out.clear();
  for (VertexId v : e.vertices())
    out.push_back(conn ? conn_label(level, v) : strength_label(level, v));
}

uint32_t StreamEngine::live_components(uint32_t level) const {
  if (cfg_.mode == EngineMode::kDynamic) return cfg_.n;
  uint32_t off = cfg_.mode == EngineMode::kBounded ? cfg_.delta_k : cfg_.delta;
  uint64_t t = static_cast<uint64_t>(level) + off;
  if (t > cfg_.L_max) return cfg_.n;
  return trackers_[t].components();
}

void StreamEngine::update(const StreamUpdate& u) {
  if (recovered_) throw MalformedInput("engine: stream closed by recovery");
  const Hyperedge& e = u.edge;
  if (e.arity() > cfg_.r) throw MalformedInput("engine: arity exceeds r");
  if (e.vertices().back() >= cfg_.n) throw MalformedInput("engine: vertex out of range");
  if (cfg_.L_max < 62 && updates_ >= (1ull << cfg_.L_max))
    throw MalformedInput("engine: stream longer than 2^L_max updates");
  ++updates_;

  if (u.delta == -1) {
    if (cfg_.mode == EngineMode::kInsertion)
      throw MalformedInput("engine: deletion in insertion-only mode");
    if (cfg_.mode == EngineMode::kBounded && deletions_ >= cfg_.k)
      throw DeletionBudgetExceeded("engine: deletion " + std::to_string(deletions_ + 1) +
                                   " exceeds budget k=" + std::to_string(cfg_.k));
    ++deletions_;
  } else if (u.delta != +1) {
    throw MalformedInput("engine: delta must be +/-1");
  }

  if (e.arity() == 1) {
    // unit edges cross no cut; carried through outside the sketches
    if (u.delta == +1)
      unit_edges_.insert(e);
    else
      unit_edges_.erase(e);
    return;
  }

  U320 code = encode_edge(e, cfg_.n);
  uint32_t l_kappa = hashed_level(key_kappa_, code);
  std::vector<VertexId> labels;
  for (uint32_t i = 0; i <= l_kappa; ++i) {
    fill_labels(i, e, false, labels);
    strength_[i].apply_edge(e, labels, u.delta);
  }

  if (cfg_.mode == EngineMode::kBounded) {
    uint32_t l_conn = hashed_level(key_conn_, code);
    for (uint32_t i = 0; i <= l_conn; ++i) {
      fill_labels(i, e, true, labels);
      conn_[i].apply_edge(e, labels, u.delta);
    }
  }

  // trackers advance on insertions only; deletions never undo a merge
  if (u.delta == +1 && cfg_.mode != EngineMode::kDynamic) {
    uint32_t l_cc = hashed_level(key_cc_, code);
    uint32_t off = cfg_.mode == EngineMode::kBounded ? cfg_.delta_k : cfg_.delta;
    for (uint32_t i = 0; i <= l_cc; ++i) {
      const auto& vs = e.vertices();
      for (size_t j = 1; j < vs.size(); ++j) {
        VertexId ra = trackers_[i].find(vs[0]);
        VertexId rb = trackers_[i].find(vs[j]);
        if (ra == rb) continue;
        VertexId keep = std::min(ra, rb), drop = std::max(ra, rb);
        trackers_[i].unite(ra, rb);
        if (i >= off) strength_[i - off].merge(keep, drop);
        if (cfg_.mode == EngineMode::kBounded && i >= cfg_.delta_k)
          conn_[i - cfg_.delta_k].merge(keep, drop);
      }
    }
  }
  maybe_snapshot();
}

void StreamEngine::coarsen(SketchBank& bank, Partition& part, const Partition& by) {
  for (VertexId v = 0; v < cfg_.n; ++v) {
    VertexId target = by.block_of(v);
    if (target == v) continue;
    VertexId la = part.block_of(target);
    VertexId lb = part.block_of(v);
    if (la == lb) continue;
    VertexId keep = std::min(la, lb), drop = std::max(la, lb);
    bank.merge(keep, drop);
    part.merge(keep, drop);
  }
}

WeightedHypergraph StreamEngine::recover(std::vector<std::set<Hyperedge>>* f_trace) {
  if (recovered_) throw MalformedInput("engine: recover called twice");
  recovered_ = true;
  snapshot_now();

  WeightedHypergraph out(cfg_.n, cfg_.r);
  for (const auto& e : unit_edges_) out.add(e, 1);

  StrengthOracle oracle(OracleConfig{cfg_.oracle_cap});

  // phase 1 (bounded only): refine component structure from conn sketches,
  // sparsest sampling rate first
  std::vector<Partition> cc_tilde;
  if (cfg_.mode == EngineMode::kBounded) {
    cc_tilde.assign(cfg_.L_max + 1, Partition::singletons(cfg_.n));
    for (uint32_t i = cfg_.L_max + 1; i-- > 0;) {
      std::vector<VertexId> labels(cfg_.n);
      for (VertexId v = 0; v < cfg_.n; ++v) labels[v] = conn_label(i, v);
      Partition base{std::move(labels)};
      if (i < cfg_.L_max) coarsen(conn_[i], base, cc_tilde[i + 1]);
      try {
        cc_tilde[i] = recover_components(conn_[i], base);
      } catch (const RecoveryFailure& f) {
        throw RecoveryFailure("phase 1, level " + std::to_string(i) + ": " + f.what());
      }
    }
  }

  // phase 2: per-level low-strength recovery with upward subtraction
  RecoveryParams params;
  params.kappa = cfg_.kappa;
  params.kappa_hat = cfg_.kappa_hat;
  params.decode_budget = cfg_.decode_budget;
  params.oracle_cap = cfg_.oracle_cap;

  std::vector<VertexId> labels;
  if (f_trace) f_trace->assign(cfg_.L_max + 1, {});
  for (uint32_t i = 0; i <= cfg_.L_max; ++i) {
    std::vector<VertexId> base_labels(cfg_.n);
    for (VertexId v = 0; v < cfg_.n; ++v) base_labels[v] = strength_label(i, v);
    Partition base{std::move(base_labels)};
    if (cfg_.mode == EngineMode::kBounded) {
      uint32_t j = std::min(i + cfg_.delta, cfg_.L_max);
      coarsen(strength_[i], base, cc_tilde[j]);
    }
    if (strength_[i].nonzero_samplers() == 0) continue;

    std::set<Hyperedge> f_i;
    try {
      f_i = recover_low_strength(strength_[i], base, params, oracle);
    } catch (const RecoveryFailure& f) {
      throw RecoveryFailure("phase 2, level " + std::to_string(i) + ": " + f.what());
    }
    if (f_trace) (*f_trace)[i] = f_i;
    for (const auto& e : f_i) {
      out.add(e, 1ull << i);
      uint32_t top = level_kappa(e);
      for (uint32_t j = i + 1; j <= top; ++j) {
        fill_labels(j, e, false, labels);
        strength_[j].apply_edge(e, labels, -1);
      }
    }
  }
  return out;
}

void StreamEngine::maybe_snapshot() {
  if (++since_snapshot_ < 4096) return;
  snapshot_now();
}

void StreamEngine::snapshot_now() {
  since_snapshot_ = 0;
  SpaceReport rep = space_report();
  peak_samplers_ = std::max(peak_samplers_, rep.total_nonzero_samplers);
  peak_bytes_ = std::max(peak_bytes_, rep.total_bytes);
}

SpaceReport StreamEngine::space_report() const {
  SpaceReport rep;
  constexpr uint64_t kSamplerHeader = 37;  // serialized header bytes
  constexpr uint64_t kTesterBytes = 65;
  uint64_t slots_per_component = static_cast<uint64_t>(cfg_.num_banks) * cfg_.t_s +
                                 (cfg_.mode == EngineMode::kBounded ? cfg_.t_conn : 0);
  for (uint32_t i = 0; i <= cfg_.L_max; ++i) {
    SpaceLevelReport lv;
    lv.level = i;
    lv.live_components = live_components(i);
    lv.nonzero_samplers = strength_[i].nonzero_samplers();
    uint64_t testers = strength_[i].nonzero_testers();
    if (cfg_.mode == EngineMode::kBounded) {
      lv.nonzero_samplers += conn_[i].nonzero_samplers();
      testers += conn_[i].nonzero_testers();
    }
    uint64_t slots = lv.live_components * slots_per_component;
    lv.empty_sampler_slots = slots > lv.nonzero_samplers ? slots - lv.nonzero_samplers : 0;
    lv.bytes = lv.nonzero_samplers * kSamplerHeader + testers * kTesterBytes +
               (lv.empty_sampler_slots + 7) / 8;
    rep.total_nonzero_samplers += lv.nonzero_samplers;
    rep.total_nonzero_testers += testers;
    rep.total_bytes += lv.bytes;
    rep.levels.push_back(lv);
  }
  rep.peak_nonzero_samplers = std::max(peak_samplers_, rep.total_nonzero_samplers);
  rep.peak_bytes = std::max(peak_bytes_, rep.total_bytes);
  return rep;
}

std::vector<Partition> find_strong_components_offline(const Hypergraph& h, uint64_t seed,
                                                      uint32_t l_max) {
  Key128 key = derive_key(seed, "level-cc");
  std::vector<UnionFind> ufs(l_max + 1, UnionFind(h.n()));
  for (const auto& e : h.edges()) {
    if (e.arity() < 2) continue;
    uint32_t lvl = std::min<uint32_t>(
        static_cast<uint32_t>(leading_zeros64(coord_hash64(key, encode_edge(e, h.n())))),
        l_max);
    for (uint32_t i = 0; i <= lvl; ++i) {
      const auto& vs = e.vertices();
      for (size_t j = 1; j < vs.size(); ++j) ufs[i].unite(vs[0], vs[j]);
    }
  }
  std::vector<Partition> out;
  out.reserve(l_max + 1);
  for (auto& uf : ufs) out.push_back(uf.to_partition());
  return out;
}

}  // namespace hss
