#pragma once

#include <set>
#include <string>
#include <vector>

#include "hss/connsketch.hpp"
#include "hss/strengthsketch.hpp"

namespace hss {

enum class EngineMode { kInsertion, kBounded, kDynamic };

std::string mode_name(EngineMode m);

// Resolved run parameters. `resolve` starts from the profile defaults,
// applies `--set` style overrides, then derives the dependent quantities;
// everything lands in the manifest for reproducibility.
struct EngineConfig {
  EngineMode mode = EngineMode::kInsertion;
  uint32_t n = 0;
  uint32_t r = 0;
  uint64_t k = 0;  // deletion budget (bounded mode)
  double eps = 0.5;
  uint64_t seed = 0;
  std::string profile = "desk";

  // tunables (profile defaults, overridable)
  double C = 8.0;
  uint32_t c_delta = 1;
  uint32_t c_T = 4;
  uint32_t c_s = 4;
  uint32_t c_D = 8;
  uint64_t kappa = 0;      // 0: derive from profile
  uint64_t kappa_hat = 0;  // 0: 2 * kappa
  uint64_t M = 0;          // sampler support bound; 0: n^4 * r
  uint32_t L_max = 0;      // 0: ceil(r log2 n)
  uint32_t reps_cap = 4096;
  uint32_t oracle_cap = 12;

  // derived
  uint32_t delta = 0;         // tracker offset, insertion scale
  uint32_t delta_k = 0;       // tracker offset, deletion-slack scale
  uint32_t t_conn = 0;        // connectivity sketch repetitions
  uint32_t t_s = 0;           // strength sketch repetitions per bank
  uint32_t num_banks = 0;
  uint32_t depth = 0;         // sampler rows
  uint32_t decode_budget = 0;

  static EngineConfig resolve(EngineMode mode, uint32_t n, uint32_t r, uint64_t k,
                              double eps, uint64_t seed, const std::string& profile,
                              const std::map<std::string, double>& overrides = {});

  std::vector<std::pair<std::string, std::string>> manifest() const;
};

struct SpaceLevelReport {
  uint32_t level = 0;
  uint64_t live_components = 0;
  uint64_t nonzero_samplers = 0;
  uint64_t empty_sampler_slots = 0;
  uint64_t bytes = 0;
};

struct SpaceReport {
  std::vector<SpaceLevelReport> levels;
  uint64_t total_nonzero_samplers = 0;
  uint64_t total_nonzero_testers = 0;
  uint64_t total_bytes = 0;
  uint64_t peak_nonzero_samplers = 0;
  uint64_t peak_bytes = 0;
};

// One-pass engine for all three regimes. Single writer; recovery is a
// one-shot terminal operation.
class StreamEngine {
 public:
  explicit StreamEngine(EngineConfig cfg);

  void update(const StreamUpdate& u);
  void insert(const Hyperedge& e) { update({e, +1}); }

  // consumes the sketches; per-level recovered sets optionally traced out
  WeightedHypergraph recover(std::vector<std::set<Hyperedge>>* f_trace = nullptr);

  SpaceReport space_report() const;
  const EngineConfig& config() const { return cfg_; }
  uint64_t update_count() const { return updates_; }
  uint64_t deletion_count() const { return deletions_; }
  uint32_t live_components(uint32_t level) const;

  uint32_t level_cc(const Hyperedge& e) const;
  uint32_t level_conn(const Hyperedge& e) const;
  uint32_t level_kappa(const Hyperedge& e) const;

 private:
  VertexId strength_label(uint32_t level, VertexId v) const;
  VertexId conn_label(uint32_t level, VertexId v) const;
  uint32_t hashed_level(const Key128& key, const U320& code) const;
  void fill_labels(uint32_t level, const Hyperedge& e, bool conn,
                   std::vector<VertexId>& out) const;
  void coarsen(SketchBank& bank, Partition& part, const Partition& by);
  void maybe_snapshot();
  void snapshot_now();

  EngineConfig cfg_;
  SeedContext seeds_;
  Key128 key_cc_, key_conn_, key_kappa_;
  std::vector<UnionFind> trackers_;
  std::vector<SketchBank> strength_;
  std::vector<SketchBank> conn_;
  std::set<Hyperedge> unit_edges_;  // arity-1: carried through, never sketched
  uint64_t updates_ = 0;
  uint64_t deletions_ = 0;
  bool recovered_ = false;
  uint64_t peak_samplers_ = 0;
  uint64_t peak_bytes_ = 0;
  uint64_t since_snapshot_ = 0;
};

// Offline reference: per-level connected components of H subsampled at rate
// 2^-i, sharing the engine's level-cc hash so online trackers agree exactly.
std::vector<Partition> find_strong_components_offline(const Hypergraph& h, uint64_t seed,
                                                      uint32_t l_max);

}  // namespace hss
