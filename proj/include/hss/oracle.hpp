#pragma once

#include <map>
#include <vector>

#include "hss/hashing.hpp"
#include "hss/hypergraph.hpp"
#include "hss/rational.hpp"

namespace hss {

// Brute-force ground truth for k-cuts, strengths and static sparsification.
// Everything here is exact rational arithmetic over exhaustive partition
// enumeration; the streaming side never calls into it except at recovery
// time on small contracted instances.

struct KCutResult {
  Rational value;       // Phi(H) = crossing / (k - 1)
  Partition partition;  // the minimizing partition (tie-broken)
  uint32_t blocks = 0;
};

struct OracleConfig {
  uint32_t max_vertices = 10;  // Bell-number guard; values up to 12 warn
};

// (edge, multiplicity) view used for contracted multigraphs.
using MultiEdge = std::pair<Hyperedge, uint32_t>;
using MultiEdgeList = std::vector<MultiEdge>;

using StrengthMap = std::map<Hyperedge, Strength>;

enum class TieBreak { kDeterministic, kRandomized };

// One oracle instance per thread: the memo table is not synchronized.
class StrengthOracle {
 public:
  explicit StrengthOracle(OracleConfig cfg = {});

  KCutResult min_normalized_kcut(const Hypergraph& h);
  KCutResult min_normalized_kcut(uint32_t n, const MultiEdgeList& edges);

  StrengthMap compute_strengths(const Hypergraph& h);
  StrengthMap compute_strengths(uint32_t n, const MultiEdgeList& edges);
  // test hook: randomized choice among minimizing k-cuts (disables the memo)
  StrengthMap compute_strengths(uint32_t n, const MultiEdgeList& edges, TieBreak tb,
                                uint64_t tie_seed);

  // min strength inside H[S], computed within the induced subhypergraph;
  // +infinity when H[S] has no arity >= 2 edge
  Strength component_strength(const Hypergraph& h, const std::vector<VertexId>& s);

  // Maximal vertex sets whose component strength exceeds kappa, found by
  // recursive min-cut splitting. Exact (and subject to the vertex bound).
  Partition strong_components_above(uint32_t n, const MultiEdgeList& edges,
                                    const Rational& kappa);

  // Sum of mult/lambda over finite strengths; equals n - #components.
  static Rational reciprocal_strength_sum(const StrengthMap& lambda,
                                          const MultiEdgeList& edges);

 private:
  struct Sub;  // localized subproblem
  void check_bound(uint32_t n);
  void solve(Sub& sub, StrengthMap& out, TieBreak tb, Rng* tie_rng);
  void solve_connected(Sub& sub, StrengthMap& out, TieBreak tb, Rng* tie_rng);
  static std::vector<uint64_t> kcut_key(uint32_t n, const MultiEdgeList& edges);

  OracleConfig cfg_;
  bool warned_ = false;
  // canonical localized subgraph -> full local strength assignment
  std::map<std::vector<uint64_t>, std::vector<Strength>> memo_;
  // canonical localized subgraph -> (crossing, blocks, block_of)
  std::map<std::vector<uint64_t>, std::tuple<uint64_t, uint32_t, std::vector<VertexId>>>
      kcut_memo_;
};

// Lower-bound certificate: true if the edge set provably has min normalized
// k-cut value > kappa on its (connected) vertex span, via edge-disjoint
// spanning connected subhypergraphs. Sound but not complete; used when a
// certification instance exceeds the oracle bound.
bool certified_stronger_than(uint32_t n, const MultiEdgeList& edges,
                             const std::vector<VertexId>& span, uint64_t kappa);

// --- reference sparsifiers ---------------------------------------------

// Importance sampling at dyadic rates: each edge kept with probability
// 2^-j, the largest dyadic rate <= min(1, C log2(n) / (eps^2 lambda_e)),
// re-weighted by 2^j. Dyadic snapping keeps output weights powers of two.
WeightedHypergraph static_sparsify(const Hypergraph& h, double eps, uint64_t seed,
                                   StrengthOracle& oracle, double C = 8.0);

// The iterative peel-and-halve reference pipeline: level i extracts edges of
// strength <= C log2(n) / eps'^2 with eps' = eps / log2^2(n/eps), halves the
// rest, and emits the union of 2^i-weighted levels.
WeightedHypergraph simple_sparsify(const Hypergraph& h, double eps, uint64_t seed,
                                   StrengthOracle& oracle, double C = 8.0);

}  // namespace hss
