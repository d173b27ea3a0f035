#pragma once

#include <set>

#include "hss/oracle.hpp"
#include "hss/sketchbank.hpp"

namespace hss {

struct RecoveryParams {
  uint64_t kappa = 1;        // strengths <= kappa are returned
  uint64_t kappa_hat = 2;    // components certified above this get contracted
  uint32_t decode_budget = 16;  // distinct new edges per block per round
  uint32_t oracle_cap = 12;  // exact certification ceiling (supernode count)
};

// Iterative recover/certify/contract loop over one level's strength
// sketches. Decodes incident crossing edges per live block (banks sparse to
// dense, repetitions in order), contracts recovered components certified
// stronger than kappa_hat (merging sketches, which cancels interior edges),
// and repeats until blocks decode empty or a round makes no progress.
// Returns the recovered edges of strength <= kappa, classified on the
// recovered graph over the final contraction.
//
// `base` is consumed conceptually: the bank is mutated (merges). Throws
// RecoveryFailure when a nonzero block yields only failed draws in a round
// that made no progress.
std::set<Hyperedge> recover_low_strength(SketchBank& bank, const Partition& base,
                                         const RecoveryParams& params,
                                         StrengthOracle& oracle);

BankConfig make_strength_config(uint32_t n, uint32_t r, uint32_t level,
                                uint32_t num_banks, uint32_t reps, uint64_t support_bound);

}  // namespace hss
