#pragma once

#include "hss/sketchbank.hpp"

namespace hss {

// Boruvka-style component recovery from per-supernode connectivity sketches.
// Round t lets every live component open repetition t of its sketch, decode
// one incident crossing edge, and union-merge along it (merging sketches as
// components coalesce, which cancels the now-internal edges). Returns a
// coarsening of `base` that refines true connectivity; equals it when the
// samplers cooperate.
//
// Throws RecoveryFailure when a component with nonzero state keeps failing
// to decode through the last round.
Partition recover_components(SketchBank& bank, const Partition& base);

BankConfig make_conn_config(uint32_t n, uint32_t r, uint32_t level, uint32_t reps,
                            uint64_t support_bound);

}  // namespace hss
