#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string_view>
#include <vector>

#include "hss/errors.hpp"
#include "hss/hashing.hpp"
#include "hss/mersenne61.hpp"
#include "hss/wideint.hpp"

namespace hss {

// Mergeable linear sketch returning a near-uniform nonzero coordinate of an
// integer vector under +/- updates over a coordinate space of up to 320
// bits. One sampler = three independent geometric subsampling chains of
// depth ceil(log2 M) + 1, one exact one-sparse tester per (chain, level).
// A single nested chain tops out near 70% recovery (two survivors can die
// in the same halving); three independent chains push a single sampler past
// the 90% completeness bar.

// Full seed material. Two samplers may be merged iff this matches; it is
// shared (one allocation per (domain, level, bank, rep)) so the z-power
// ladder is paid once, not per supernode.
struct SamplerSeed {
  uint64_t master = 0;
  uint64_t domain = 0;  // fnv64 of the domain tag
  uint32_t level = 0;
  uint32_t bank = 0;
  uint32_t rep = 0;
  uint32_t depth = 1;  // levels per chain; ceil(log2 support bound) + 1
  Key128 row_key;
  m61::PowTable zpow;

  SamplerSeed(uint64_t master_, uint64_t domain_, uint32_t level_, uint32_t bank_,
              uint32_t rep_, uint32_t depth_);

  bool same_material(const SamplerSeed& o) const {
    return master == o.master && domain == o.domain && level == o.level &&
           bank == o.bank && rep == o.rep && depth == o.depth;
  }
};

using SeedRef = std::shared_ptr<const SamplerSeed>;

// Cache of shared seeds keyed by material.
class SeedContext {
 public:
  explicit SeedContext(uint64_t master) : master_(master) {}
  uint64_t master() const { return master_; }
  SeedRef get(std::string_view domain_tag, uint32_t level, uint32_t bank, uint32_t rep,
              uint32_t depth);
  SeedRef get_by_id(uint64_t domain_id, uint32_t level, uint32_t bank, uint32_t rep,
                    uint32_t depth);

 private:
  uint64_t master_;
  std::map<std::tuple<uint64_t, uint32_t, uint32_t, uint32_t, uint32_t>, SeedRef> cache_;
};

struct OneSparseTester {
  int64_t s0 = 0;  // sum of deltas
  I384 s1;         // sum of delta * coordinate
  uint64_t fz = 0; // sum of delta * z^coordinate mod p

  bool is_zero() const { return s0 == 0 && fz == 0 && s1.is_zero(); }
};

struct SampleOutcome {
  enum Kind { kEmpty, kFound, kFail } kind = kEmpty;
  U320 coord;
  int64_t value = 0;
};

inline uint64_t coord_hash64(const Key128& k, const U320& x) {
  uint64_t h = k.a;
  for (size_t i = 0; i < 5; ++i) h = mix64(h ^ (x.w[i] + 0x9e3779b97f4a7c15ull * (i + 1)));
  return mix64(h ^ k.b);
}

class L0Sampler {
 public:
  explicit L0Sampler(SeedRef seed) : seed_(std::move(seed)) {}

  const SamplerSeed& seed() const { return *seed_; }

  void update(const U320& x, int64_t delta);
  // hot path: caller supplies z^x (exponent reduced mod p-1) and the row hash
  void update_fp(const U320& x, int64_t delta, uint64_t zx, uint64_t rowhash);

  SampleOutcome sample() const;

  void merge_from(const L0Sampler& other);

  bool is_zero() const { return nonzero_ == 0; }
  uint32_t nonzero_testers() const { return nonzero_; }

  // checkpoint format: version, seed material, nonzero testers big-endian
  void serialize(std::ostream& os) const;
  static L0Sampler deserialize(std::istream& is, SeedContext& ctx);
  size_t checkpoint_bytes() const;

  bool state_equal(const L0Sampler& o) const;

 private:
  OneSparseTester& row(uint8_t j);
  void bump_nonzero(bool was_zero, bool now_zero);

  SeedRef seed_;
  std::vector<std::pair<uint8_t, OneSparseTester>> rows_;  // touched rows, sorted
  uint32_t nonzero_ = 0;
};

}  // namespace hss
