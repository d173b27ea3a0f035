#include "hss/l0sampler.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace hss {

namespace {

// z is shared by all repetitions of one (domain, level, bank): the
// fingerprint base only controls the one-sparse verifier's false-positive
// bound, and sharing it lets edge updates compute z^x once per bank instead
// of once per repetition. Row subsampling stays per-repetition independent.
uint64_t derive_z(uint64_t master, uint64_t domain, uint32_t level, uint32_t bank) {
  Key128 k = derive_key(master, "l0-z", {domain, level, bank});
  return 2 + k.a % (m61::P - 2);  // z in [2, p-1]
}

void put_u8(std::ostream& os, uint8_t v) { os.put(static_cast<char>(v)); }
void put_u32(std::ostream& os, uint32_t v) {
  for (int i = 3; i >= 0; --i) os.put(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::ostream& os, uint64_t v) {
  for (int i = 7; i >= 0; --i) os.put(static_cast<char>(v >> (8 * i)));
}
uint8_t get_u8(std::istream& is) { return static_cast<uint8_t>(is.get()); }
uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<uint8_t>(is.get());
  return v;
}
uint64_t get_u64(std::istream& is) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<uint8_t>(is.get());
  return v;
}

constexpr uint8_t kFormatVersion = 1;

}  // namespace

SamplerSeed::SamplerSeed(uint64_t master_, uint64_t domain_, uint32_t level_,
                         uint32_t bank_, uint32_t rep_, uint32_t depth_)
    : master(master_),
      domain(domain_),
      level(level_),
      bank(bank_),
      rep(rep_),
      depth(depth_),
      row_key(derive_key(master_, "l0-rows", {domain_, level_, bank_, rep_})),
      zpow(derive_z(master_, domain_, level_, bank_)) {}

SeedRef SeedContext::get(std::string_view domain_tag, uint32_t level, uint32_t bank,
                         uint32_t rep, uint32_t depth) {
  return get_by_id(fnv64(domain_tag), level, bank, rep, depth);
}

SeedRef SeedContext::get_by_id(uint64_t domain_id, uint32_t level, uint32_t bank,
                               uint32_t rep, uint32_t depth) {
  auto key = std::make_tuple(domain_id, level, bank, rep, depth);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto seed = std::make_shared<const SamplerSeed>(master_, domain_id, level, bank, rep, depth);
  cache_.emplace(key, seed);
  return seed;
}

OneSparseTester& L0Sampler::row(uint8_t j) {
  // append-only with linear find: touched rows stay in the single digits,
  // and appends avoid the shifting cost of keeping the vector sorted
  for (auto& [idx, t] : rows_)
    if (idx == j) return t;
  rows_.push_back({j, OneSparseTester{}});
  return rows_.back().second;
}

void L0Sampler::bump_nonzero(bool was_zero, bool now_zero) {
  if (was_zero && !now_zero) ++nonzero_;
  if (!was_zero && now_zero) --nonzero_;
}

void L0Sampler::update(const U320& x, int64_t delta) {
  uint64_t zx = seed_->zpow.pow(x.mod_u64(m61::P - 1));
  update_fp(x, delta, zx, coord_hash64(seed_->row_key, x));
}

namespace {
constexpr uint64_t kChainSalt[3] = {0x243f6a8885a308d3ull, 0x13198a2e03707344ull,
                                    0xa4093822299f31d0ull};
}

void L0Sampler::update_fp(const U320& x, int64_t delta, uint64_t zx, uint64_t rowhash) {
  if (delta == 0) return;
  uint64_t fz_term = delta > 0 ? m61::mul(static_cast<uint64_t>(delta) % m61::P, zx)
                               : m61::P - m61::mul(static_cast<uint64_t>(-delta) % m61::P, zx);
  fz_term = m61::reduce(fz_term);
  for (int chain = 0; chain < 3; ++chain) {
    int lz = leading_zeros64(mix64(rowhash ^ kChainSalt[chain]));
    int top = std::min<int>(lz, static_cast<int>(seed_->depth) - 1);
    // chains 1 and 2 skip level 0: it keeps everything, so one copy suffices
    for (int level = chain == 0 ? 0 : 1; level <= top; ++level) {
      OneSparseTester& t = row(static_cast<uint8_t>(level * 4 + chain));
      bool was = t.is_zero();
      t.s0 += delta;
      t.s1.add_scaled(x, delta);
      t.fz = m61::add(t.fz, fz_term);
      bump_nonzero(was, t.is_zero());
    }
  }
}

SampleOutcome L0Sampler::sample() const {
  if (nonzero_ == 0) return {SampleOutcome::kEmpty, {}, 0};
  // sparsest row first; the first exactly-one-sparse row wins
  std::vector<const std::pair<uint8_t, OneSparseTester>*> order;
  order.reserve(rows_.size());
  for (const auto& r : rows_)
    if (!r.second.is_zero()) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->first > b->first; });
  for (const auto* rp : order) {
    const OneSparseTester& t = rp->second;
    if (t.s0 == 0) continue;
    auto q = t.s1.exact_div(t.s0);
    if (!q) continue;
    uint64_t s0_field = t.s0 >= 0 ? static_cast<uint64_t>(t.s0) % m61::P
                                  : m61::P - static_cast<uint64_t>(-t.s0) % m61::P;
    s0_field = m61::reduce(s0_field);
    uint64_t expect = m61::mul(s0_field, seed_->zpow.pow(q->mod_u64(m61::P - 1)));
    if (expect == t.fz) {
      return {SampleOutcome::kFound, *q, t.s0};
    }
  }
  return {SampleOutcome::kFail, {}, 0};
}

void L0Sampler::merge_from(const L0Sampler& other) {
  if (!seed_->same_material(*other.seed_))
    throw IncompatibleSketches("l0 merge: seed material differs");
  for (const auto& [j, ot] : other.rows_) {
    if (ot.is_zero()) continue;
    OneSparseTester& t = row(j);
    bool was = t.is_zero();
    t.s0 += ot.s0;
    t.s1.add(ot.s1);
    t.fz = m61::add(t.fz, ot.fz);
    bump_nonzero(was, t.is_zero());
  }
}

void L0Sampler::serialize(std::ostream& os) const {
  put_u8(os, kFormatVersion);
  put_u64(os, seed_->master);
  put_u64(os, seed_->domain);
  put_u32(os, seed_->level);
  put_u32(os, seed_->bank);
  put_u32(os, seed_->rep);
  put_u32(os, seed_->depth);
  put_u32(os, nonzero_);
  std::vector<const std::pair<uint8_t, OneSparseTester>*> order;
  for (const auto& r : rows_)
    if (!r.second.is_zero()) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  for (const auto* rp : order) {
    put_u8(os, rp->first);
    put_u64(os, static_cast<uint64_t>(rp->second.s0));
    uint8_t buf[48];
    rp->second.s1.to_be_bytes(buf);
    os.write(reinterpret_cast<const char*>(buf), sizeof buf);
    put_u64(os, rp->second.fz);
  }
}

L0Sampler L0Sampler::deserialize(std::istream& is, SeedContext& ctx) {
  uint8_t ver = get_u8(is);
  if (ver != kFormatVersion) throw MalformedInput("l0 checkpoint: bad version");
  uint64_t master = get_u64(is);
  if (master != ctx.master())
    throw IncompatibleSketches("l0 checkpoint: master seed mismatch");
  uint64_t domain = get_u64(is);
  uint32_t level = get_u32(is);
  uint32_t bank = get_u32(is);
  uint32_t rep = get_u32(is);
  uint32_t depth = get_u32(is);
  L0Sampler s(ctx.get_by_id(domain, level, bank, rep, depth));
  uint32_t count = get_u32(is);
  for (uint32_t i = 0; i < count; ++i) {
    uint8_t j = get_u8(is);
    OneSparseTester t;
    t.s0 = static_cast<int64_t>(get_u64(is));
    uint8_t buf[48];
    is.read(reinterpret_cast<char*>(buf), sizeof buf);
    t.s1 = I384::from_be_bytes(buf);
    t.fz = get_u64(is);
    if (!is.good()) throw MalformedInput("l0 checkpoint: truncated");
    s.rows_.push_back({j, t});
    if (!t.is_zero()) ++s.nonzero_;
  }
  std::sort(s.rows_.begin(), s.rows_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return s;
}

size_t L0Sampler::checkpoint_bytes() const {
  return 1 + 8 + 8 + 4 * 4 + 4 + static_cast<size_t>(nonzero_) * (1 + 8 + 48 + 8);
}

bool L0Sampler::state_equal(const L0Sampler& o) const {
  if (!seed_->same_material(*o.seed_)) return false;
  if (nonzero_ != o.nonzero_) return false;
  // compare nonzero testers only; touched-but-cancelled rows are immaterial
  auto collect = [](const L0Sampler& s) {
    std::vector<std::pair<uint8_t, const OneSparseTester*>> v;
    for (const auto& r : s.rows_)
      if (!r.second.is_zero()) v.emplace_back(r.first, &r.second);
    std::sort(v.begin(), v.end());
    return v;
  };
  auto a = collect(*this), b = collect(o);
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first) return false;
    const OneSparseTester &ta = *a[i].second, &tb = *b[i].second;
    if (ta.s0 != tb.s0 || ta.fz != tb.fz || !(ta.s1 == tb.s1)) return false;
  }
  return true;
}

}  // namespace hss
