#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace hss {

// splitmix64 finalizer; the workhorse mixer for all seeded hashing.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct Key128 {
  uint64_t a = 0;
  uint64_t b = 0;
  bool operator==(const Key128&) const = default;
};

inline uint64_t fnv64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic key derivation: master seed + domain tag + integer parts.
// Every random choice in the library flows from one of these keys.
inline Key128 derive_key(uint64_t master, std::string_view domain,
                         std::initializer_list<uint64_t> parts = {}) {
  uint64_t h1 = mix64(master ^ 0x8badf00d5eedf00dull);
  uint64_t h2 = mix64(master ^ 0x5ca1ab1e0ddba11ull);
  uint64_t d = fnv64(domain);
  h1 = mix64(h1 ^ d);
  h2 = mix64(h2 + (d << 1 | 1));
  for (uint64_t p : parts) {
    h1 = mix64(h1 ^ (p + 0x9e3779b97f4a7c15ull));
    h2 = mix64(h2 + (p ^ 0xd1b54a32d192ed03ull));
  }
  return {h1, h2};
}

inline Key128 derive_key(const Key128& k, std::initializer_list<uint64_t> parts) {
  uint64_t h1 = k.a, h2 = k.b;
  for (uint64_t p : parts) {
    h1 = mix64(h1 ^ (p + 0x9e3779b97f4a7c15ull));
    h2 = mix64(h2 + (p ^ 0xd1b54a32d192ed03ull));
  }
  return {h1, h2};
}

// Minimal deterministic RNG (splitmix64 stream). std::mt19937 would also be
// portable but its distributions are not; we only ever use raw draws.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  explicit Rng(const Key128& k) : state_(k.a ^ (k.b << 1)) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }
  // uniform in [0, n); modulo bias is irrelevant at our scales
  uint64_t below(uint64_t n) { return next() % n; }
  double unit() { return static_cast<double>(next() >> 11) * 0x1p-53; }
  bool coin() { return next() & 1; }

 private:
  uint64_t state_;
};

inline int leading_zeros64(uint64_t x) {
  return x == 0 ? 64 : std::countl_zero(x);
}

}  // namespace hss
