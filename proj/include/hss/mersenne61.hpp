#pragma once

#include <array>
#include <cstdint>

namespace hss::m61 {

// Arithmetic over GF(p), p = 2^61 - 1. Used by the one-sparse tester
// fingerprints; the Mersenne structure keeps mulmod at a handful of cycles.
constexpr uint64_t P = (1ull << 61) - 1;

inline uint64_t reduce(uint64_t x) {
  x = (x & P) + (x >> 61);
  return x >= P ? x - P : x;
}

inline uint64_t add(uint64_t a, uint64_t b) { return reduce(a + b); }

inline uint64_t sub(uint64_t a, uint64_t b) { return a >= b ? a - b : a + P - b; }

inline uint64_t mul(uint64_t a, uint64_t b) {
  __uint128_t t = static_cast<__uint128_t>(a) * b;
  uint64_t lo = static_cast<uint64_t>(t & P);
  uint64_t hi = static_cast<uint64_t>(t >> 61);
  return reduce(lo + hi);
}

inline uint64_t pow(uint64_t base, uint64_t exp) {
  uint64_t acc = 1;
  uint64_t b = reduce(base);
  while (exp) {
    if (exp & 1) acc = mul(acc, b);
    b = mul(b, b);
    exp >>= 1;
  }
  return acc;
}

// Precomputed z^(2^i) ladder so per-update exponentiations cost ~popcount
// multiplications. One table is shared by every sampler with the same seed
// material (same z), which is what makes sketch updates affordable.
struct PowTable {
  uint64_t z = 0;
  std::array<uint64_t, 61> sq{};  // sq[i] = z^(2^i); exponents are < p-1

  explicit PowTable(uint64_t base) : z(reduce(base)) {
    uint64_t cur = z;
    for (int i = 0; i < 61; ++i) {
      sq[static_cast<size_t>(i)] = cur;
      cur = mul(cur, cur);
    }
  }

  // z^exp for exp < 2^61
  uint64_t pow(uint64_t exp) const {
    uint64_t acc = 1;
    int i = 0;
    while (exp) {
      if (exp & 1) acc = mul(acc, sq[static_cast<size_t>(i)]);
      exp >>= 1;
      ++i;
    }
    return acc;
  }
};

}  // namespace hss::m61
