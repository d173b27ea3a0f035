#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <cstring>
#include <optional>

namespace hss {

// Fixed-width integers for sketch coordinates and tester accumulators.
//
// A coordinate is the canonical encoding of an (edge, member) pair: at the
// caps (n <= 2^16, r <= 16) it needs 16 + 17*16 = 288 bits, so 5 limbs hold
// any coordinate. Tester sums c*x with |c| bounded by arity and stream
// length, so 6 signed limbs (384 bits) never overflow.

struct U320 {
  std::array<uint64_t, 5> w{};  // little-endian limbs

  static U320 from_u64(uint64_t v) {
    U320 r;
    r.w[0] = v;
    return r;
  }

  bool is_zero() const {
    for (uint64_t l : w)
      if (l) return false;
    return true;
  }

  auto operator<=>(const U320& o) const {
    for (int i = 4; i >= 0; --i) {
      if (w[static_cast<size_t>(i)] != o.w[static_cast<size_t>(i)])
        return w[static_cast<size_t>(i)] <=> o.w[static_cast<size_t>(i)];
    }
    return std::strong_ordering::equal;
  }
  bool operator==(const U320&) const = default;

  // (this << bits) | low, for building bit-packed codes; bits < 64
  U320 shifted_in(unsigned bits, uint64_t low) const {
    U320 r;
    if (bits == 0) {
      r = *this;
      r.w[0] |= low;
      return r;
    }
    uint64_t carry = low;
    for (size_t i = 0; i < 5; ++i) {
      uint64_t cur = w[i];
      r.w[i] = (cur << bits) | carry;
      carry = bits == 0 ? 0 : (cur >> (64 - bits));
    }
    return r;
  }

  U320 shifted_right(unsigned bits) const {  // bits < 320
    U320 r;
    unsigned limb = bits / 64, off = bits % 64;
    for (size_t i = 0; i + limb < 5; ++i) {
      uint64_t cur = w[i + limb] >> off;
      if (off && i + limb + 1 < 5) cur |= w[i + limb + 1] << (64 - off);
      r.w[i] = cur;
    }
    return r;
  }

  uint64_t low_bits(unsigned bits) const {  // bits <= 64
    if (bits == 0) return 0;
    uint64_t m = bits >= 64 ? ~0ull : ((1ull << bits) - 1);
    return w[0] & m;
  }

  unsigned bit_length() const {
    for (int i = 4; i >= 0; --i) {
      if (w[static_cast<size_t>(i)])
        return static_cast<unsigned>(i) * 64 +
               (64 - static_cast<unsigned>(std::countl_zero(w[static_cast<size_t>(i)])));
    }
    return 0;
  }

  uint64_t mod_u64(uint64_t m) const {
    __uint128_t acc = 0;
    for (int i = 4; i >= 0; --i) {
      acc = ((acc << 64) | w[static_cast<size_t>(i)]) % m;
    }
    return static_cast<uint64_t>(acc);
  }

  void to_be_bytes(uint8_t out[40]) const {
    for (size_t i = 0; i < 5; ++i) {
      uint64_t l = w[4 - i];
      for (int b = 0; b < 8; ++b) out[i * 8 + static_cast<size_t>(b)] = static_cast<uint8_t>(l >> (56 - 8 * b));
    }
  }
  static U320 from_be_bytes(const uint8_t in[40]) {
    U320 r;
    for (size_t i = 0; i < 5; ++i) {
      uint64_t l = 0;
      for (int b = 0; b < 8; ++b) l = (l << 8) | in[i * 8 + static_cast<size_t>(b)];
      r.w[4 - i] = l;
    }
    return r;
  }
};

// 384-bit signed accumulator, two's complement.
struct I384 {
  std::array<uint64_t, 6> w{};

  bool is_zero() const {
    for (uint64_t l : w)
      if (l) return false;
    return true;
  }
  bool is_negative() const { return w[5] >> 63; }
  bool operator==(const I384&) const = default;

  void add(const I384& o) {
    unsigned char carry = 0;
    for (size_t i = 0; i < 6; ++i) {
      __uint128_t s = static_cast<__uint128_t>(w[i]) + o.w[i] + carry;
      w[i] = static_cast<uint64_t>(s);
      carry = static_cast<unsigned char>(s >> 64);
    }
  }

  I384 negated() const {
    I384 r;
    unsigned char carry = 1;
    for (size_t i = 0; i < 6; ++i) {
      __uint128_t s = static_cast<__uint128_t>(~w[i]) + carry;
      r.w[i] = static_cast<uint64_t>(s);
      carry = static_cast<unsigned char>(s >> 64);
    }
    return r;
  }

  // this += c * x ; |c| < 2^31
  void add_scaled(const U320& x, int64_t c) {
    if (c == 0) return;
    uint64_t mag = static_cast<uint64_t>(c < 0 ? -c : c);
    if ((x.w[1] | x.w[2] | x.w[3] | x.w[4]) == 0) {
      // single-limb coordinate: one widening multiply instead of five
      __uint128_t t = static_cast<__uint128_t>(x.w[0]) * mag;
      I384 prod;
      prod.w[0] = static_cast<uint64_t>(t);
      prod.w[1] = static_cast<uint64_t>(t >> 64);
      add(c < 0 ? prod.negated() : prod);
      return;
    }
    I384 prod;
    uint64_t carry = 0;
    for (size_t i = 0; i < 5; ++i) {
      __uint128_t t = static_cast<__uint128_t>(x.w[i]) * mag + carry;
      prod.w[i] = static_cast<uint64_t>(t);
      carry = static_cast<uint64_t>(t >> 64);
    }
    prod.w[5] = carry;
    add(c < 0 ? prod.negated() : prod);
  }

  // Exact division by nonzero d: returns x >= 0 with *this == d * x and x
  // fitting in 320 bits; nullopt if the division is inexact, the signs
  // disagree, or the quotient overflows.
  std::optional<U320> exact_div(int64_t d) const {
    if (d == 0) return std::nullopt;
    if (is_zero()) return U320{};
    bool neg = is_negative();
    if (neg != (d < 0)) return std::nullopt;
    I384 mag = neg ? negated() : *this;
    uint64_t dm = static_cast<uint64_t>(d < 0 ? -d : d);
    std::array<uint64_t, 6> q{};
    __uint128_t rem = 0;
    for (int i = 5; i >= 0; --i) {
      __uint128_t cur = (rem << 64) | mag.w[static_cast<size_t>(i)];
      q[static_cast<size_t>(i)] = static_cast<uint64_t>(cur / dm);
      rem = cur % dm;
    }
    if (rem != 0) return std::nullopt;
    if (q[5] != 0) return std::nullopt;
    U320 r;
    for (size_t i = 0; i < 5; ++i) r.w[i] = q[i];
    return r;
  }

  void to_be_bytes(uint8_t out[48]) const {
    for (size_t i = 0; i < 6; ++i) {
      uint64_t l = w[5 - i];
      for (int b = 0; b < 8; ++b) out[i * 8 + static_cast<size_t>(b)] = static_cast<uint8_t>(l >> (56 - 8 * b));
    }
  }
  static I384 from_be_bytes(const uint8_t in[48]) {
    I384 r;
    for (size_t i = 0; i < 6; ++i) {
      uint64_t l = 0;
      for (int b = 0; b < 8; ++b) l = (l << 8) | in[i * 8 + static_cast<size_t>(b)];
      r.w[5 - i] = l;
    }
    return r;
  }
};

}  // namespace hss
