#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hss {

// Arbitrary-precision signed integer, base 2^32 magnitude. Sized for exact
// rational strength arithmetic (reciprocal-sum identities demand exactness;
// common denominators of strength sums overflow 128-bit words).
class BigInt {
 public:
  BigInt() = default;
  BigInt(int64_t v);  // NOLINT(google-explicit-constructor) numeric literal ergonomics

  static BigInt from_u64(uint64_t v);

  bool is_zero() const { return sign_ == 0; }
  bool is_negative() const { return sign_ < 0; }
  int sign() const { return sign_; }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;

  // Truncated division (quotient rounds toward zero), d != 0.
  BigInt operator/(const BigInt& o) const;
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return sign_ == o.sign_ && mag_ == o.mag_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const { return cmp(o) < 0; }
  bool operator<=(const BigInt& o) const { return cmp(o) <= 0; }
  bool operator>(const BigInt& o) const { return cmp(o) > 0; }
  bool operator>=(const BigInt& o) const { return cmp(o) >= 0; }

  static BigInt gcd(BigInt a, BigInt b);

  std::string to_string() const;
  double to_double() const;

 private:
  int cmp(const BigInt& o) const;
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  // requires |a| >= |b|
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  static void trim(std::vector<uint32_t>& m);
  void normalize();

  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // little-endian, no trailing zeros
};

}  // namespace hss
