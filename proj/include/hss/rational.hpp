#pragma once

#include <string>

#include "hss/bigint.hpp"

namespace hss {

// Exact rational, always reduced, denominator > 0.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }
  Rational(int64_t n, int64_t d) : num_(n), den_(d) { reduce(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational reciprocal() const { return Rational(den_, num_); }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator<=(const Rational& o) const { return num_ * o.den_ <= o.num_ * den_; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  std::string to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }
  double to_double() const { return num_.to_double() / den_.to_double(); }

 private:
  void reduce() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (den_.is_negative()) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    num_ = num_ / g;
    den_ = den_ / g;
  }

  BigInt num_;
  BigInt den_;
};

// Edge strength: a rational, or +infinity for edges excluded from the
// strength recursion (arity-1 edges cross no cut).
struct Strength {
  bool finite = true;
  Rational value;

  static Strength infinity() { return {false, Rational()}; }
  static Strength of(Rational r) { return {true, std::move(r)}; }

  bool operator==(const Strength& o) const {
    if (!finite || !o.finite) return finite == o.finite;
    return value == o.value;
  }
  bool operator<(const Strength& o) const {
    if (!finite) return false;
    if (!o.finite) return true;
    return value < o.value;
  }
  bool operator<=(const Strength& o) const { return *this < o || *this == o; }

  std::string to_string() const { return finite ? value.to_string() : "inf"; }
};

}  // namespace hss
