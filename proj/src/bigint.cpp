#include "hss/bigint.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hss {

BigInt::BigInt(int64_t v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
  mag_.push_back(static_cast<uint32_t>(m));
  if (m >> 32) mag_.push_back(static_cast<uint32_t>(m >> 32));
}

BigInt BigInt::from_u64(uint64_t v) {
  BigInt r;
  if (v == 0) return r;
  r.sign_ = 1;
  r.mag_.push_back(static_cast<uint32_t>(v));
  if (v >> 32) r.mag_.push_back(static_cast<uint32_t>(v >> 32));
  return r;
}

void BigInt::trim(std::vector<uint32_t>& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

void BigInt::normalize() {
  trim(mag_);
  if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

int BigInt::cmp(const BigInt& o) const {
  if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
  int c = cmp_mag(mag_, o.mag_);
  return sign_ >= 0 ? c : -c;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r;
  r.reserve(std::max(a.size(), b.size()) + 1);
  uint64_t carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(static_cast<uint32_t>(s));
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<uint32_t>(carry));
  return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r;
  r.reserve(a.size());
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (s < 0) {
      s += (1ll << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.push_back(static_cast<uint32_t>(s));
  }
  trim(r);
  return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = static_cast<uint64_t>(a[i]) * b[j] + r[i + j] + carry;
      r[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry) {
      uint64_t cur = r[k] + carry;
      r[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  trim(r);
  return r;
}

// Shift-and-subtract long division on magnitudes; fine at oracle scales.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  assert(!b.empty());
  q.assign(a.size(), 0);
  r.clear();
  if (cmp_mag(a, b) < 0) {
    q.clear();
    r = a;
    return;
  }
  // bit-by-bit from the top
  int total_bits = static_cast<int>(a.size()) * 32;
  for (int bit = total_bits - 1; bit >= 0; --bit) {
    // r = (r << 1) | a[bit]
    uint32_t carry = (a[static_cast<size_t>(bit) / 32] >> (bit % 32)) & 1u;
    for (size_t i = 0; i < r.size(); ++i) {
      uint32_t nc = r[i] >> 31;
      r[i] = (r[i] << 1) | carry;
      carry = nc;
    }
    if (carry) r.push_back(carry);
    if (cmp_mag(r, b) >= 0) {
      r = sub_mag(r, b);
      q[static_cast<size_t>(bit) / 32] |= (1u << (bit % 32));
    }
  }
  trim(q);
  trim(r);
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  BigInt r;
  if (sign_ == o.sign_) {
    r.sign_ = sign_;
    r.mag_ = add_mag(mag_, o.mag_);
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.sign_ = sign_;
      r.mag_ = sub_mag(mag_, o.mag_);
    } else {
      r.sign_ = o.sign_;
      r.mag_ = sub_mag(o.mag_, mag_);
    }
  }
  r.normalize();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  if (sign_ == 0 || o.sign_ == 0) return r;
  r.sign_ = sign_ * o.sign_;
  r.mag_ = mul_mag(mag_, o.mag_);
  r.normalize();
  return r;
}

BigInt BigInt::operator/(const BigInt& o) const {
  if (o.sign_ == 0) throw std::domain_error("BigInt: division by zero");
  if (sign_ == 0) return BigInt();
  std::vector<uint32_t> q, rem;
  divmod_mag(mag_, o.mag_, q, rem);
  BigInt r;
  r.mag_ = std::move(q);
  r.sign_ = sign_ * o.sign_;
  r.normalize();
  return r;
}

BigInt BigInt::operator%(const BigInt& o) const {
  if (o.sign_ == 0) throw std::domain_error("BigInt: modulo by zero");
  if (sign_ == 0) return BigInt();
  std::vector<uint32_t> q, rem;
  divmod_mag(mag_, o.mag_, q, rem);
  BigInt r;
  r.mag_ = std::move(rem);
  r.sign_ = r.mag_.empty() ? 0 : sign_;
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.mag_.empty() ? 0 : 1;
  b.sign_ = b.mag_.empty() ? 0 : 1;
  while (!b.is_zero()) {
    BigInt t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

std::string BigInt::to_string() const {
  if (sign_ == 0) return "0";
  std::vector<uint32_t> m = mag_;
  std::string digits;
  while (!m.empty()) {
    // divide by 10^9
    uint64_t rem = 0;
    for (size_t i = m.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | m[i];
      m[i] = static_cast<uint32_t>(cur / 1000000000ull);
      rem = cur % 1000000000ull;
    }
    trim(m);
    char buf[16];
    if (m.empty()) {
      snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(rem));
    } else {
      snprintf(buf, sizeof buf, "%09llu", static_cast<unsigned long long>(rem));
    }
    digits.insert(0, buf);
  }
  return (sign_ < 0 ? "-" : "") + digits;
}

double BigInt::to_double() const {
  double v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = v * 4294967296.0 + mag_[i];
  return sign_ < 0 ? -v : v;
}

}  // namespace hss
