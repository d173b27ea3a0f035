#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "hss/bigint.hpp"
#include "hss/hashing.hpp"
#include "hss/l0sampler.hpp"
#include "hss/mersenne61.hpp"
#include "hss/rational.hpp"
#include "hss/wideint.hpp"

using namespace hss;

TEST_CASE("bigint small arithmetic matches int64") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    int64_t a = static_cast<int64_t>(rng.next() % 2000001) - 1000000;
    int64_t b = static_cast<int64_t>(rng.next() % 2000001) - 1000000;
    CHECK(BigInt(a) + BigInt(b) == BigInt(a + b));
    CHECK(BigInt(a) - BigInt(b) == BigInt(a - b));
    CHECK(BigInt(a) * BigInt(b) == BigInt(a * b));
    if (b != 0) {
      CHECK(BigInt(a) / BigInt(b) == BigInt(a / b));
      CHECK(BigInt(a) % BigInt(b) == BigInt(a % b));
    }
    CHECK((BigInt(a) < BigInt(b)) == (a < b));
  }
}

TEST_CASE("bigint big products round-trip through division") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    BigInt a = BigInt::from_u64(rng.next() | 1);
    BigInt b = BigInt::from_u64(rng.next() | 1);
    BigInt c = BigInt::from_u64(rng.next() % 100000 + 1);
    BigInt prod = a * b * c;
    CHECK(prod / (a * b) == c);
    CHECK(prod % a == BigInt(0));
    CHECK(BigInt::gcd(a * c, b * c) % c == BigInt(0));
  }
}

TEST_CASE("bigint decimal strings") {
  CHECK(BigInt(0).to_string() == "0");
  CHECK(BigInt(-12345).to_string() == "-12345");
  BigInt big = BigInt::from_u64(1000000000000000000ull) * BigInt(1000);
  CHECK(big.to_string() == "1000000000000000000000");
}

TEST_CASE("rational arithmetic stays reduced and exact") {
  Rational half(1, 2), third(1, 3);
  CHECK((half + third) == Rational(5, 6));
  CHECK((half * third) == Rational(1, 6));
  CHECK((half - third) == Rational(1, 6));
  CHECK(Rational(4, 8) == half);
  CHECK(Rational(-3, -6) == half);
  CHECK(Rational(3, -6) < Rational(0));
  CHECK(half.reciprocal() == Rational(2));

  // harmonic-style sums: exactness across many denominators
  Rational sum(0);
  for (int64_t d = 1; d <= 40; ++d) sum = sum + Rational(1, d);
  Rational back(0);
  for (int64_t d = 40; d >= 1; --d) back = back + Rational(1, d);
  CHECK(sum == back);
}

TEST_CASE("strength ordering with infinity") {
  Strength inf = Strength::infinity();
  Strength two = Strength::of(Rational(2));
  CHECK(two < inf);
  CHECK(!(inf < two));
  CHECK(!(inf < inf));
  CHECK(inf == Strength::infinity());
}

TEST_CASE("u320 shifting and modulo") {
  U320 x = U320::from_u64(0x1234567890abcdefull);
  U320 y = x.shifted_in(16, 0xbeef);
  CHECK(y.low_bits(16) == 0xbeef);
  CHECK(y.shifted_right(16) == x);

  // mod against native for values fitting 64 bits
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    uint64_t v = rng.next();
    uint64_t m = (rng.next() % ((1ull << 61) - 3)) + 2;
    CHECK(U320::from_u64(v).mod_u64(m) == v % m);
  }

  // wide value: (2^64)^4 mod m computed two ways
  U320 big;
  big.w[4] = 1;
  uint64_t m = (1ull << 61) - 1;
  uint64_t expect = 1;
  uint64_t base = (1ull << 61) - 1 + 1;  // 2^61... compute 2^256 mod m via pow
  (void)base;
  expect = m61::pow(2, 256);
  CHECK(big.mod_u64(m) == expect % m);
}

TEST_CASE("u320 byte round-trip and ordering") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    U320 x;
    for (auto& w : x.w) w = rng.next();
    uint8_t buf[40];
    x.to_be_bytes(buf);
    CHECK(U320::from_be_bytes(buf) == x);
  }
  CHECK(U320::from_u64(1) < U320::from_u64(2));
  U320 high;
  high.w[4] = 1;
  CHECK(U320::from_u64(~0ull) < high);
}

TEST_CASE("i384 scaled accumulation and exact division") {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    U320 x;
    x.w[0] = rng.next();
    x.w[1] = rng.next();
    x.w[2] = rng.next() & 0xffff;
    int64_t c = static_cast<int64_t>(rng.next() % 31) - 15;
    if (c == 0) c = 3;
    I384 acc;
    acc.add_scaled(x, c);
    auto q = acc.exact_div(c);
    REQUIRE(q.has_value());
    CHECK(*q == x);
    // mismatched divisor must not divide exactly (generically)
    auto q2 = acc.exact_div(c * 2);
    if (q2) CHECK(!(x.w[0] & 1));  // only even low limb can halve cleanly
  }
}

TEST_CASE("i384 cancellation and byte round-trip") {
  U320 a = U320::from_u64(77), b;
  b.w[3] = 123456;
  I384 acc;
  acc.add_scaled(a, 5);
  acc.add_scaled(b, -2);
  acc.add_scaled(a, -5);
  acc.add_scaled(b, 2);
  CHECK(acc.is_zero());

  I384 neg;
  neg.add_scaled(a, -3);
  CHECK(neg.is_negative());
  uint8_t buf[48];
  neg.to_be_bytes(buf);
  CHECK(I384::from_be_bytes(buf) == neg);
}

TEST_CASE("mersenne61 field identities") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    uint64_t a = rng.next() % m61::P;
    uint64_t b = rng.next() % m61::P;
    CHECK(m61::add(a, m61::sub(b, a)) == b % m61::P);
    CHECK(m61::mul(a, 1) == a % m61::P);
    if (a > 1) {
      // Fermat: a^(p-1) = 1
      CHECK(m61::pow(a, m61::P - 1) == 1);
    }
  }
  m61::PowTable t(1234567);
  for (int i = 0; i < 100; ++i) {
    uint64_t e = rng.next() % (m61::P - 1);
    CHECK(t.pow(e) == m61::pow(1234567, e));
  }
}

TEST_CASE("hash derivation is deterministic and domain-separated") {
  Key128 a = derive_key(42, "conn", {1, 2});
  Key128 b = derive_key(42, "conn", {1, 2});
  Key128 c = derive_key(42, "kappa", {1, 2});
  Key128 d = derive_key(43, "conn", {1, 2});
  CHECK(a == b);
  CHECK(!(a == c));
  CHECK(!(a == d));
}

TEST_CASE("leading-zero geometric rates") {
  // P(lz >= j) should be ~2^-j
  Key128 k = derive_key(7, "lz-test");
  std::map<int, int> counts;
  const int trials = 200000;
  for (int i = 0; i < trials; ++i) {
    U320 x = U320::from_u64(static_cast<uint64_t>(i) + 1);
    int lz = leading_zeros64(coord_hash64(k, x));
    for (int j = 0; j <= lz && j < 8; ++j) counts[j]++;
  }
  for (int j = 1; j < 8; ++j) {
    double freq = static_cast<double>(counts[j]) / trials;
    double expect = std::pow(0.5, j);
    CHECK(freq > expect * 0.9);
    CHECK(freq < expect * 1.1);
  }
}
