#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <vector>

#include "doctest.h"
#include "dring/scalar.hpp"

using namespace dring;

static Quaternion q(long w, long x, long y, long z) {
  return {Rational(w), Rational(x), Rational(y), Rational(z)};
}

TEST_CASE("rational parsing is strict and canonical") {
  RationalRing Q;
  CHECK(Q.str(Q.parse("3/4")) == "3/4");
  CHECK(Q.str(Q.parse("-5")) == "-5");
  CHECK(Q.str(Q.parse("7/1")) == "7");
  CHECK(Q.str(Q.parse("6/4")) == "3/2");
  CHECK(Q.str(Q.parse("-6/4")) == "-3/2");
  CHECK(Q.str(Q.parse("0/9")) == "0");
  CHECK(Q.str(Q.parse("  12/8 ")) == "3/2");
  CHECK(Q.str(Q.parse("\"5/10\"")) == "1/2");
  CHECK_THROWS_AS(Q.parse(""), ParseError);
  CHECK_THROWS_AS(Q.parse("abc"), ParseError);
  CHECK_THROWS_AS(Q.parse("1/0"), ParseError);
  CHECK_THROWS_AS(Q.parse("3.5"), ParseError);
  CHECK_THROWS_AS(Q.parse("1/2/3"), ParseError);
  CHECK_THROWS_AS(Q.parse("1/-2"), ParseError);
  CHECK_THROWS_AS(Q.parse("--4"), ParseError);
}

TEST_CASE("rational field operations") {
  RationalRing Q;
  auto a = Q.parse("3/4");
  auto b = Q.parse("-2/3");
  CHECK(Q.str(Q.add(a, b)) == "1/12");
  CHECK(Q.str(Q.sub(a, b)) == "17/12");
  CHECK(Q.str(Q.mul(a, b)) == "-1/2");
  CHECK(Q.str(Q.inv(b)) == "-3/2");
  CHECK(Q.eq(Q.mul(b, Q.inv(b)), Q.one()));
  CHECK(Q.is_zero(Q.add(a, Q.neg(a))));
  CHECK(Q.eq(Q.conj(a), a));
  CHECK_THROWS_AS(Q.inv(Q.zero()), ZeroInverse);
  CHECK(Q.characteristic() == 0);
  CHECK_FALSE(Q.char_two());
}

TEST_CASE("prime field construction validates the modulus") {
  CHECK_NOTHROW(PrimeField(2));
  CHECK_NOTHROW(PrimeField(3));
  CHECK_NOTHROW(PrimeField(7));
  CHECK_NOTHROW(PrimeField(2147483647));  // 2^31 - 1 is prime
  CHECK_THROWS_AS(PrimeField(0), InvalidModulus);
  CHECK_THROWS_AS(PrimeField(1), InvalidModulus);
  CHECK_THROWS_AS(PrimeField(4), InvalidModulus);
  CHECK_THROWS_AS(PrimeField(9), InvalidModulus);
  CHECK_THROWS_AS(PrimeField(1000000), InvalidModulus);
  CHECK_THROWS_AS(PrimeField(std::uint64_t{1} << 31), InvalidModulus);
}

TEST_CASE("prime field arithmetic oracles") {
  PrimeField F7(7);
  CHECK(F7.inv(3) == 5);  // 3 * 5 = 15 = 1 mod 7
  CHECK(F7.mul(3, F7.inv(3)) == 1);
  CHECK(F7.add(5, 4) == 2);
  CHECK(F7.sub(2, 5) == 4);
  CHECK(F7.neg(3) == 4);
  CHECK(F7.from_int(-1) == 6);
  CHECK(F7.from_int(700000001) == F7.from_int(700000001 % 7));
  CHECK_THROWS_AS(F7.inv(0), ZeroInverse);

  PrimeField F2(2);
  CHECK(F2.char_two());
  CHECK(F2.add(1, 1) == 0);
  CHECK(F2.inv(1) == 1);

  // Exhaustive inverse check over a few fields.
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 31ull, 101ull}) {
    PrimeField F(p);
    for (std::uint64_t a = 1; a < p; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
  }

  // Large modulus products must not overflow.
  PrimeField big(2147483647);
  std::uint64_t a = 2147483646;
  CHECK(big.mul(a, a) == big.mul(big.neg(1), big.neg(1)));
  CHECK(big.mul(a, big.inv(a)) == 1);
}

TEST_CASE("prime field parsing") {
  PrimeField F7(7);
  CHECK(F7.parse("3") == 3);
  CHECK(F7.parse("10") == 3);
  CHECK(F7.parse("-3") == 4);
  // Check the big literal against an independent digit-by-digit reduction.
  std::uint64_t acc = 0;
  for (char c : std::string("123456789012345678901234567890")) acc = (acc * 10 + (c - '0')) % 7;
  CHECK(F7.parse("123456789012345678901234567890") == acc);
  CHECK_THROWS_AS(F7.parse(""), ParseError);
  CHECK_THROWS_AS(F7.parse("x"), ParseError);
  CHECK_THROWS_AS(F7.parse("1/2"), ParseError);
}

TEST_CASE("quaternion multiplication table") {
  QuaternionRing H;
  auto one = H.one(), i = q(0, 1, 0, 0), j = q(0, 0, 1, 0), k = q(0, 0, 0, 1);
  auto m1 = H.neg(one);
  CHECK(H.eq(H.mul(i, i), m1));
  CHECK(H.eq(H.mul(j, j), m1));
  CHECK(H.eq(H.mul(k, k), m1));
  CHECK(H.eq(H.mul(i, j), k));
  CHECK(H.eq(H.mul(j, k), i));
  CHECK(H.eq(H.mul(k, i), j));
  CHECK(H.eq(H.mul(j, i), H.neg(k)));
  CHECK(H.eq(H.mul(k, j), H.neg(i)));
  CHECK(H.eq(H.mul(i, k), H.neg(j)));
  CHECK(H.eq(H.mul(H.mul(i, j), k), m1));  // ijk = -1
}

TEST_CASE("quaternion inverse oracle: (1+i+j+k)^-1 = (1-i-j-k)/4") {
  QuaternionRing H;
  auto u = q(1, 1, 1, 1);
  auto expect = Quaternion{Rational(1, 4), Rational(-1, 4), Rational(-1, 4), Rational(-1, 4)};
  CHECK(H.eq(H.inv(u), expect));
  CHECK(H.eq(H.mul(u, H.inv(u)), H.one()));
  CHECK(H.eq(H.mul(H.inv(u), u), H.one()));
  CHECK_THROWS_AS(H.inv(H.zero()), ZeroInverse);
}

TEST_CASE("quaternion conjugation is an anti-automorphism") {
  QuaternionRing H;
  std::vector<Quaternion> samples = {q(1, 2, 3, 4), q(0, -1, 5, 2), q(7, 0, 0, -3),
                                     Quaternion{Rational(1, 2), Rational(-2, 3), Rational(0),
                                                Rational(5, 7)}};
  for (const auto& a : samples)
    for (const auto& b : samples) {
      CHECK(H.eq(H.conj(H.mul(a, b)), H.mul(H.conj(b), H.conj(a))));
      CHECK(H.eq(H.conj(H.add(a, b)), H.add(H.conj(a), H.conj(b))));
      CHECK(H.eq(H.conj(H.conj(a)), a));
      // a * conj(a) is the (real, central) norm.
      auto n = H.mul(a, H.conj(a));
      CHECK(n.x == 0);
      CHECK(n.y == 0);
      CHECK(n.z == 0);
      CHECK(H.eq(H.mul(a, H.conj(a)), H.mul(H.conj(a), a)));
    }
}

TEST_CASE("quaternion text round trips") {
  QuaternionRing H;
  auto a = Quaternion{Rational(1, 2), Rational(-3), Rational(0), Rational(4, 5)};
  CHECK(H.str(a) == "[1/2,-3,0,4/5]");
  CHECK(H.eq(H.parse(H.str(a)), a));
  CHECK(H.eq(H.parse("[ 1/2 , -3 , 0 , 4/5 ]"), a));
  CHECK(H.eq(H.parse("5"), q(5, 0, 0, 0)));  // bare rational means real quaternion
  CHECK(H.eq(H.parse("-2/3"), Quaternion{Rational(-2, 3), Rational(0), Rational(0), Rational(0)}));
  CHECK_THROWS_AS(H.parse("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(H.parse("[1,2,3,4,5]"), ParseError);
  CHECK_THROWS_AS(H.parse("[1,2,3,x]"), ParseError);
  CHECK_THROWS_AS(H.parse("[1,2,3,4"), ParseError);
  CHECK(H.characteristic() == 0);
  CHECK_FALSE(H.char_two());
}

TEST_CASE("ring descriptors and names") {
  RationalRing Q;
  PrimeField F5(5);
  PrimeField F7(7);
  QuaternionRing H;
  CHECK(Q.name() == "rationals");
  CHECK(F5.name() == "prime_field");
  CHECK(H.name() == "rational_quaternions");
  CHECK(Q.descriptor() == RingDescriptor{RingKind::rationals, 0});
  CHECK(F5.descriptor() == RingDescriptor{RingKind::prime_field, 5});
  CHECK_FALSE(F5.descriptor() == F7.descriptor());
  CHECK(ring_kind_from_name("rationals") == RingKind::rationals);
  CHECK(ring_kind_from_name("prime_field") == RingKind::prime_field);
  CHECK(ring_kind_from_name("rational_quaternions") == RingKind::rational_quaternions);
  CHECK_THROWS_AS(ring_kind_from_name("octonions"), ParseError);
  CHECK(ring_kind_name(RingKind::prime_field) == "prime_field");
}

TEST_CASE("base-field coordinates round trip") {
  QuaternionRing H;
  auto a = Quaternion{Rational(1, 2), Rational(-3), Rational(0), Rational(4, 5)};
  Rational c[4];
  ScalarCoords<QuaternionRing>::to_coords(H, a, c);
  CHECK(c[0] == Rational(1, 2));
  CHECK(c[1] == Rational(-3));
  CHECK(c[2] == Rational(0));
  CHECK(c[3] == Rational(4, 5));
  CHECK(H.eq(ScalarCoords<QuaternionRing>::from_coords(H, c), a));

  PrimeField F7(7);
  std::uint64_t pc[1];
  ScalarCoords<PrimeField>::to_coords(F7, 4, pc);
  CHECK(pc[0] == 4);
  CHECK(ScalarCoords<PrimeField>::from_coords(F7, pc) == 4);
  CHECK(ScalarCoords<PrimeField>::base_ring(F7).modulus() == 7);
}
