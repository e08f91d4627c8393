#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sylch/field.hpp"

using namespace sylch;

TEST_CASE("residue arithmetic at small moduli", "[field]") {
  CHECK((Fp(2, 3) * Fp(2, 3)).val() == 1);
  CHECK(Fp(2, 5).inv().val() == 3);
  CHECK((Fp(4, 5) + Fp(3, 5)).val() == 2);
  CHECK((-Fp(1, 7)).val() == 6);
  CHECK((Fp(3, 7) / Fp(3, 7)).val() == 1);
  CHECK(inv2(5).val() == 3);
  CHECK((inv2(11) * Fp(2, 11)).val() == 1);
}

TEST_CASE("modulus must be an odd prime", "[field]") {
  CHECK_THROWS_AS(Fp(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(Fp(1, 9), std::invalid_argument);
  CHECK_THROWS_AS(Fp(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(CycInt::zero(15), std::invalid_argument);
  CHECK_THROWS_AS(Fp(0, 3).inv(), std::domain_error);
}

TEST_CASE("mixing moduli is rejected", "[field]") {
  CHECK_THROWS_AS(Fp(1, 3) + Fp(1, 5), std::logic_error);
  CHECK_THROWS_AS(CycInt::from_int(3, 1) * CycInt::from_int(5, 1), std::logic_error);
}

TEST_CASE("field axioms on random residues", "[field]") {
  std::mt19937 rng(20240811);
  for (uint32_t p : {3u, 5u, 7u, 11u}) {
    std::uniform_int_distribution<int64_t> d(-50, 50);
    for (int k = 0; k < 200; ++k) {
      Fp a(d(rng), p), b(d(rng), p), c(d(rng), p);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a + (-a) == Fp(0, p));
      if (!a.is_zero()) CHECK(a * a.inv() == Fp(1, p));
    }
  }
}

TEST_CASE("zeta powers form a homomorphism", "[field]") {
  for (uint32_t p : {3u, 5u, 7u}) {
    for (uint32_t s = 0; s < p; ++s)
      for (uint32_t t = 0; t < p; ++t)
        CHECK(eps(Fp(s, p)) * eps(Fp(t, p)) == eps(Fp(s + t, p)));
  }
}

TEST_CASE("full sum of zeta powers vanishes", "[field]") {
  for (uint32_t p : {3u, 5u}) {
    for (uint32_t a = 1; a < p; ++a) {
      CycInt s = CycInt::zero(p);
      for (uint32_t t = 0; t < p; ++t) s = s + eps(Fp(a, p) * Fp(t, p));
      CHECK(s.is_zero());
    }
    // and with a = 0 the sum is p, not 0
    CycInt s = CycInt::zero(p);
    for (uint32_t t = 0; t < p; ++t) s = s + eps(Fp(0, p));
    CHECK(s.as_rational_integer() == p);
  }
}

TEST_CASE("canonical form identifies equal cyclotomic integers", "[field]") {
  // zeta^2 == -1 - zeta in Z[zeta_3]
  CycInt z2 = CycInt::zeta_pow(3, 2);
  CycInt rhs = -CycInt::from_int(3, 1) - CycInt::zeta_pow(3, 1);
  CHECK(z2 == rhs);
  CHECK(z2.coeffs().back() == 0);
}

TEST_CASE("conjugation inverts zeta", "[field]") {
  for (uint32_t p : {3u, 5u, 7u}) {
    for (uint32_t t = 0; t < p; ++t) {
      CHECK(CycInt::zeta_pow(p, t).conj() == CycInt::zeta_pow(p, (p - t) % p));
      CHECK((CycInt::zeta_pow(p, t) * CycInt::zeta_pow(p, t).conj()) ==
            CycInt::from_int(p, 1));
    }
    // conjugation is a ring map
    CycInt a = CycInt::zeta_pow(p, 1) + CycInt::from_int(p, 4);
    CycInt b = CycInt::zeta_pow(p, 2).scaled(-3) + CycInt::from_int(p, 2);
    CHECK((a * b).conj() == a.conj() * b.conj());
  }
}

TEST_CASE("multiplicative order of eps(1) is p", "[field]") {
  for (uint32_t p : {3u, 5u, 7u}) {
    CycInt z = eps(Fp(1, p));
    CycInt acc = CycInt::from_int(p, 1);
    for (uint32_t k = 1; k < p; ++k) {
      acc = acc * z;
      CHECK(acc != CycInt::from_int(p, 1));
    }
    CHECK(acc * z == CycInt::from_int(p, 1));
  }
}

TEST_CASE("exact division checks divisibility", "[field]") {
  CycInt a = CycInt::zeta_pow(5, 1).scaled(6) + CycInt::from_int(5, 9);
  CHECK(a.div_exact(3).scaled(3) == a);
  CHECK_THROWS_AS(a.div_exact(2), std::domain_error);
}

TEST_CASE("rational integer detection", "[field]") {
  CycInt s = CycInt::zero(5);
  for (uint32_t t = 0; t < 5; ++t) s = s + CycInt::zeta_pow(5, t);
  CHECK(s.is_zero());
  CHECK(CycInt::from_int(5, -7).is_rational_integer());
  CHECK(CycInt::from_int(5, -7).as_rational_integer() == -7);
  CHECK(!CycInt::zeta_pow(5, 2).is_rational_integer());
}
