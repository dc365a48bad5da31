#include <random>

#include "d4/field.hpp"
#include "doctest.h"

using namespace d4;

namespace {

// Schoolbook carry-less product reduced modulo the field polynomial.
Elem oracle_mul(Elem x, Elem y, Elem mod, int f) {
  Elem r = 0;
  for (int i = f - 1; i >= 0; --i) {
    r <<= 1;
    if (r >> f) r ^= mod;
    if ((y >> i) & 1) r ^= x;
  }
  return r;
}

int oracle_trace(const FieldSpec& F, Elem x) {
  Elem t = 0, s = x;
  for (int i = 0; i < F.degree(); ++i) {
    t ^= s;
    s = oracle_mul(s, s, F.modulus(), F.degree());
  }
  REQUIRE((t == 0 || t == 1));
  return static_cast<int>(t);
}

}  // namespace

TEST_CASE("default moduli are the least irreducible polynomials") {
  for (int f = 2; f <= 16; ++f) {
    const Elem m = FieldSpec::default_modulus(f);
    CHECK(FieldSpec::is_irreducible(m, f));
    for (Elem p = Elem(1) << f; p < m; ++p) CHECK_FALSE(FieldSpec::is_irreducible(p, f));
  }
  CHECK(FieldSpec::default_modulus(8) == 0x11b);
  CHECK_THROWS_AS(FieldSpec(1), InvalidInputError);
  CHECK_THROWS_AS(FieldSpec(17), InvalidInputError);
  CHECK_THROWS_AS(FieldSpec(4, 0x15), InvalidInputError);
}

TEST_CASE("table multiplication agrees with the shift-and-reduce oracle") {
  std::mt19937 rng(7);
  for (int f = 2; f <= 16; ++f) {
    const FieldSpec F(f);
    std::uniform_int_distribution<Elem> d(0, F.q() - 1);
    for (int i = 0; i < 2000; ++i) {
      Elem x = d(rng), y = d(rng);
      CHECK(F.mul(x, y) == oracle_mul(x, y, F.modulus(), f));
      CHECK(F.clmul_reduce(x, y) == oracle_mul(x, y, F.modulus(), f));
      if (y) CHECK(F.mul(F.div(x, y), y) == x);
      CHECK(F.sqr(F.sqrt(x)) == x);
    }
  }
  const FieldSpec F(4);
  for (Elem x = 0; x < 16; ++x)
    for (Elem y = 0; y < 16; ++y) CHECK(F.mul(x, y) == oracle_mul(x, y, 0x13, 4));
  CHECK_THROWS_AS(F.inv(0), DivisionByZeroError);
}

TEST_CASE("trace and the additive character") {
  for (int f : {2, 3, 4, 5, 8, 11}) {
    const FieldSpec F(f);
    int ones = 0;
    long phisum = 0;
    for (Elem x = 0; x < F.q(); ++x) {
      CHECK(F.trace(x) == oracle_trace(F, x));
      CHECK(F.trace(F.sqr(x)) == F.trace(x));
      ones += F.trace(x);
      phisum += F.phi(x);
    }
    CHECK(ones == static_cast<int>(F.q() / 2));
    CHECK(phisum == 0);
    CHECK(F.trace(1) == f % 2);
    CHECK(F.trace(F.fix_mu()) == 1);
    for (Elem y = 1; y < F.fix_mu(); ++y) CHECK(F.trace(y) == 0);
  }
}

TEST_CASE("Artin-Schreier solver") {
  for (int f : {2, 3, 4, 6}) {
    const FieldSpec F(f);
    for (Elem a = 1; a < F.q(); ++a)
      for (Elem b = 1; b < F.q(); ++b)
        for (Elem c = 0; c < F.q(); ++c) {
          Elem least = F.q();
          for (Elem t = 0; t < F.q(); ++t)
            if ((F.mul(a, F.sqr(t)) ^ F.mul(b, t) ^ c) == 0) {
              least = t;
              break;
            }
          auto r = F.artin_schreier(a, b, c);
          CHECK(r.has_value() == (least != F.q()));
          CHECK(r.has_value() == (F.trace(F.div(F.mul(a, c), F.sqr(b))) == 0));
          if (r) CHECK(*r == least);
        }
    CHECK_THROWS_AS(F.artin_schreier(0, 1, 1), DegenerateEquationError);
    CHECK_THROWS_AS(F.artin_schreier(1, 0, 1), DegenerateEquationError);
  }
}

TEST_CASE("checked field elements") {
  Field F = make_field(4);
  Field G = make_field(4, 0x19);
  FieldElement x(F, 3), y(F, 7);
  CHECK((x * y).bits() == F->mul(3, 7));
  CHECK((x + y).bits() == 4);
  CHECK(((x / y) * y) == x);
  CHECK_THROWS_AS(x + FieldElement(G, 3), SpecMismatchError);
  CHECK_THROWS_AS(FieldElement(F, 16), InvalidInputError);
  CHECK_THROWS_AS(make_field_q(6), InvalidInputError);
  CHECK(make_field_q(64)->degree() == 6);
  CHECK(fix_mu(F).trace() == 1);
}
