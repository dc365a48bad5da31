#include <random>

#include "d4/uchars.hpp"
#include "doctest.h"

using namespace d4;

namespace {

std::vector<UCharSpec> sample_specs(const FieldSpec& F) {
  const Elem mu = F.fix_mu();
  return {UCharSpec::linear({0, 0, 0, 0}), UCharSpec::linear({0, 0, 1, 0}), UCharSpec::linear({1, 1, 0, 0}),
          UCharSpec::linear({0, 1, 0, 1}), UCharSpec::linear({1, 0, 0, 1}), UCharSpec::linear({1, 1, 1, 0}),
          UCharSpec::linear({1, 1, 1, 1}), UCharSpec::linear({1, 1, 0, 1}), UCharSpec::linear({1, 0, 1, 0}),
          UCharSpec::linear({mu, 1, 0, 1}), UCharSpec::q3half(F, mu, mu), UCharSpec::q3half(F, 0, 0),
          UCharSpec::q3half(F, mu, 0), UCharSpec::q3half(F, 0, mu), UCharSpec::chi567(F.first_non_binary())};
}

UnipotentElement random_element(const Field& F, std::mt19937_64& rng) {
  std::array<Elem, kPositiveRoots> c{};
  for (auto& x : c) x = static_cast<Elem>(rng() % F->q());
  return UnipotentElement::from_canonical(F, c);
}

mpq_class phi_sum(const FieldSpec& F, const std::vector<Elem>& k) {
  // Direct sum over (F^x)^m of phi(k1 a1 + ... + km am).
  const int m = static_cast<int>(k.size());
  std::vector<Elem> a(m, 1);
  mpq_class s = 0;
  while (true) {
    Elem arg = 0;
    for (int i = 0; i < m; ++i) arg ^= F.mul(k[i], a[i]);
    s += F.phi(arg);
    int i = 0;
    while (i < m && ++a[i] == F.q()) a[i++] = 1;
    if (i == m) break;
  }
  return s;
}

}  // namespace

TEST_CASE("character values at special elements") {
  for (int q : {4, 8}) {
    auto F = make_field_q(q);
    const mpq_class qq = q;
    const auto id = UnipotentElement::identity(F);
    std::mt19937_64 rng(q);
    CHECK(value(UCharSpec::linear({0, 0, 0, 0}), random_element(F, rng)) == 1);
    for (Elem s : {Elem{0}, F->fix_mu()})
      for (Elem t : {Elem{0}, F->fix_mu()}) CHECK(value(UCharSpec::q3half(*F, s, t), id) == qq * qq * qq / 2);
    CHECK(value(UCharSpec::chi567(2), id) == qq);
    for (Elem a = 1; a < F->q(); ++a)
      CHECK(value(UCharSpec::chi567(2), UnipotentElement::root_element(F, 4, a)) == 0);
    for (const auto& c : sample_specs(*F)) CHECK(value(c, id) == c.degree(*F));
  }
  CHECK_THROWS_AS(UCharSpec::chi567(1), InvalidInputError);
  CHECK_THROWS_AS(UCharSpec::chi567(0), InvalidInputError);
  CHECK_THROWS_AS(UCharSpec::q3half(*make_field_q(16), 1, 0), InvalidInputError);
  auto F = make_field_q(8);
  UCharSpec bad;
  bad.kind = UCharSpec::Chi567;
  bad.d = 1;
  CHECK_THROWS_AS(value(bad, UnipotentElement::identity(F)), InvalidInputError);
  CHECK(UCharSpec::parse("q3half:mu,0", *F).s == F->fix_mu());
  CHECK(UCharSpec::parse("chi567", *F).d == 2);
  CHECK(UCharSpec::parse("lin:1,1,0,1", *F).b[3] == 1);
  CHECK_THROWS_AS(UCharSpec::parse("lin:1,1,0", *F), InvalidInputError);
  CHECK_THROWS_AS(UCharSpec::parse("lin:1,1,0,9", *F), InvalidInputError);
}

TEST_CASE("values are class functions on U") {
  std::mt19937_64 rng(11);
  for (int q : {4, 8}) {
    auto F = make_field_q(q);
    const auto specs = sample_specs(*F);
    for (int n = 0; n < 300; ++n) {
      const auto x = random_element(F, rng);
      const int r = 1 + static_cast<int>(rng() % kPositiveRoots);
      const Elem t = 1 + static_cast<Elem>(rng() % (q - 1));
      const auto y = conj_unip(x, UnipotentElement::root_element(F, r, t));
      for (const auto& c : specs) CHECK(value(c, x) == value(c, y));
    }
  }
}

TEST_CASE("norms over U at q = 4") {
  auto F = make_field_q(4);
  const FieldSpec& K = *F;
  const Elem mu = K.fix_mu();
  const std::vector<UCharSpec> specs = {UCharSpec::q3half(K, mu, 0), UCharSpec::chi567(3)};
  std::vector<mpq_class> norm(specs.size(), 0);
  std::array<Elem, kPositiveRoots> c{};
  for (std::uint32_t idx = 0; idx < (1u << 24); ++idx) {
    for (int p = 0; p < kPositiveRoots; ++p) c[p] = (idx >> (2 * p)) & 3;
    const auto x = UnipotentElement::from_canonical(F, c);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const mpq_class v = value(specs[i], x);
      norm[i] += v * v;
    }
  }
  for (const auto& n : norm) CHECK(n == mpq_class(1 << 24));
}

TEST_CASE("sums of phi over nonzero linear forms") {
  std::mt19937_64 rng(5);
  for (int q : {4, 8}) {
    auto F = make_field_q(q);
    for (int m = 1; m <= 3; ++m)
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<Elem> k(m);
        CharSum s;
        for (int i = 0; i < m; ++i) {
          k[i] = 1 + static_cast<Elem>(rng() % (q - 1));
          s.phase = s.phase.add(*F, SymPoly::constant(*F, k[i]).mul(*F, SymPoly::var(*F, i)));
        }
        const auto r = evaluate_sum(*F, m, {s}, false);
        CHECK(r.closed);
        CHECK(r.value == (m % 2 ? -1 : 1));
        CHECK(phi_sum(*F, k) == r.value);
      }
  }
}

TEST_CASE("the two printed family sums") {
  for (int q : {4, 8}) {
    auto F = make_field_q(q);
    const mpq_class qq = q;
    const Elem mu = F->fix_mu();
    const auto& fam = family("C7_3_q8_1");
    for (Elem s : {Elem{0}, mu})
      for (Elem t : {Elem{0}, mu}) {
        const auto c = UCharSpec::q3half(*F, s, t);
        const mpq_class expect = -F->phi(t) * qq * qq * (qq - 2) / 4;
        CHECK(family_sum(c, fam, F) == expect);
        CHECK(closed_form_sum(c, fam, F) == expect);
      }
    const auto c = UCharSpec::chi567(F->first_non_binary());
    CHECK(family_sum(c, family("C12p2_1_2_4_q6"), F) == 4 * qq);
    CHECK(closed_form_sum(c, family("C12p2_1_2_4_q6"), F) == 4 * qq);
  }
}

TEST_CASE("closed forms agree with explicit sums on the whole catalogue") {
  for (int q : {4, 8}) {
    auto F = make_field_q(q);
    for (const auto& fam : catalogue())
      for (const auto& c : sample_specs(*F)) {
        const auto cf = closed_form_sum(c, fam, F);
        REQUIRE(cf.has_value());
        CHECK_MESSAGE(*cf == family_sum(c, fam, F), fam.key << " " << c.to_string());
      }
  }
  auto F = make_field_q(16);
  for (const auto& fam : catalogue()) {
    if (fam.count.eval(16) > 60000) continue;
    for (const auto& c : sample_specs(*F)) CHECK(closed_form_sum(c, fam, F) == family_sum(c, fam, F));
  }
}

TEST_CASE("trivial character counts members") {
  for (int q : {4, 8, 32, 1024}) {
    auto F = make_field_q(q);
    for (const auto& fam : catalogue())
      CHECK(closed_form_sum(UCharSpec::linear({0, 0, 0, 0}), fam, F) == fam.count.eval(q));
  }
}

TEST_CASE("symbolic family coordinates match collection") {
  std::mt19937_64 rng(3);
  for (int q : {8, 16}) {
    auto F = make_field_q(q);
    for (const auto& fam : catalogue()) {
      const auto sf = symbolic_family(fam, *F);
      for (int n = 0; n < 20; ++n) {
        std::vector<Elem> a(kMaxVars, 1);
        for (int i = 0; i < sf.nvars; ++i) a[i] = 1 + static_cast<Elem>(rng() % (q - 1));
        std::vector<Elem> p(a.begin(), a.begin() + sf.nvars);
        const auto w = fam.word(*F, p);
        bool admissible = true;
        for (const auto& z : sf.zero) admissible = admissible && z.eval(*F, a) == 0;
        for (const auto& z : sf.nonzero) admissible = admissible && z.eval(*F, a) != 0;
        for (const auto& [z, v] : sf.trace) admissible = admissible && F->trace(z.eval(*F, a)) == v;
        CHECK(admissible == w.has_value());
        if (!w) continue;
        const auto x = UnipotentElement::from_word(F, *w);
        for (int r = 1; r <= kPositiveRoots; ++r) CHECK(sf.coords[r].eval(*F, a) == x.coord(r));
      }
    }
  }
}

TEST_CASE("elimination rules") {
  auto F = make_field_q(16);
  const auto a0 = SymPoly::var(*F, 0), a1 = SymPoly::var(*F, 1);
  // Frobenius powers of a variable are merged before summing.
  CharSum s;
  s.phase = a0.add(*F, a0.mul(*F, a0));
  CHECK(evaluate_sum(*F, 1, {s}, false).value == 15);
  // a0^3 is not a permutation of F^x when 3 | q - 1.
  s.phase = a0.mul(*F, a0).mul(*F, a0);
  CHECK_THROWS_AS(evaluate_sum(*F, 1, {s}, false), NotImplementedError);
  const auto r = evaluate_sum(*F, 1, {s}, true);
  CHECK_FALSE(r.closed);
  mpq_class direct = 0;
  for (Elem x = 1; x < 16; ++x) direct += F->phi(F->pow(x, 3));
  CHECK(r.value == direct);
  // [a0 = a1] phi(a0 + a1) counts the diagonal.
  CharSum e;
  e.zero.push_back(a0.add(*F, a1));
  e.phase = a0.add(*F, a1);
  CHECK(evaluate_sum(*F, 2, {e}, false).value == 15);
  // Tr(a0) = 0 has q/2 - 1 nonzero solutions.
  CharSum t;
  t.trace.emplace_back(a0, 0);
  CHECK(evaluate_sum(*F, 1, {t}, false).value == 7);
}
