#include <random>

#include "d4/chevalley.hpp"
#include "doctest.h"

using namespace d4;

namespace {

// The natural 8-dimensional representation. Basis order e1..e4, f4..f1 with
// alpha1 = e1-e2, alpha3 = e2-e3, alpha2 = e3-e4, alpha4 = e3+e4. In
// characteristic 2 all structure-constant signs disappear.
using Mat = std::array<std::array<Elem, 8>, 8>;

Mat identity8() {
  Mat m{};
  for (int i = 0; i < 8; ++i) m[i][i] = 1;
  return m;
}

Mat matmul(const FieldSpec& F, const Mat& a, const Mat& b) {
  Mat c{};
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      if (a[i][k])
        for (int j = 0; j < 8; ++j) c[i][j] ^= F.mul(a[i][k], b[k][j]);
  return c;
}

int e_index(int i) { return i - 1; }
int f_index(int i) { return 8 - i; }

Mat root_matrix(const FieldSpec& F, int r, Elem t) {
  const Coeffs& c = root_system().root(r).coeffs;
  // Coefficients of e1..e4.
  int v[5] = {0, c[0], c[2] - c[0], c[1] + c[3] - c[2], c[3] - c[1]};
  int plus[2], minus[2], np = 0, nm = 0;
  for (int i = 1; i <= 4; ++i) {
    if (v[i] == 1) plus[np++] = i;
    if (v[i] == -1) minus[nm++] = i;
  }
  Mat m = identity8();
  (void)F;
  if (np == 1 && nm == 1) {
    const int i = plus[0], j = minus[0];
    m[e_index(i)][e_index(j)] ^= t;
    m[f_index(j)][f_index(i)] ^= t;
  } else {
    REQUIRE(np == 2);
    const int i = plus[0], j = plus[1];
    m[e_index(i)][f_index(j)] ^= t;
    m[e_index(j)][f_index(i)] ^= t;
  }
  return m;
}

Mat rep(const UnipotentElement& x) {
  const FieldSpec& F = *x.field();
  Mat m = identity8();
  for (auto [r, t] : x.word()) m = matmul(F, m, root_matrix(F, r, t));
  return m;
}

UnipotentElement random_element(const Field& F, std::mt19937& rng) {
  std::uniform_int_distribution<Elem> d(0, F->q() - 1);
  Coords c{};
  for (int r = 1; r <= kPositiveRoots; ++r) c[r] = d(rng);
  return UnipotentElement(F, c);
}

}  // namespace

TEST_CASE("matrix oracle satisfies the commutator relations") {
  const FieldSpec F(3);
  const auto& rs = root_system();
  for (int a = 1; a <= kPositiveRoots; ++a)
    for (int b = 1; b <= kPositiveRoots; ++b) {
      Mat xa = root_matrix(F, a, 3), xb = root_matrix(F, b, 5);
      Mat lhs = matmul(F, xa, xb);
      Mat rhs = matmul(F, xb, xa);
      if (rs.sum(a, b)) rhs = matmul(F, rhs, root_matrix(F, rs.sum(a, b), F.mul(3, 5)));
      CHECK(lhs == rhs);
    }
}

TEST_CASE("collected multiplication is a homomorphism into the matrix group") {
  std::mt19937 rng(11);
  for (int f : {2, 3, 5}) {
    Field F = make_field(f);
    for (int i = 0; i < 300; ++i) {
      auto x = random_element(F, rng), y = random_element(F, rng);
      CHECK(rep(x * y) == matmul(*F, rep(x), rep(y)));
      CHECK((x * x.inverse()).is_identity());
      CHECK(rep(x.inverse()) == matmul(*F, rep(x.inverse()), identity8()));
    }
  }
}

TEST_CASE("arbitrary words collect to the same matrix") {
  std::mt19937 rng(5);
  Field F = make_field(4);
  std::uniform_int_distribution<int> root(1, 12);
  std::uniform_int_distribution<Elem> val(1, 15);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::pair<int, Elem>> w;
    Mat m = identity8();
    for (int k = 0; k < 20; ++k) {
      int r = root(rng);
      Elem t = val(rng);
      w.emplace_back(r, t);
      m = matmul(*F, m, root_matrix(*F, r, t));
    }
    CHECK(rep(UnipotentElement::from_word(F, w)) == m);
  }
}

TEST_CASE("the representation is faithful on U") {
  // Distinct normal forms give distinct matrices, checked on random pairs
  // differing in one coordinate.
  std::mt19937 rng(3);
  Field F = make_field(2);
  for (int i = 0; i < 200; ++i) {
    auto x = random_element(F, rng);
    Coords c = x.coords();
    int r = 1 + i % 12;
    c[r] ^= 1 + i % 3;
    CHECK(rep(x) != rep(UnipotentElement(F, c)));
  }
}

TEST_CASE("torus and Weyl conjugation") {
  std::mt19937 rng(9);
  Field F = make_field(3);
  auto h = TorusElement::make(*F, {2, 3, 5, 7});
  for (int i = 0; i < 50; ++i) {
    auto x = random_element(F, rng), y = random_element(F, rng);
    CHECK(conj_torus(x * y, h) == conj_torus(x, h) * conj_torus(y, h));
  }
  CHECK_THROWS_AS(TorusElement::make(*F, {0, 1, 1, 1}), InvalidInputError);
  const auto& W = weyl();
  auto c = W.carriers({3, 8, 9, 10}, {1, 2, 4, 12});
  REQUIRE_FALSE(c.empty());
  auto x = UnipotentElement::from_word(F, {{3, 1}, {8, 2}, {9, 3}, {10, 4}});
  auto y = conj_weyl(x, c[0]);
  CHECK(y.support() == std::vector<int>{1, 2, 4, 12});
  CHECK_THROWS_AS(conj_weyl(UnipotentElement::root_element(F, 1, 1), W.simple(1)), OutOfUError);
}

TEST_CASE("hex round trip and input validation") {
  std::mt19937 rng(1);
  Field F = make_field(4);
  auto x = random_element(F, rng);
  CHECK(UnipotentElement::from_hex(F, x.to_hex()) == x);
  CHECK_THROWS_AS(UnipotentElement::from_hex(F, "1,2"), InvalidInputError);
  CHECK_THROWS_AS(UnipotentElement::from_word(F, {{13, 1}}), OutOfUError);
  CHECK_THROWS_AS(UnipotentElement::from_word(F, {{1, 16}}), InvalidInputError);
  CHECK_THROWS_AS(x * UnipotentElement::identity(make_field(3)), SpecMismatchError);
}

TEST_CASE("type-A normalization reaches the ordered product") {
  Field F = make_field(4);
  std::mt19937 rng(2);
  std::uniform_int_distribution<Elem> val(1, 15);
  const std::vector<std::vector<int>> systems = {{1, 3, 2}, {1, 3, 4}, {4, 3, 2}, {1, 3}, {2}};
  for (const auto& sys : systems)
    for (int i = 0; i < 30; ++i) {
      std::vector<std::pair<int, Elem>> w;
      for (int r : sys) w.emplace_back(r, val(rng));
      std::shuffle(w.begin(), w.end(), rng);
      auto res = typeA_normalize(sys, w, F);
      std::vector<std::pair<int, Elem>> ordered;
      for (std::size_t k = 0; k < sys.size(); ++k) ordered.emplace_back(sys[k], res.coefficients[k]);
      CHECK(res.result == UnipotentElement::from_word(F, ordered));
      CHECK(conj_unip(UnipotentElement::from_word(F, w), res.conjugator) == res.result);
    }
  CHECK_THROWS_AS(typeA_normalize({1, 2}, {{1, 1}, {2, 1}}, F), InvalidInputError);
}

TEST_CASE("centralizer order by enumeration refuses large q") {
  Field F = make_field(3);
  CHECK_THROWS_AS(centralizer_order_U(UnipotentElement::identity(F)), RefusalError);
}
