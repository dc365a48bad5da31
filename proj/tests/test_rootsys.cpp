#include <map>
#include <set>

#include "d4/rootsys.hpp"
#include "doctest.h"

using namespace d4;

TEST_CASE("positive roots and sums") {
  const auto& rs = root_system();
  int height_count[6] = {};
  for (int r = 1; r <= kPositiveRoots; ++r) ++height_count[rs.root(r).height()];
  CHECK(height_count[1] == 4);
  CHECK(height_count[2] == 3);
  CHECK(height_count[3] == 3);
  CHECK(height_count[4] == 1);
  CHECK(height_count[5] == 1);
  CHECK(rs.sum(1, 3) == 5);
  CHECK(rs.sum(2, 3) == 6);
  CHECK(rs.sum(3, 4) == 7);
  CHECK(rs.sum(5, 2) == 8);
  CHECK(rs.sum(5, 4) == 9);
  CHECK(rs.sum(6, 4) == 10);
  CHECK(rs.sum(8, 4) == 11);
  CHECK(rs.sum(11, 3) == 12);
  CHECK(rs.sum(1, 2) == 0);
  CHECK(rs.sum(12, 1) == 0);
  // Every root has norm 2 under the Cartan form.
  for (int r = 1; r <= kRoots; ++r) {
    int n = 0;
    for (int i = 1; i <= kRank; ++i) n += rs.pairing(r, i) * rs.root(r).coeffs[i - 1];
    CHECK(n == 2);
  }
}

TEST_CASE("torus weights match the printed scaling table") { CHECK_NOTHROW(check_torus_weights()); }

TEST_CASE("triality permutes roots and fixes alpha_3") {
  const auto& rs = root_system();
  CHECK(rs.triality(1) == 4);
  CHECK(rs.triality(4) == 2);
  CHECK(rs.triality(2) == 1);
  CHECK(rs.triality(3) == 3);
  std::set<int> img;
  for (int r = 1; r <= kPositiveRoots; ++r) {
    img.insert(rs.triality(r));
    CHECK(rs.triality(rs.triality(rs.triality(r))) == r);
    for (int s = 1; s <= kPositiveRoots; ++s)
      if (rs.sum(r, s)) CHECK(rs.sum(rs.triality(r), rs.triality(s)) == rs.triality(rs.sum(r, s)));
  }
  CHECK(img.size() == 12);
}

TEST_CASE("Weyl group structure") {
  const auto& W = weyl();
  CHECK(W.order() == 192);
  CHECK(W.length(W.longest()) == 12);
  for (int r = 1; r <= kRoots; ++r) CHECK(W.element(W.longest()).apply(r) == RootSystemD4::negate(r));
  std::map<int, int> by_length;
  for (const auto& w : W.elements()) ++by_length[w.length];
  // Coefficients of [2][4][4][6], the Poincare polynomial of D4.
  const int expected[13] = {1, 4, 9, 16, 23, 28, 30, 28, 23, 16, 9, 4, 1};
  for (int l = 0; l <= 12; ++l) CHECK(by_length[l] == expected[l]);
  CHECK(W.class_count() == 13);
  int total = 0;
  for (int c = 0; c < W.class_count(); ++c) total += W.class_size(c);
  CHECK(total == 192);
  const int cox = W.coxeter();
  int x = cox, ord = 1;
  while (x != 0) {
    x = W.mul(x, cox);
    ++ord;
  }
  CHECK(ord == 6);
  for (int a = 0; a < 192; a += 7)
    for (int b = 0; b < 192; b += 5) {
      CHECK(W.length(W.mul(a, b)) <= W.length(a) + W.length(b));
      CHECK(W.mul(W.mul(a, b), W.inverse(b)) == a);
      CHECK(W.triality(W.mul(a, b)) == W.mul(W.triality(a), W.triality(b)));
    }
}

TEST_CASE("Bruhat order basics") {
  const auto& W = weyl();
  for (int w = 0; w < W.order(); ++w) {
    CHECK(W.bruhat_leq(0, w));
    CHECK(W.bruhat_leq(w, W.longest()));
    CHECK(W.bruhat_leq(w, w));
  }
  CHECK_FALSE(W.bruhat_leq(W.simple(1), W.simple(2)));
}

TEST_CASE("orbit tuples and carriers") {
  const auto& W = weyl();
  auto orb = W.orbit_tuples({1});
  CHECK(orb.size() == 12);
  auto c = W.carriers({3, 8, 9, 10}, {1, 2, 4, 12});
  CHECK_FALSE(c.empty());
  for (int w : c) CHECK(W.element(w).apply(3) == 1);
}
