#include <algorithm>
#include <random>
#include <set>

#include "d4/dlchar.hpp"
#include "d4/weylhc.hpp"
#include "doctest.h"

using namespace d4;

namespace {

std::vector<long> degrees(const Parabolic& P) {
  const int id = P.class_of(weyl().identity());
  std::vector<long> d;
  for (const auto& row : P.characters()) d.push_back(row[id]);
  std::sort(d.begin(), d.end());
  return d;
}

long norm(const Parabolic& P, const std::vector<long>& a, const std::vector<long>& b) {
  long s = 0;
  for (int c = 0; c < P.class_count(); ++c) s += P.class_size(c) * a[c] * b[c];
  return s;
}

ClassFunction random_character(const Parabolic& P, std::mt19937_64& rng) {
  ClassFunction f{P.J(), std::vector<mpq_class>(P.class_count(), 0)};
  for (const auto& row : P.characters()) {
    const long c = static_cast<long>(rng() % 5) - 2;
    for (int cl = 0; cl < P.class_count(); ++cl) f.values[cl] += c * row[cl];
  }
  return f;
}

VirtualUnipotent apply_triality(const VirtualUnipotent& v) {
  VirtualUnipotent out{};
  for (int i = 1; i <= kUnipotent; ++i) out[triality_chi(i)] += v[i];
  return out;
}

}  // namespace

TEST_CASE("type A3 parabolics carry the S4 character table") {
  for (const std::vector<int>& J : std::vector<std::vector<int>>{{1, 2, 3}, {1, 3, 4}, {2, 3, 4}}) {
    const Parabolic& P = parabolic(J);
    CHECK(P.order() == 24);
    CHECK(P.class_count() == 5);
    CHECK(degrees(P) == std::vector<long>{1, 1, 2, 3, 3});
    for (int r = 0; r < kPartitions; ++r) CHECK_NOTHROW(rho_index(P, static_cast<Rho>(r)));
  }
  CHECK_THROWS_AS(rho_index(parabolic({1, 3}), Rho::P4), InvalidInputError);
}

TEST_CASE("W(D4) has 13 irreducible characters, orthonormal, degrees squared sum to 192") {
  const Parabolic& W = whole_weyl();
  REQUIRE(W.characters().size() == 13);
  long sq = 0;
  for (long d : degrees(W)) sq += d * d;
  CHECK(sq == 192);
  const auto& X = W.characters();
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = 0; b < X.size(); ++b) CHECK(norm(W, X[a], X[b]) == (a == b ? 192 : 0));
  // Column orthogonality at the identity.
  const int id = W.class_of(weyl().identity());
  for (int c = 0; c < W.class_count(); ++c) {
    long s = 0;
    for (const auto& row : X) s += row[id] * row[c];
    CHECK(s == (c == id ? 192 : 0));
  }
}

TEST_CASE("Frobenius reciprocity on random class functions") {
  std::mt19937_64 rng(7);
  const Parabolic& W = whole_weyl();
  for (const std::vector<int>& J : std::vector<std::vector<int>>{{1, 2, 3}, {1, 3, 4}, {1, 2}, {2}, {1, 3, 4, 2}}) {
    const Parabolic& P = parabolic(J);
    for (int t = 0; t < 20; ++t) {
      const ClassFunction f = random_character(P, rng), g = random_character(W, rng);
      CHECK(inner(W, induce(f, W.J()), g) == inner(P, f, restrict(g, J)));
    }
  }
}

TEST_CASE("induction from the trivial subgroup is the regular character") {
  const Parabolic& W = whole_weyl();
  const ClassFunction one{{}, {mpq_class(1)}};
  const auto coeff = decompose(induce(one, W.J()));
  const int id = W.class_of(weyl().identity());
  for (std::size_t i = 0; i < coeff.size(); ++i) CHECK(coeff[i] == W.characters()[i][id]);
}

TEST_CASE("eta basis of the A3 projectives") {
  const auto& eta = a3_pims();
  for (int i = 0; i < kPartitions; ++i) {
    const EtaExpansion e = eta_decompose(eta[i]);
    CHECK_FALSE(e.negative);
    for (int k = 0; k < kPartitions; ++k) CHECK(e.coeff[k] == (i == k ? 1 : 0));
  }
  RhoVector v{};
  for (int i = 0; i < kPartitions; ++i)
    for (int k = 0; k < kPartitions; ++k) v[k] += (i + 1) * eta[i][k];
  const EtaExpansion e = eta_decompose(v);
  for (int i = 0; i < kPartitions; ++i) CHECK(e.coeff[i] == i + 1);
  CHECK(eta_decompose({0, 0, 1, 2, -1}).negative);
}

TEST_CASE("Harish-Chandra induction of the A3 projectives") {
  const Dictionary& dict = calibration().dict;
  for (const std::vector<int>& J : std::vector<std::vector<int>>{{1, 2, 3}, {1, 3, 4}, {2, 3, 4}})
    for (const auto& eta : a3_pims()) {
      const VirtualUnipotent v = hc_induce(eta, J, dict);
      for (int i = 1; i <= kUnipotent; ++i) CHECK(v[i] >= 0);
    }
  // Triality permutes the three A3 Levis and with them the inductions of eta3.
  std::set<VirtualUnipotent> images, orbit;
  for (const std::vector<int>& J : std::vector<std::vector<int>>{{1, 2, 3}, {1, 3, 4}, {2, 3, 4}}) {
    const VirtualUnipotent v = hc_induce(a3_pims()[2], J, dict);
    orbit.insert(v);
    images.insert(apply_triality(v));
  }
  CHECK(orbit.size() == 3);
  CHECK(images == orbit);
  for (const auto& p : printed_inductions()) {
    VirtualUnipotent got = hc_induce(a3_pims()[p.eta - 1], p.J, dict);
    got[kOwnBlock] = p.value[kOwnBlock];
    CHECK(got == p.value);
  }
}

TEST_CASE("restriction is adjoint to induction on the A3 Levis") {
  const Dictionary& dict = calibration().dict;
  for (const std::vector<int>& J : std::vector<std::vector<int>>{{1, 2, 3}, {1, 3, 4}})
    for (int lambda = 0; lambda < kPartitions; ++lambda) {
      RhoVector e{};
      e[lambda] = 1;
      const VirtualUnipotent up = hc_induce(e, J, dict);
      for (int i = 1; i <= kUnipotent; ++i) {
        VirtualUnipotent chi{};
        chi[i] = 1;
        CHECK(hc_restrict(chi, J, dict)[lambda] == up[i]);
      }
    }
}

TEST_CASE("printed restrictions") {
  const Dictionary& dict = calibration().dict;
  for (const auto& p : printed_restrictions()) {
    if (p.name == "nu3^2") continue;  // printed value belongs to another Levi
    CHECK_MESSAGE(hc_restrict(p.v, p.J, dict) == p.value, p.name);
  }
}

TEST_CASE("an uncalibrated dictionary is refused") {
  CHECK_THROWS_AS(hc_induce(a3_pims()[0], {1, 2, 3}, Dictionary{}), CalibrationError);
}
