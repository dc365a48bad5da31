#include "d4/dlchar.hpp"
#include "d4/solver.hpp"
#include "doctest.h"

using namespace d4;

namespace {

const SymExpr A = SymExpr::sym(Symbol::Alpha), B = SymExpr::sym(Symbol::Beta), G = SymExpr::sym(Symbol::Gamma),
              D = SymExpr::sym(Symbol::Delta);

const EtaTable& eta() {
  static const EtaTable e = EtaTable::load(EtaTable::default_path());
  return e;
}

const SolveResult& solved(std::uint64_t q, std::int64_t ell) {
  static std::map<std::uint64_t, SolveResult> cache;
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, solve(eta(), q, ell)).first;
  return it->second;
}

VirtualUnipotent chars(std::initializer_list<std::pair<int, long>> terms) {
  VirtualUnipotent v{};
  for (auto [i, c] : terms) v[i] += c;
  return v;
}

std::array<long, kPartitions> eta_of(const VirtualUnipotent& nu, const std::vector<int>& J) {
  return restrict_split(nu, J, calibration().dict).eta.coeff;
}

}  // namespace

TEST_CASE("symbolic expressions") {
  const SymExpr e = (A + SymExpr(1)) * (A - SymExpr(1));
  CHECK(e == A * A - SymExpr(1));
  CHECK_FALSE(e.is_affine());
  CHECK((A * SymExpr(3) - B).is_affine());
  CHECK((SymExpr(3) * A - B + SymExpr(2)).linear(Symbol::Alpha) == 3);
  CHECK((SymExpr(3) * A - B + SymExpr(2)).constant() == 2);
  CHECK((A - A).is_zero());
  CHECK(SymExpr(5).is_constant());
  const SymExpr g = SymExpr(-9) * A + SymExpr(4) * B + SymExpr(8);
  CHECK((G + A).substitute(Symbol::Gamma, g) == SymExpr(-8) * A + SymExpr(4) * B + SymExpr(8));
  CHECK((D * B).substitute(Symbol::Delta, SymExpr(4)) == SymExpr(4) * B);
  CHECK(SymExpr(mpq_class(1, 2)).constant() == mpq_class(1, 2));
  CHECK((SymExpr(3) * A - B - SymExpr(1)).to_string() == "3*alpha - beta - 1");
}

TEST_CASE("input validation and refusal") {
  CHECK_THROWS_AS(make_context(eta(), 4, 5), RefusalError);
  CHECK_THROWS_AS(make_context(eta(), 32, 3), InvalidInputError);
  CHECK_THROWS_AS(make_context(eta(), 32, 7), InvalidInputError);
  CHECK_THROWS_AS(make_context(eta(), 24, 5), InvalidInputError);
  CHECK_THROWS_AS(make_context(eta(), 8, 9), InvalidInputError);
  CHECK_NOTHROW(make_context(eta(), 32, 11));
}

TEST_CASE("restrictions that refute splittings") {
  // psi7' - Psi10 on L_{1,3,4}
  CHECK(eta_of(chars({{7, 1}, {11, 1}, {12, 1}, {13, 1}}), {1, 3, 4}) == std::array<long, 5>{0, 1, -1, 4, -3});
  // psi6' - Psi10 on L_{1,3,4}
  CHECK(eta_of(chars({{6, 1}, {11, 1}, {12, 1}}), {1, 3, 4}) == std::array<long, 5>{0, 0, 1, 1, -1});
  // psi1' - Psi7 on L_{1,2,3}
  CHECK(eta_of(chars({{1, 1}, {2, 2}, {3, 1}, {4, 1}, {5, 1}, {7, 1}}), {1, 2, 3}) == std::array<long, 5>{4, 1, 0, -4, 0});
  const LevelRestriction r = restrict_split(chars({{6, 1}, {11, 1}, {12, 1}}), {1, 3, 4}, calibration().dict);
  CHECK(r.eta.negative);
}

TEST_CASE("regularity pairings recorded by the solver") {
  const SolveResult& r = solved(32, 11);
  const Fact* psi9 = r.log.find_fact("<Psi9, R_w0>");
  REQUIRE(psi9);
  CHECK(psi9->value == SymExpr(-8) + SymExpr(9) * A - SymExpr(4) * B + G);
  const Fact* psi13 = r.log.find_fact("<Psi13, R_w0>");
  REQUIRE(psi13);
  CHECK(psi13->value == D - SymExpr(4));
  const Fact* split = r.log.find_fact("a_{c,13}");
  REQUIRE(split);
  CHECK(split->value == SymExpr(3) * A - B - SymExpr(1));
}

TEST_CASE("solver reproduces the printed matrix at q = 32 and q = 128") {
  const SymExpr gamma = SymExpr(-9) * A + SymExpr(4) * B + SymExpr(8);
  auto expected = printed_decomposition_matrix();
  for (auto& row : expected)
    for (auto& e : row) e = e.substitute(Symbol::Gamma, gamma);
  for (auto [q, ell] : std::vector<std::pair<std::uint64_t, std::int64_t>>{{32, 11}, {128, 43}}) {
    const SolveResult& r = solved(q, ell);
    CHECK(r.state.d == expected);
    CHECK(r.state.fixed.at(Symbol::Delta) == SymExpr(4));
    CHECK(r.state.fixed.at(Symbol::Gamma) == gamma);
    for (bool k : r.state.known) CHECK(k);
  }
}

TEST_CASE("final bounds") {
  for (auto [q, ell] : std::vector<std::pair<std::uint64_t, std::int64_t>>{{32, 11}, {128, 43}}) {
    const SolveResult& r = solved(q, ell);
    const mpq_class qq = static_cast<unsigned long>(q);
    auto has = [&](const SymExpr& e) {
      for (const auto& c : r.bounds)
        if (c.rel == Relation::Geq && c.expr == e) return true;
      return false;
    };
    CHECK(has(SymExpr(qq / 2) - A));
    CHECK(has(SymExpr((3 * qq - 2) / 2) - B));
    CHECK(has(SymExpr(3) * A - B - SymExpr(1)));
    CHECK(has(SymExpr(-9) * A + SymExpr(4) * B + SymExpr(8)));
  }
}

TEST_CASE("decomposition numbers never exceed the projective characters") {
  // Psi_i is a summand of psi_i, so at any admissible (alpha, beta) each
  // column is bounded by the corresponding column of the projective table.
  const std::uint64_t q = 32;
  const SolveResult& r = solved(q, 11);
  const QMatrix T = evaluate_matrix(eta(), q);
  const std::vector<std::pair<long, long>> points = {{1, 2}, {16, 47}, {16, 40}, {10, 29}};
  for (auto [a, b] : points) {
    for (int col = 0; col < kUnipotent; ++col) {
      if (col + 1 == kOwnBlock) continue;
      const int j = column_index("psi" + std::to_string(col + 1));
      for (int row = 0; row < kUnipotent; ++row) {
        if (row + 1 == kOwnBlock) continue;
        const SymExpr e = r.state.d[row][col].substitute(Symbol::Alpha, SymExpr(a)).substitute(Symbol::Beta, SymExpr(b));
        REQUIRE(e.is_constant());
        CHECK(e.constant() >= 0);
        CHECK(e.constant() <= T[row][j]);
      }
    }
  }
}

TEST_CASE("Deligne-Lusztig scan") {
  const SolveResult& r = solved(32, 11);
  const int wp = weyl().from_word({1, 2, 3, 1, 4, 3});
  const Fact* f = r.log.find_fact("a_{" + weyl_label(wp) + ",14}");
  REQUIRE(f);
  CHECK(f->value == SymExpr(-4) * D + SymExpr(16));
  const Fact* w0 = r.log.find_fact("a_{w0,14}");
  REQUIRE(w0);
  CHECK(w0->value == SymExpr(192));
  CHECK(weyl_label(weyl().longest()) == "w0");
  CHECK(weyl_label(weyl().coxeter()) == "c");
  CHECK(weyl_label(weyl().identity()) == "1");
}

TEST_CASE("replay reproduces the run and detects tampering") {
  const SolverContext ctx = make_context(eta(), 32, 11);
  const SolveResult& r = solved(32, 11);
  const SolveResult again = replay(r.log, ctx);
  CHECK(again.state == r.state);
  ConstraintLog bad = r.log;
  for (auto& e : bad.entries)
    if (e.rule == Rule::Squeeze) e.conclusions.front() += " (edited)";
  CHECK_THROWS_AS(replay(bad, ctx), SpecMismatchError);
  // The log of one q replays at another q only where nothing depends on q.
  CHECK_THROWS_AS(replay(r.log, make_context(eta(), 128, 43)), SpecMismatchError);
}

TEST_CASE("the corrected table gives the same solution as eta") {
  const SolveResult from_table = solve(make_context(corrected_projective_table(), 32, 11));
  CHECK(from_table.state == solved(32, 11).state);
}
