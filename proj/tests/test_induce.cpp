#include <cstdio>
#include <fstream>

#include "d4/induce.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace d4;

namespace {

const EtaTable& eta() {
  static const EtaTable e = EtaTable::load(EtaTable::default_path());
  return e;
}

std::string temp_path(const std::string& name) { return "/tmp/d4_test_" + name + ".json"; }

}  // namespace

TEST_CASE("column names") {
  const auto& n = column_names();
  CHECK(n[0] == "psi1");
  CHECK(n[6] == "psi6'");
  CHECK(n[8] == "psi7'");
  CHECK(n[15] == "psi14");
  for (int j = 0; j < kColumns; ++j) CHECK(column_index(n[j]) == j);
  CHECK_THROWS_AS(column_index("psi15"), InvalidInputError);
}

TEST_CASE("projective columns") {
  const Field F = make_field(3);
  const auto cols = projective_columns(*F);
  REQUIRE(cols.size() == kColumns);
  // The q^3/2-dimensional characters induce to psi6..psi9.
  const mpq_class q = F->q();
  for (int j = 0; j < kColumns; ++j) {
    const bool half = j == 5 || j == 7 || j == 9 || j == 10;
    CHECK((cols[j].spec.degree(*F) == q * q * q / 2) == half);
  }
}

TEST_CASE("centralizer orders divide the group order") {
  const CentralizerTable t = CentralizerTable::build();
  for (std::uint64_t q : {4, 8, 16, 32}) CHECK(t.divides_at(q));
}

TEST_CASE("the printed table and its corrections") {
  const auto& corr = projective_table_corrections();
  REQUIRE(corr.size() == 2);
  for (const auto& c : corr) {
    CHECK(c.row == 12);
    CHECK(c.corrected == QPoly::parse("1/2*q^2 + 1/2*q"));
    CHECK(printed_projective_table()[c.row][c.col] == c.printed);
  }
  const auto diffs = compare_tables(corrected_projective_table(), printed_projective_table());
  CHECK(diffs.size() == 2);
}

TEST_CASE("no eta reproduces the printed chi13 row") {
  std::vector<int> fs;
  for (int f = 2; f <= 16; ++f) fs.push_back(f);
  try {
    (void)reconstruct_eta(printed_projective_table(), fs);
    FAIL("printed table accepted");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("chi13") != std::string::npos);
  }
  CHECK_THROWS_AS(reconstruct_eta(corrected_projective_table(), {2, 3, 4}), InvalidInputError);
}

TEST_CASE("the eta data file passes validation") {
  const EtaValidation v = validate_eta(eta(), {4, 8, 16, 32});
  CHECK(v.degrees);
  CHECK(v.green);
  CHECK(v.integral);
  for (int k = 1; k <= kClasses; ++k) CHECK(eta().value(1, k) == QPoly(1));
  // The Steinberg character vanishes off the identity.
  for (int k = 2; k <= kClasses; ++k) CHECK(eta().value(14, k).is_zero());
}

TEST_CASE("validation rejects a perturbed table") {
  EtaTable bad = eta();
  bad.set(13, 14, bad.value(13, 14) + QPoly(1));
  const EtaValidation v = validate_eta(bad, {4, 8});
  CHECK_FALSE(v.green);
  CHECK_FALSE(v.diffs.empty());
}

TEST_CASE("inner products reproduce the corrected table") {
  for (std::uint64_t q : {4, 8, 16}) {
    const QMatrix M = evaluate_matrix(eta(), q);
    const PolyMatrix& T = corrected_projective_table();
    for (int i = 0; i < kUnipotent; ++i)
      for (int j = 0; j < kColumns; ++j) {
        CHECK(M[i][j] >= 0);
        CHECK(M[i][j].get_den() == 1);
        CHECK(M[i][j] == T[i][j].eval(mpq_class(static_cast<unsigned long>(q))));
      }
  }
}

TEST_CASE("inner products are linear in the induced character") {
  const Field F = make_field(3);
  const auto cols = projective_columns(*F);
  const auto a = family_column(cols[1].spec, F), b = family_column(cols[5].spec, F);
  std::vector<mpq_class> s(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) s[k] = 2 * a[k] + b[k];
  for (int i = 1; i <= kUnipotent; ++i)
    CHECK(inner_product(eta(), s, i, 8) == 2 * inner_product(eta(), a, i, 8) + inner_product(eta(), b, i, 8));
  CHECK(inner_product(eta(), cols[1].spec, 2, F) == inner_product(eta(), a, 2, 8));
}

TEST_CASE("assembled matrix is unitriangular with triality") {
  const InnerProductMatrix A = assemble_matrix(eta(), {4, 8, 16, 32, 64, 128});
  CHECK_FALSE(A.swapped_13_14);
  CHECK(compare_tables(A.entries, corrected_projective_table()).empty());
  CHECK(check_unitriangular(A.entries).ok());
  PolyMatrix broken = A.entries;
  std::swap(broken[2][2], broken[2][3]);
  CHECK_FALSE(check_unitriangular(broken).ok());
  CHECK_THROWS(assemble_matrix(eta(), {4, 8}));
}

TEST_CASE("eta file round trip") {
  const std::string p = temp_path("roundtrip");
  eta().save(p, "test");
  const EtaTable back = EtaTable::load(p);
  for (int i = 1; i <= kUnipotent; ++i)
    for (int k = 1; k <= kClasses; ++k) CHECK(back.value(i, k) == eta().value(i, k));
  std::remove(p.c_str());
}

TEST_CASE("eta file errors") {
  const std::string p = temp_path("bad");
  eta().save(p, "test");
  nlohmann::json j;
  {
    std::ifstream in(p);
    j = nlohmann::json::parse(in);
  }
  auto write = [&](const nlohmann::json& x) { std::ofstream(p) << x.dump(); };

  nlohmann::json wrong = j;
  wrong["schema"] = "d4.eta/0";
  write(wrong);
  CHECK_THROWS_AS(EtaTable::load(p), DataError);

  nlohmann::json missing = j;
  missing["values"].erase(missing["values"].begin());
  write(missing);
  CHECK_THROWS_AS(EtaTable::load(p), DataError);

  nlohmann::json dup = j;
  dup["values"].push_back(j["values"][0]);
  write(dup);
  CHECK_THROWS_AS(EtaTable::load(p), DataError);

  std::ofstream(p) << "{ not json";
  CHECK_THROWS_AS(EtaTable::load(p), DataError);
  std::remove(p.c_str());
  CHECK_THROWS_AS(EtaTable::load(p), DataError);
}
