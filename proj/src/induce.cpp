#include "d4/induce.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "d4/dlchar.hpp"
#include "d4/fusion.hpp"
#include "json.hpp"

namespace d4 {

namespace {

const char* const kSchema = "d4.eta/1";

// Projective character table as printed, rows chi_1..chi_14.
const char* const kProjectiveTable[kUnipotent][kColumns] = {
    {"1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
    {"4", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
    {"3", "1", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
    {"3", "1", "0", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
    {"3", "1", "0", "0", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
    {"2", "1", "1", "1", "1", "1", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
    {"6", "3", "1", "1", "1", "0", "0", "1", "1", "0", "0", "0", "0", "0", "0", "0"},
    {"8", "4", "2", "2", "2", "0", "1", "0", "1", "1", "0", "0", "0", "0", "0", "0"},
    {"0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0", "0", "0"},
    {"3", "2", "2", "1", "1", "q/2", "1", "q/2", "1", "q/2", "q/2", "1", "0", "0", "0", "0"},
    {"3", "2", "1", "2", "1", "q/2", "1", "q/2", "1", "q/2", "q/2", "0", "1", "0", "0", "0"},
    {"3", "2", "1", "1", "2", "q/2", "1", "q/2", "1", "q/2", "q/2", "0", "0", "1", "0", "0"},
    {"4", "3", "2", "2", "2", "(q^2-q)/2", "1", "(q^2-q)/2", "2", "(q^2-q)/2", "(q^2-q)/2", "1", "1", "1", "1", "0"},
    {"1", "1", "1", "1", "1", "q^3/2", "1", "q^3/2", "1", "q^3/2", "q^3/2", "1", "1", "1", "q", "1"},
};

// Position of psi_1..psi_14 among the 16 columns.
constexpr std::array<int, kUnipotent> kSquare = {0, 1, 2, 3, 4, 5, 7, 9, 10, 11, 12, 13, 14, 15};

int triality_column(int j) {
  switch (j) {
    case 2: return 4;
    case 4: return 3;
    case 3: return 2;
    case 11: return 13;
    case 13: return 12;
    case 12: return 11;
    default: return j;
  }
}

mpq_class pow2(int f) { return mpq_class(mpz_class(1) << f); }

// Solves x^T V = m for a 16 x 14 matrix V of rank 14; nullopt when inconsistent.
std::optional<std::vector<mpq_class>> solve_left(const QMatrix& V, const std::vector<mpq_class>& m) {
  const int rows = static_cast<int>(V.size()), cols = static_cast<int>(V[0].size());
  QMatrix a(rows, std::vector<mpq_class>(cols + 1));
  for (int j = 0; j < rows; ++j) {
    for (int k = 0; k < cols; ++k) a[j][k] = V[j][k];
    a[j][cols] = m[j];
  }
  int r = 0;
  std::vector<int> piv;
  for (int c = 0; c < cols; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) throw DataError("family matrix is rank deficient");
    std::swap(a[p], a[r]);
    const mpq_class iv = 1 / a[r][c];
    for (auto& x : a[r]) x *= iv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (int k = 0; k <= cols; ++k) a[i][k] -= f * a[r][k];
    }
    piv.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (a[i][cols] != 0) return std::nullopt;
  std::vector<mpq_class> x(cols);
  for (int i = 0; i < r; ++i) x[piv[i]] = a[i][cols];
  return x;
}

}  // namespace

const std::array<std::string, kColumns>& column_names() {
  static const std::array<std::string, kColumns> names = {
      "psi1", "psi2", "psi3", "psi4",  "psi5",  "psi6",  "psi6'", "psi7",
      "psi7'", "psi8", "psi9", "psi10", "psi11", "psi12", "psi13", "psi14"};
  return names;
}

int column_index(const std::string& name) {
  const auto& n = column_names();
  for (int j = 0; j < kColumns; ++j)
    if (n[j] == name) return j;
  throw InvalidInputError("unknown column " + name);
}

std::vector<ProjectiveColumn> projective_columns(const FieldSpec& F) {
  const Elem mu = F.fix_mu();
  auto lin = [](const std::string& name, std::array<Elem, kRank> b) {
    std::string label = "b=(";
    for (int i = 0; i < kRank; ++i) label += (i ? "," : "") + std::to_string(b[i]);
    return ProjectiveColumn{name, label + ")", UCharSpec::linear(b)};
  };
  // The character labelled (s, t) is evaluated with s + mu in the value formula.
  auto half = [&](const std::string& name, Elem s, Elem t) {
    auto txt = [](Elem x) { return x ? std::string("mu") : std::string("0"); };
    return ProjectiveColumn{name, "(s,t)=(" + txt(s) + "," + txt(t) + ")", UCharSpec::q3half(F, s ^ mu, t)};
  };
  return {lin("psi1", {0, 0, 0, 0}),
          lin("psi2", {0, 0, 1, 0}),
          lin("psi3", {1, 1, 0, 0}),
          lin("psi4", {0, 1, 0, 1}),
          lin("psi5", {1, 0, 0, 1}),
          half("psi6", mu, mu),
          lin("psi6'", {1, 1, 0, 1}),
          half("psi7", 0, 0),
          lin("psi7'", {1, 0, 1, 0}),
          half("psi8", mu, 0),
          half("psi9", 0, mu),
          lin("psi10", {1, 1, 1, 0}),
          lin("psi11", {0, 1, 1, 1}),
          lin("psi12", {1, 0, 1, 1}),
          ProjectiveColumn{"psi13", "d=" + std::to_string(F.first_non_binary()), UCharSpec::chi567(F.first_non_binary())},
          lin("psi14", {1, 1, 1, 1})};
}

const PolyMatrix& printed_projective_table() {
  static const PolyMatrix m = [] {
    PolyMatrix t(kUnipotent, std::vector<QPoly>(kColumns));
    for (int i = 0; i < kUnipotent; ++i)
      for (int j = 0; j < kColumns; ++j) t[i][j] = QPoly::parse(kProjectiveTable[i][j]);
    return t;
  }();
  return m;
}

const std::vector<ProjectiveTableCorrection>& projective_table_corrections() {
  static const std::vector<ProjectiveTableCorrection> c = {
      {12, 7, QPoly::parse("(q^2-q)/2"), QPoly::parse("(q^2+q)/2")},
      {12, 9, QPoly::parse("(q^2-q)/2"), QPoly::parse("(q^2+q)/2")},
  };
  return c;
}

PolyMatrix corrected_projective_table() {
  PolyMatrix t = printed_projective_table();
  for (const auto& c : projective_table_corrections()) t[c.row][c.col] = c.corrected;
  return t;
}

CentralizerTable CentralizerTable::build() {
  CentralizerTable t;
  const auto reps = class_reps(make_field_q(4));
  for (int k = 0; k < kClasses; ++k) t.cg[k] = reps[k].cg_order;
  t.g_order = group_order();
  return t;
}

bool CentralizerTable::divides_at(std::uint64_t q) const {
  const mpq_class g = g_order.eval(mpq_class(mpz_class(std::to_string(q))));
  for (const auto& c : cg) {
    const mpq_class v = c.eval(mpq_class(mpz_class(std::to_string(q))));
    if (v <= 0 || v.get_den() != 1) return false;
    const mpq_class r = g / v;
    if (r.get_den() != 1) return false;
  }
  return true;
}

std::vector<mpq_class> family_column(const UCharSpec& spec, const Field& field) {
  std::vector<mpq_class> col(kClasses, 0);
  const mpq_class q(mpz_class(std::to_string(field->q())));
  for (const auto& fam : catalogue()) col[fam.target_k - 1] += fast_family_sum(spec, fam, field).value / fam.cu.eval(q);
  return col;
}

QMatrix family_matrix(const std::vector<UCharSpec>& specs, const Field& field) {
  QMatrix V;
  for (const auto& s : specs) V.push_back(family_column(s, field));
  return V;
}

EtaTable::EtaTable() = default;

EtaTable EtaTable::swapped_13_14() const {
  EtaTable t = *this;
  for (int i = 0; i < kUnipotent; ++i) std::swap(t.v_[i][12], t.v_[i][13]);
  return t;
}

std::string EtaTable::default_path() { return std::string(D4_DATA_DIR) + "/eta_d4.json"; }

EtaTable EtaTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open eta file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("eta file " + path + ": " + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != kSchema)
    throw DataError("eta file " + path + ": expected schema " + kSchema);
  if (!j.contains("values") || !j["values"].is_array()) throw DataError("eta file " + path + ": no values array");
  EtaTable t;
  std::array<std::array<bool, kClasses>, kUnipotent> seen{};
  for (const auto& e : j["values"]) {
    const int i = e.at("chi").get<int>(), k = e.at("class").get<int>();
    if (i < 1 || i > kUnipotent || k < 1 || k > kClasses) throw DataError("eta file: index out of range");
    if (seen[i - 1][k - 1]) throw DataError("eta file: duplicate entry chi" + std::to_string(i) + " u" + std::to_string(k));
    seen[i - 1][k - 1] = true;
    std::vector<mpq_class> coeffs;
    for (const auto& c : e.at("poly")) {
      mpq_class x(mpz_class(c.at(0).get<std::string>()), mpz_class(c.at(1).get<std::string>()));
      x.canonicalize();
      coeffs.push_back(x);
    }
    t.set(i, k, QPoly::from_coeffs(coeffs));
  }
  for (int i = 0; i < kUnipotent; ++i)
    for (int k = 0; k < kClasses; ++k)
      if (!seen[i][k]) throw DataError("eta file: missing chi" + std::to_string(i + 1) + " u" + std::to_string(k + 1));
  return t;
}

void EtaTable::save(const std::string& path, const std::string& provenance) const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["provenance"] = provenance;
  j["values"] = nlohmann::json::array();
  for (int i = 1; i <= kUnipotent; ++i)
    for (int k = 1; k <= kClasses; ++k) {
      const QPoly& p = value(i, k);
      nlohmann::json poly = nlohmann::json::array();
      if (!p.is_zero()) {
        if (p.low_degree() < 0) throw DataError("eta entry is not a polynomial");
        for (int e = 0; e <= p.degree(); ++e) {
          const mpq_class c = p.coeff(e);
          poly.push_back({c.get_num().get_str(), c.get_den().get_str()});
        }
      }
      j["values"].push_back({{"chi", i}, {"class", k}, {"text", p.to_string()}, {"poly", poly}});
    }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(1) << "\n";
}

EtaTable reconstruct_eta(const PolyMatrix& table, const std::vector<int>& degrees) {
  if (degrees.size() < 15) throw InvalidInputError("reconstruct_eta: need at least 15 values of q");
  std::vector<mpq_class> xs;
  // ys[i][k][n]: chi_{i+1}(u_{k+1}) at the n-th q.
  std::vector<std::vector<std::vector<mpq_class>>> ys(kUnipotent, std::vector<std::vector<mpq_class>>(kClasses));
  for (int f : degrees) {
    const Field F = make_field(f);
    const mpq_class q = pow2(f);
    xs.push_back(q);
    std::vector<UCharSpec> specs;
    for (const auto& c : projective_columns(*F)) specs.push_back(c.spec);
    const QMatrix V = family_matrix(specs, F);
    for (int i = 0; i < kUnipotent; ++i) {
      std::vector<mpq_class> m(kColumns);
      for (int j = 0; j < kColumns; ++j) m[j] = table[i][j].eval(q);
      const auto x = solve_left(V, m);
      if (!x) throw DataError("reconstruct_eta: row chi" + std::to_string(i + 1) + " is inconsistent at q=" + q.get_str());
      for (int k = 0; k < kClasses; ++k) ys[i][k].push_back((*x)[k]);
    }
  }
  const std::size_t fit = xs.size() - 2;
  EtaTable t;
  for (int i = 0; i < kUnipotent; ++i)
    for (int k = 0; k < kClasses; ++k) {
      const QPoly p = QPoly::interpolate({xs.begin(), xs.begin() + fit}, {ys[i][k].begin(), ys[i][k].begin() + fit});
      for (std::size_t n = fit; n < xs.size(); ++n)
        if (p.eval(xs[n]) != ys[i][k][n])
          throw DataError("reconstruct_eta: chi" + std::to_string(i + 1) + "(u" + std::to_string(k + 1) +
                          ") is not a polynomial of degree < " + std::to_string(fit));
      t.set(i + 1, k + 1, p);
    }
  return t;
}

EtaValidation validate_eta(const EtaTable& eta, const std::vector<std::uint64_t>& qs) {
  EtaValidation r;
  for (int i = 1; i <= kUnipotent; ++i) {
    const QPoly d = unipotent_degree(i);
    if (eta.value(i, 1) != d) {
      r.degrees = false;
      r.diffs.push_back("degree chi" + std::to_string(i) + ": file " + eta.value(i, 1).to_string() + ", expected " +
                        d.to_string());
    }
  }
  const CentralizerTable cent = CentralizerTable::build();
  const Parabolic& W = whole_weyl();
  for (std::uint64_t qi : qs) {
    const mpq_class q(mpz_class(std::to_string(qi)));
    QMatrix E(kUnipotent, std::vector<mpq_class>(kClasses));
    for (int i = 0; i < kUnipotent; ++i)
      for (int k = 0; k < kClasses; ++k) {
        E[i][k] = eta.at(i + 1, k + 1, q);
        if (E[i][k].get_den() != 1) {
          r.integral = false;
          r.diffs.push_back("chi" + std::to_string(i + 1) + "(u" + std::to_string(k + 1) + ") = " + E[i][k].get_str() +
                            " at q=" + q.get_str());
        }
      }
    std::vector<mpq_class> cg(kClasses);
    for (int k = 0; k < kClasses; ++k) cg[k] = cent.cg[k].eval(q);
    QMatrix G(kUnipotent, std::vector<mpq_class>(kUnipotent, 0));
    for (int i = 0; i < kUnipotent; ++i)
      for (int j = 0; j < kUnipotent; ++j)
        for (int k = 0; k < kClasses; ++k) G[i][j] += E[i][k] * E[j][k] / cg[k];
    for (int c = 0; c < W.class_count(); ++c) {
      const int w = W.class_rep(c);
      const auto rw = r_w(w);
      const mpq_class T = torus_order(w).eval(q);
      for (int i = 0; i < kUnipotent; ++i) {
        mpq_class s = 0;
        for (int j = 0; j < kUnipotent; ++j) s += rw[j + 1] * G[i][j];
        if (s != rw[i + 1] / T) {
          r.green = false;
          r.diffs.push_back("Green identity fails for chi" + std::to_string(i + 1) + ", w class " + std::to_string(c) +
                            " at q=" + q.get_str());
        }
      }
    }
  }
  return r;
}

mpq_class inner_product(const EtaTable& eta, const std::vector<mpq_class>& column, int i, std::uint64_t qi) {
  const mpq_class q(mpz_class(std::to_string(qi)));
  mpq_class s = 0;
  for (int k = 0; k < kClasses; ++k) s += eta.at(i, k + 1, q) * column[k];
  if (s.get_den() != 1 || s < 0)
    throw DataError("inner product with chi" + std::to_string(i) + " at q=" + std::to_string(qi) + " is " + s.get_str() +
                    ", not a nonnegative integer");
  return s;
}

mpq_class inner_product(const EtaTable& eta, const UCharSpec& spec, int i, const Field& field) {
  return inner_product(eta, family_column(spec, field), i, field->q());
}

QMatrix evaluate_matrix(const EtaTable& eta, std::uint64_t q) {
  const Field F = make_field_q(q);
  QMatrix M(kUnipotent, std::vector<mpq_class>(kColumns));
  const auto cols = projective_columns(*F);
  for (int j = 0; j < kColumns; ++j) {
    const auto col = family_column(cols[j].spec, F);
    for (int i = 0; i < kUnipotent; ++i) M[i][j] = inner_product(eta, col, i + 1, q);
  }
  return M;
}

InnerProductMatrix assemble_matrix(const EtaTable& eta, const std::vector<std::uint64_t>& qs) {
  if (qs.size() < 6) throw InvalidInputError("assemble_matrix: need at least six values of q");
  InnerProductMatrix out;
  out.qs = qs;
  std::vector<QMatrix> vals;
  const EtaTable* use = &eta;
  const EtaTable swapped = eta.swapped_13_14();
  try {
    for (auto q : qs) vals.push_back(evaluate_matrix(eta, q));
  } catch (const DataError&) {
    vals.clear();
    for (auto q : qs) vals.push_back(evaluate_matrix(swapped, q));
    out.swapped_13_14 = true;
    use = &swapped;
  }
  (void)use;
  std::vector<mpq_class> xs;
  for (auto q : qs) xs.emplace_back(mpz_class(std::to_string(q)));
  const std::size_t fit = xs.size() - 1;
  out.entries.assign(kUnipotent, std::vector<QPoly>(kColumns));
  for (int i = 0; i < kUnipotent; ++i)
    for (int j = 0; j < kColumns; ++j) {
      std::vector<mpq_class> ys;
      for (const auto& v : vals) ys.push_back(v[i][j]);
      const QPoly p = QPoly::interpolate({xs.begin(), xs.begin() + fit}, {ys.begin(), ys.begin() + fit});
      if (p.eval(xs.back()) != ys.back())
        throw DataError("assemble_matrix: entry chi" + std::to_string(i + 1) + ", " + column_names()[j] +
                        " exceeds the degree bound");
      out.entries[i][j] = p;
    }
  return out;
}

UnitriangularReport check_unitriangular(const PolyMatrix& M) {
  UnitriangularReport r;
  for (int i = 0; i < kUnipotent; ++i)
    for (int s = 0; s < kUnipotent; ++s) {
      const QPoly& v = M[i][kSquare[s]];
      if (s == i && v != QPoly(1)) {
        r.unitriangular = false;
        r.issues.push_back("diagonal chi" + std::to_string(i + 1) + " is " + v.to_string());
      }
      if (s > i && !v.is_zero()) {
        r.unitriangular = false;
        r.issues.push_back("chi" + std::to_string(i + 1) + ", " + column_names()[kSquare[s]] + " is " + v.to_string());
      }
    }
  for (int j : {2, 3, 4, 11, 12, 13})
    for (int i = 0; i < kUnipotent; ++i) {
      const int ti = triality_chi(i + 1) - 1, tj = triality_column(j);
      if (M[ti][tj] != M[i][j]) {
        r.triality = false;
        r.issues.push_back("triality: chi" + std::to_string(i + 1) + "," + column_names()[j] + " vs chi" +
                           std::to_string(ti + 1) + "," + column_names()[tj]);
      }
    }
  return r;
}

std::vector<TableDiff> compare_tables(const PolyMatrix& M, const PolyMatrix& reference) {
  std::vector<TableDiff> d;
  for (int i = 0; i < kUnipotent; ++i)
    for (int j = 0; j < kColumns; ++j)
      if (M[i][j] != reference[i][j]) d.push_back({i, j, M[i][j], reference[i][j]});
  return d;
}

}  // namespace d4
