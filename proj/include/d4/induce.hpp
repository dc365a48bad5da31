#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "d4/qpoly.hpp"
#include "d4/fusion.hpp"
#include "d4/uchars.hpp"
#include "d4/weylhc.hpp"

namespace d4 {

constexpr int kColumns = 16;

using QMatrix = std::vector<std::vector<mpq_class>>;
using PolyMatrix = std::vector<std::vector<QPoly>>;

// psi_1..psi_5, psi_6, psi_6', psi_7, psi_7', psi_8..psi_14.
struct ProjectiveColumn {
  std::string name;
  std::string label;  // as printed: b-vector, (s, t) or d
  UCharSpec spec;     // the character actually induced
};
std::vector<ProjectiveColumn> projective_columns(const FieldSpec& F);
const std::array<std::string, kColumns>& column_names();
int column_index(const std::string& name);

// Rows chi_1..chi_14 (index 0 is chi_1) of the printed matrix.
const PolyMatrix& printed_projective_table();
struct ProjectiveTableCorrection {
  int row, col;  // 0-based
  QPoly printed, corrected;
};
const std::vector<ProjectiveTableCorrection>& projective_table_corrections();
PolyMatrix corrected_projective_table();

struct CentralizerTable {
  std::array<QPoly, kClasses> cg;  // |C_G(u_k)|, index 0 is u_1
  QPoly g_order;
  static CentralizerTable build();
  // Every cg[k] divides |G| at q.
  bool divides_at(std::uint64_t q) const;
};

// V[j][k] = sum over the families C fusing into u_{k+1} of S(psi_j, C) / |C_U(C)|.
QMatrix family_matrix(const std::vector<UCharSpec>& specs, const Field& field);
std::vector<mpq_class> family_column(const UCharSpec& spec, const Field& field);

class EtaTable {
 public:
  EtaTable();
  // values(i, k): chi_i(u_k), both 1-based.
  const QPoly& value(int i, int k) const { return v_[i - 1][k - 1]; }
  void set(int i, int k, QPoly p) { v_[i - 1][k - 1] = std::move(p); }
  mpq_class at(int i, int k, const mpq_class& q) const { return value(i, k).eval(q); }
  EtaTable swapped_13_14() const;

  static std::string default_path();
  // Throws DataError on a malformed file or a wrong schema.
  static EtaTable load(const std::string& path);
  void save(const std::string& path, const std::string& provenance) const;

 private:
  std::array<std::array<QPoly, kClasses>, kUnipotent> v_;
};

// Solves eta V(q)^T = table(q) row by row at q = 2^f for each f and
// interpolates every entry; the last two points confirm. Throws DataError
// naming the row when a system is inconsistent.
EtaTable reconstruct_eta(const PolyMatrix& table, const std::vector<int>& degrees);

struct EtaValidation {
  bool degrees = true;   // chi_i(u_1) equals the Deligne-Lusztig degree
  bool green = true;     // sum_j <R_w, chi_j> G_ij = <R_w, chi_i> / |T_w|
  bool integral = true;  // values are integers at the tested q
  std::vector<std::string> diffs;
  bool ok() const { return degrees && green && integral; }
};
EtaValidation validate_eta(const EtaTable& eta, const std::vector<std::uint64_t>& qs);

// <Ind psi, chi_i>; throws DataError when the value is not a nonnegative integer.
mpq_class inner_product(const EtaTable& eta, const std::vector<mpq_class>& column, int i, std::uint64_t q);
mpq_class inner_product(const EtaTable& eta, const UCharSpec& spec, int i, const Field& field);

struct InnerProductMatrix {
  PolyMatrix entries;  // 14 x 16
  std::vector<std::uint64_t> qs;
  bool swapped_13_14 = false;
};
// Evaluates at every q (at least six), interpolates through all but the last
// and confirms at the last. Retries with eta columns 13 and 14 swapped when an
// entry is negative or not integral.
InnerProductMatrix assemble_matrix(const EtaTable& eta, const std::vector<std::uint64_t>& qs);
// Exact values at one q.
QMatrix evaluate_matrix(const EtaTable& eta, std::uint64_t q);

struct UnitriangularReport {
  bool unitriangular = true;
  bool triality = true;
  std::vector<std::string> issues;
  bool ok() const { return unitriangular && triality; }
};
// Square part psi_1..psi_14 lower unitriangular; the psi_3/psi_4/psi_5 and
// psi_10/psi_11/psi_12 columns are triality images of each other.
UnitriangularReport check_unitriangular(const PolyMatrix& M);

struct TableDiff {
  int row, col;
  QPoly computed, printed;
};
std::vector<TableDiff> compare_tables(const PolyMatrix& M, const PolyMatrix& reference);

}  // namespace d4
