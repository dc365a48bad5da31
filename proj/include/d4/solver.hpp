#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d4/induce.hpp"
#include "d4/weylhc.hpp"

namespace d4 {

enum class Symbol { Alpha, Beta, Gamma, Delta };
constexpr int kSymbols = 4;
const char* symbol_name(Symbol s);

// Polynomial in alpha, beta, gamma, delta with rational coefficients.
// Matrix entries are affine; products appear in the R_w coefficients.
class SymExpr {
 public:
  using Monomial = std::array<int, kSymbols>;

  SymExpr() = default;
  SymExpr(long c);              // NOLINT: implicit constant
  SymExpr(const mpq_class& c);  // NOLINT
  static SymExpr sym(Symbol s);

  const std::map<Monomial, mpq_class>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  bool is_affine() const;
  mpq_class constant() const;
  // Coefficient of the degree-one monomial s.
  mpq_class linear(Symbol s) const;
  bool uses(Symbol s) const;

  SymExpr operator+(const SymExpr& o) const;
  SymExpr operator-(const SymExpr& o) const;
  SymExpr operator-() const;
  SymExpr operator*(const SymExpr& o) const;
  SymExpr& operator+=(const SymExpr& o) { return *this = *this + o; }
  SymExpr& operator-=(const SymExpr& o) { return *this = *this - o; }
  bool operator==(const SymExpr& o) const { return t_ == o.t_; }
  bool operator!=(const SymExpr& o) const { return !(*this == o); }

  SymExpr substitute(Symbol s, const SymExpr& e) const;
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const mpq_class& c);
  std::map<Monomial, mpq_class> t_;
};
using AffineExpr = SymExpr;

enum class Relation { Geq, Eq };  // expr >= 0, expr == 0
struct Constraint {
  SymExpr expr;
  Relation rel = Relation::Geq;
  std::string origin;
  bool operator==(const Constraint& o) const { return expr == o.expr && rel == o.rel && origin == o.origin; }
  std::string to_string() const;
};

using Column = std::array<SymExpr, kUnipotent>;  // index 0 is chi_1

struct NamedProjective {
  std::string name;
  VirtualUnipotent v{};  // principal block part, chi_8 removed
  bool operator==(const NamedProjective& o) const { return name == o.name && v == o.v; }
};

struct DecompState {
  // d[row][col], rows chi_1..chi_14, columns Psi_1..Psi_14.
  std::array<Column, kUnipotent> d{};
  std::array<bool, kUnipotent> known{};
  std::vector<NamedProjective> projectives;
  std::vector<Constraint> constraints;
  std::array<std::optional<mpq_class>, kSymbols> lower{}, upper{};
  std::map<Symbol, SymExpr> fixed;  // substitutions made so far

  DecompState();
  Column column(int i) const;  // 1-based
  const NamedProjective& projective(const std::string& name) const;
  void add(Constraint c);
  void substitute(Symbol s, const SymExpr& e);
  // Maximum of an affine expression over the current bounds; nullopt when unbounded.
  std::optional<mpq_class> max_over_bounds(const SymExpr& e) const;
  bool operator==(const DecompState& o) const;
};

struct SolverContext {
  std::uint64_t q = 0;
  std::int64_t ell = 0;
  QMatrix table;  // 14 x 16 inner products at q
  Dictionary dict;
};
// Validates (q, ell) and evaluates the projective columns at q.
SolverContext make_context(const EtaTable& eta, std::uint64_t q, std::int64_t ell);
// The same from a polynomial 14 x 16 matrix instead of eta.
SolverContext make_context(const PolyMatrix& table, std::uint64_t q, std::int64_t ell);

struct LevelRestriction {
  std::vector<int> J;
  RhoVector rho{};
  EtaExpansion eta;
};
struct SplitVerdict {
  int candidate = 0;  // index of the PIM that is subtracted
  bool refuted = false;
  std::string method;  // (Sum), (Reg), (HC) or empty
  std::string reason;
  std::optional<VirtualUnipotent> nu;
  std::vector<LevelRestriction> restrictions;
};
// Is "psi = Psi_i + nu with nu projective" impossible?
SplitVerdict split_elimination(const DecompState& s, const SolverContext& ctx, const VirtualUnipotent& psi, int i);
// *R_L_J(nu) in the eta basis.
LevelRestriction restrict_split(const VirtualUnipotent& nu, const std::vector<int>& J, const Dictionary& dict);

enum class Rule { Load, Block, Uni, RegIndecomposable, Shape, Reg, Indecomposable, DL, Squeeze, Split, Pin, Scan, Merge, Bounds };
const char* rule_name(Rule r);

struct Fact {
  std::string name;
  SymExpr value;
  bool operator==(const Fact& o) const { return name == o.name && value == o.value; }
};

struct LogEntry {
  // Arguments.
  Rule rule = Rule::Load;
  std::string branch;  // empty for the main line
  int target = 0;
  std::string projective;
  int w = -1;
  std::vector<int> targets;
  std::vector<Symbol> symbols;
  // Results.
  std::string method;
  std::vector<std::string> premises;
  std::vector<std::string> conclusions;
  std::vector<SplitVerdict> verdicts;
  std::vector<Fact> facts;
  std::vector<std::string> branches;  // created by a split

  bool same_result(const LogEntry& o) const;
  std::string to_string() const;
};

struct ConstraintLog {
  std::vector<LogEntry> entries;
  const Fact* find_fact(const std::string& name) const;
};

struct SolveResult {
  DecompState state;
  ConstraintLog log;
  std::map<std::string, DecompState> branches;
  // Final bounds: alpha <= q/2, beta <= (3q-2)/2, 3 alpha - beta - 1 >= 0, gamma >= 0.
  std::vector<Constraint> bounds;
};

// R_w = sum_i a_{w,i} Psi_i over the current columns; index 0 is Psi_1.
std::array<SymExpr, kUnipotent> pim_coefficients(const DecompState& s, int w);
// <Psi_i, (-1)^{l(w)} R_w>.
SymExpr reg_pairing(const DecompState& s, int i, int w);

using BranchStates = std::map<std::string, DecompState>;
// Executes one rule on the state of e.branch and fills the result fields of
// the entry. A split adds branch states; a merge folds them into the main line.
void execute(BranchStates& states, LogEntry& e, const SolverContext& ctx);
SolveResult solve(const SolverContext& ctx);
SolveResult solve(const EtaTable& eta, std::uint64_t q, std::int64_t ell);
// Re-executes every entry from an empty state; throws SpecMismatchError on the
// first entry whose results differ, and returns the final state.
SolveResult replay(const ConstraintLog& log, const SolverContext& ctx);

// "w0", "c" for the Coxeter element s1s2s3s4, otherwise a reduced word.
std::string weyl_label(int w);
// Index of the first nonzero coefficient, 0 for the zero character.
int leading(const VirtualUnipotent& v);

// The printed decomposition matrix d[row][col], with gamma kept as a symbol.
const std::array<Column, kUnipotent>& printed_decomposition_matrix();

}  // namespace d4
