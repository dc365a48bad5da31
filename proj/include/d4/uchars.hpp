#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d4/fusion.hpp"

namespace d4 {

// The three kinds of irreducible characters of U used for inducing.
struct UCharSpec {
  enum Kind { Linear, Q3Half, Chi567 } kind = Linear;
  std::array<Elem, kRank> b{};  // linear: b1..b4
  Elem s = 0, t = 0;            // q3half: s, t in {0, mu}
  Elem d = 0;                   // chi567: d outside {0, 1}

  static UCharSpec linear(std::array<Elem, kRank> b);
  static UCharSpec q3half(const FieldSpec& F, Elem s, Elem t);
  static UCharSpec chi567(Elem d);
  // "lin:1,1,0,1", "q3half:mu,0", "chi567" or "chi567:5".
  static UCharSpec parse(const std::string& text, const FieldSpec& F);
  std::string to_string() const;
  mpq_class degree(const FieldSpec& F) const;
};

// Value at x (x in normal form). Throws InvalidInputError for a bad parameter.
mpq_class value(const UCharSpec& spec, const UnipotentElement& x);

// Sum of the values over all members of the family, by enumeration.
mpq_class family_sum(const UCharSpec& spec, const FamilySpec& fam, const Field& field);

// Laurent polynomials over F in nonzero variables a_0..a_{n-1}; exponents are
// residues modulo q-1.
constexpr int kMaxVars = 6;
struct SymMono {
  Elem c = 0;
  std::array<int, kMaxVars> e{};
};

class SymPoly {
 public:
  SymPoly() = default;
  static SymPoly constant(const FieldSpec& F, Elem c);
  static SymPoly var(const FieldSpec& F, int i);
  static SymPoly mono(const FieldSpec& F, Elem c, const std::array<int, kMaxVars>& e);

  const std::vector<SymMono>& monos() const { return m_; }
  bool is_zero() const { return m_.empty(); }
  // Constant term when the polynomial has no variable part.
  std::optional<Elem> as_constant() const;
  bool uses(int var) const;

  SymPoly add(const FieldSpec& F, const SymPoly& o) const;
  SymPoly mul(const FieldSpec& F, const SymPoly& o) const;
  // a_var -> k * prod a_i^{e_i}
  SymPoly substitute(const FieldSpec& F, int var, Elem k, const std::array<int, kMaxVars>& e) const;
  // a_var -> p; nullopt when some power of a_var is neither a Frobenius power nor in 1..4.
  std::optional<SymPoly> substitute(const FieldSpec& F, int var, const SymPoly& p) const;
  // Image under x -> x^(2^k), k may be negative.
  SymPoly frobenius(const FieldSpec& F, int k) const;
  Elem eval(const FieldSpec& F, const std::vector<Elem>& a) const;
  std::string to_string() const;

 private:
  void normalize(const FieldSpec& F);
  std::vector<SymMono> m_;
};

// weight * [zero = 0] * [nonzero != 0] * [Tr(p) = v] * phi(phase)
struct CharSum {
  mpq_class weight = 1;
  SymPoly phase;
  std::vector<SymPoly> zero;
  std::vector<SymPoly> nonzero;
  std::vector<std::pair<SymPoly, int>> trace;
};

struct SumResult {
  mpq_class value;
  bool closed = true;           // no variable was enumerated
  std::uint64_t enumerated = 0; // values substituted by the fallback
};

// Sum over (F^x)^nvars of the terms. Variables are removed by the rules
//   absent variable              factor q-1
//   sum_a phi(a^e L + R)         phi(R) (q [L = 0] - 1), gcd(e, q-1) = 1
//   [c1 M1 + c2 M2 = 0]          solve for a variable with invertible exponent
//   [c a^(2^k) M + P = 0]        a = (P/(c M))^(2^-k), adding [P != 0]
//   [Tr(p) = v]                  (1 + (-1)^v phi(p)) / 2
//   [p != 0]                     1 - [p = 0]
// after reducing each phase monomial by the Frobenius. When no rule applies a
// variable is enumerated if allowed, otherwise NotImplementedError is thrown.
SumResult evaluate_sum(const FieldSpec& F, int nvars, std::vector<CharSum> terms, bool allow_enumeration);

// Symbolic form of a family: coordinates of the representative as Laurent
// polynomials in the parameters, and the constraints.
struct SymbolicFamily {
  int nvars = 0;
  std::array<SymPoly, kPositiveRoots + 1> coords;
  std::vector<SymPoly> zero, nonzero;
  std::vector<std::pair<SymPoly, int>> trace;
};
SymbolicFamily symbolic_family(const FamilySpec& fam, const FieldSpec& F);

// The character times the family constraints as a list of terms.
std::vector<CharSum> character_terms(const UCharSpec& spec, const SymbolicFamily& fam, const FieldSpec& F);

// Family sum by the elimination rules alone; nullopt when some variable would
// have to be enumerated.
std::optional<mpq_class> closed_form_sum(const UCharSpec& spec, const FamilySpec& fam, const Field& field);
// Elimination with enumeration fallback; exact at any q.
SumResult fast_family_sum(const UCharSpec& spec, const FamilySpec& fam, const Field& field);

}  // namespace d4
