#include "d4/solver.hpp"

#include <algorithm>
#include <sstream>

#include "d4/dlchar.hpp"
#include "d4/rootsys.hpp"

namespace d4 {

namespace {

using Monomial = SymExpr::Monomial;

const std::vector<std::vector<int>>& a3_levis() {
  static const std::vector<std::vector<int>> L = {{1, 2, 3}, {1, 3, 4}, {2, 3, 4}};
  return L;
}

std::string levi_tag(const std::vector<int>& J) {
  std::string s = "L_{";
  for (std::size_t k = 0; k < J.size(); ++k) s += (k ? "," : "") + std::to_string(J[k]);
  return s + "}";
}

std::string induction_name(int eta, const std::vector<int>& J) {
  std::string s = "R_{";
  for (std::size_t k = 0; k < J.size(); ++k) s += (k ? "," : "") + std::to_string(J[k]);
  return s + "}(eta" + std::to_string(eta) + ")";
}

std::string chi_sum(const Column& c) {
  std::string s;
  for (int r = 0; r < kUnipotent; ++r) {
    if (c[r].is_zero()) continue;
    std::string coef = c[r].to_string();
    if (!c[r].is_constant()) coef = "(" + coef + ")";
    std::string term = (coef == "1" ? "" : coef + "*") + "chi" + std::to_string(r + 1);
    s += (s.empty() ? "" : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

Column to_column(const VirtualUnipotent& v) {
  Column c;
  for (int r = 0; r < kUnipotent; ++r) c[r] = SymExpr(v[r + 1]);
  return c;
}

std::string nu_string(const VirtualUnipotent& v) { return chi_sum(to_column(v)); }

int sign_of(int w) { return weyl().length(w) % 2 ? -1 : 1; }

std::string pairing_name(int i, int w) { return "<Psi" + std::to_string(i) + ", R_" + weyl_label(w) + ">"; }
std::string coefficient_name(int w, int i) { return "a_{" + weyl_label(w) + "," + std::to_string(i) + "}"; }

DecompState& state_of(BranchStates& states, const std::string& branch) {
  auto it = states.find(branch);
  if (it == states.end()) throw InvalidInputError("unknown branch '" + branch + "'");
  return it->second;
}

void require_general_position(int w, const SolverContext& ctx) {
  if (!general_position_exists(w, ctx.ell, static_cast<std::int64_t>(ctx.q)))
    throw RuleInapplicableError("(Reg): no l-character of T_" + weyl_label(w) + " in general position for l=" +
                                std::to_string(ctx.ell) + ", q=" + std::to_string(ctx.q));
}

// expr = X * (delta - c) with X free of delta; returns (X, c).
std::optional<std::pair<SymExpr, mpq_class>> split_delta_product(const SymExpr& expr) {
  SymExpr X, rest;
  for (const auto& [m, c] : expr.terms()) {
    if (m[3] > 1) return std::nullopt;
    Monomial r = m;
    if (m[3] == 1) {
      r[3] = 0;
      X += SymExpr(c) * [&] {
        SymExpr one(1);
        for (int k = 0; k < kSymbols; ++k)
          for (int p = 0; p < r[k]; ++p) one = one * SymExpr::sym(static_cast<Symbol>(k));
        return one;
      }();
    }
  }
  if (X.is_zero()) return std::nullopt;
  rest = expr - X * SymExpr::sym(Symbol::Delta);
  // rest must be -c * X.
  const auto& [m0, c0] = *X.terms().begin();
  const auto it = rest.terms().find(m0);
  const mpq_class c = it == rest.terms().end() ? mpq_class(0) : mpq_class(-it->second / c0);
  if (rest != -(X * SymExpr(c))) return std::nullopt;
  return std::make_pair(X, c);
}

}  // namespace

const char* symbol_name(Symbol s) {
  switch (s) {
    case Symbol::Alpha: return "alpha";
    case Symbol::Beta: return "beta";
    case Symbol::Gamma: return "gamma";
    case Symbol::Delta: return "delta";
  }
  return "?";
}

SymExpr::SymExpr(long c) {
  if (c != 0) t_[Monomial{}] = c;
}

SymExpr::SymExpr(const mpq_class& c) {
  if (c != 0) t_[Monomial{}] = c;
}

SymExpr SymExpr::sym(Symbol s) {
  SymExpr e;
  Monomial m{};
  m[static_cast<int>(s)] = 1;
  e.t_[m] = 1;
  return e;
}

void SymExpr::add_term(const Monomial& m, const mpq_class& c) {
  if (c == 0) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_[m] = c;
    return;
  }
  it->second += c;
  if (it->second == 0) t_.erase(it);
}

bool SymExpr::is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == Monomial{}); }

bool SymExpr::is_affine() const {
  for (const auto& [m, c] : t_)
    if (m[0] + m[1] + m[2] + m[3] > 1) return false;
  return true;
}

mpq_class SymExpr::constant() const {
  auto it = t_.find(Monomial{});
  return it == t_.end() ? mpq_class(0) : it->second;
}

mpq_class SymExpr::linear(Symbol s) const {
  Monomial m{};
  m[static_cast<int>(s)] = 1;
  auto it = t_.find(m);
  return it == t_.end() ? mpq_class(0) : it->second;
}

bool SymExpr::uses(Symbol s) const {
  for (const auto& [m, c] : t_)
    if (m[static_cast<int>(s)] > 0) return true;
  return false;
}

SymExpr SymExpr::operator+(const SymExpr& o) const {
  SymExpr r = *this;
  for (const auto& [m, c] : o.t_) r.add_term(m, c);
  return r;
}

SymExpr SymExpr::operator-(const SymExpr& o) const { return *this + (-o); }

SymExpr SymExpr::operator-() const {
  SymExpr r = *this;
  for (auto& [m, c] : r.t_) c = -c;
  return r;
}

SymExpr SymExpr::operator*(const SymExpr& o) const {
  SymExpr r;
  for (const auto& [m1, c1] : t_)
    for (const auto& [m2, c2] : o.t_) {
      Monomial m;
      for (int k = 0; k < kSymbols; ++k) m[k] = m1[k] + m2[k];
      r.add_term(m, c1 * c2);
    }
  return r;
}

SymExpr SymExpr::substitute(Symbol s, const SymExpr& e) const {
  const int k = static_cast<int>(s);
  SymExpr r;
  for (const auto& [m, c] : t_) {
    Monomial rest = m;
    rest[k] = 0;
    SymExpr term;
    term.t_[rest] = c;
    for (int p = 0; p < m[k]; ++p) term = term * e;
    r = r + term;
  }
  return r;
}

std::string SymExpr::to_string() const {
  if (t_.empty()) return "0";
  std::vector<std::pair<Monomial, mpq_class>> v(t_.begin(), t_.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    const int da = a.first[0] + a.first[1] + a.first[2] + a.first[3];
    const int db = b.first[0] + b.first[1] + b.first[2] + b.first[3];
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::string s;
  for (const auto& [m, c] : v) {
    std::string mono;
    for (int k = 0; k < kSymbols; ++k) {
      if (m[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += symbol_name(static_cast<Symbol>(k));
      if (m[k] > 1) mono += "^" + std::to_string(m[k]);
    }
    const mpq_class a = abs(c);
    std::string term = mono.empty() ? d4::to_string(a) : (a == 1 ? mono : d4::to_string(a) + "*" + mono);
    if (s.empty())
      s = (c < 0 ? "-" : "") + term;
    else
      s += (c < 0 ? " - " : " + ") + term;
  }
  return s;
}

std::string Constraint::to_string() const { return expr.to_string() + (rel == Relation::Geq ? " >= 0" : " = 0"); }

DecompState::DecompState() {
  for (auto& row : d)
    for (auto& e : row) e = SymExpr();
  known.fill(false);
}

Column DecompState::column(int i) const {
  Column c;
  for (int r = 0; r < kUnipotent; ++r) c[r] = d[r][i - 1];
  return c;
}

const NamedProjective& DecompState::projective(const std::string& name) const {
  for (const auto& p : projectives)
    if (p.name == name) return p;
  throw InvalidInputError("unknown projective character " + name);
}

namespace {

void tighten(DecompState& s, const Constraint& c) {
  if (!c.expr.is_affine()) return;
  int used = -1;
  for (int k = 0; k < kSymbols; ++k)
    if (c.expr.uses(static_cast<Symbol>(k))) {
      if (used >= 0) return;
      used = k;
    }
  if (used < 0) return;
  const mpq_class a = c.expr.linear(static_cast<Symbol>(used));
  const mpq_class v = -c.expr.constant() / a;
  auto lower = [&] {
    if (!s.lower[used] || *s.lower[used] < v) s.lower[used] = v;
  };
  auto upper = [&] {
    if (!s.upper[used] || *s.upper[used] > v) s.upper[used] = v;
  };
  if (c.rel == Relation::Eq) {
    lower();
    upper();
  } else if (a > 0) {
    lower();
  } else {
    upper();
  }
  if (s.lower[used] && s.upper[used] && *s.lower[used] > *s.upper[used])
    throw InfeasibleError(std::string("bounds on ") + symbol_name(static_cast<Symbol>(used)) + " are empty after " +
                          c.origin + ": " + c.to_string());
}

bool holds_trivially(const Constraint& c) {
  if (!c.expr.is_constant()) return false;
  const mpq_class v = c.expr.constant();
  if ((c.rel == Relation::Geq && v < 0) || (c.rel == Relation::Eq && v != 0))
    throw InfeasibleError(c.origin + ": " + c.to_string() + " fails");
  return true;
}

}  // namespace

void DecompState::add(Constraint c) {
  if (holds_trivially(c)) return;
  for (const auto& o : constraints)
    if (o.expr == c.expr && o.rel == c.rel) return;
  constraints.push_back(c);
  tighten(*this, constraints.back());
}

void DecompState::substitute(Symbol s, const SymExpr& e) {
  for (auto& row : d)
    for (auto& x : row) x = x.substitute(s, e);
  std::vector<Constraint> old;
  old.swap(constraints);
  lower.fill(std::nullopt);
  upper.fill(std::nullopt);
  for (auto& [k, v] : fixed) v = v.substitute(s, e);
  fixed[s] = e;
  for (auto c : old) {
    c.expr = c.expr.substitute(s, e);
    add(c);
  }
}

std::optional<mpq_class> DecompState::max_over_bounds(const SymExpr& e) const {
  if (!e.is_affine()) return std::nullopt;
  mpq_class m = e.constant();
  for (int k = 0; k < kSymbols; ++k) {
    const mpq_class a = e.linear(static_cast<Symbol>(k));
    if (a == 0) continue;
    const auto& b = a > 0 ? upper[k] : lower[k];
    if (!b) return std::nullopt;
    m += a * *b;
  }
  return m;
}

bool DecompState::operator==(const DecompState& o) const {
  return d == o.d && known == o.known && projectives == o.projectives && constraints == o.constraints &&
         lower == o.lower && upper == o.upper && fixed == o.fixed;
}

std::string weyl_label(int w) {
  const WeylGroup& W = weyl();
  if (w == W.longest()) return "w0";
  if (w == W.coxeter()) return "c";
  if (w == W.identity()) return "1";
  std::string s;
  for (int i : W.element(w).word) s += "s" + std::to_string(i);
  return s;
}

int leading(const VirtualUnipotent& v) {
  for (int i = 1; i <= kUnipotent; ++i)
    if (v[i] != 0) return i;
  return 0;
}

namespace {

SolverContext checked_context(std::uint64_t q, std::int64_t ell) {
  if (q < 4 || q > 65536 || (q & (q - 1)) != 0) throw InvalidInputError("q must be 2^f with 2 <= f <= 16");
  if (ell < 5 || ell % 2 == 0) throw InvalidInputError("ell must be an odd prime >= 5");
  for (std::int64_t d = 3; d * d <= ell; d += 2)
    if (ell % d == 0) throw InvalidInputError("ell = " + std::to_string(ell) + " is not prime");
  const std::int64_t n = static_cast<std::int64_t>(q) + 1;
  if (n % ell != 0) throw InvalidInputError("ell = " + std::to_string(ell) + " does not divide q+1 = " + std::to_string(n));
  std::int64_t part = 1, rest = n;
  while (rest % ell == 0) {
    rest /= ell;
    part *= ell;
  }
  if (part <= 5)
    throw RefusalError("(q+1)_l = " + std::to_string(part) + ": the deductions need (q+1)_l > 5");
  SolverContext ctx;
  ctx.q = q;
  ctx.ell = ell;
  ctx.dict = calibration().dict;
  return ctx;
}

}  // namespace

SolverContext make_context(const EtaTable& eta, std::uint64_t q, std::int64_t ell) {
  SolverContext ctx = checked_context(q, ell);
  ctx.table = evaluate_matrix(eta, q);
  return ctx;
}

SolverContext make_context(const PolyMatrix& table, std::uint64_t q, std::int64_t ell) {
  SolverContext ctx = checked_context(q, ell);
  const mpq_class x(mpz_class(std::to_string(q)));
  ctx.table.assign(kUnipotent, std::vector<mpq_class>(kColumns));
  for (int i = 0; i < kUnipotent; ++i)
    for (int j = 0; j < kColumns; ++j) ctx.table[i][j] = table[i][j].eval(x);
  return ctx;
}

LevelRestriction restrict_split(const VirtualUnipotent& nu, const std::vector<int>& J, const Dictionary& dict) {
  LevelRestriction r;
  r.J = J;
  r.rho = hc_restrict(nu, J, dict);
  r.eta = eta_decompose(r.rho);
  return r;
}

SplitVerdict split_elimination(const DecompState& s, const SolverContext& ctx, const VirtualUnipotent& psi, int i) {
  SplitVerdict v;
  v.candidate = i;
  const Column P = s.column(i);
  Column nu;
  for (int r = 0; r < kUnipotent; ++r) nu[r] = SymExpr(psi[r + 1]) - P[r];
  for (int r = 0; r < kUnipotent; ++r) {
    const auto m = s.max_over_bounds(nu[r]);
    if (m && *m < 0) {
      v.refuted = true;
      v.method = "(Sum)";
      v.reason = "coefficient of chi" + std::to_string(r + 1) + " is " + nu[r].to_string() + " < 0";
      return v;
    }
  }
  const int w0 = weyl().longest();
  require_general_position(w0, ctx);
  const VirtualUnipotent R = r_w(w0);
  SymExpr pair;
  for (int r = 0; r < kUnipotent; ++r) pair += nu[r] * SymExpr(R[r + 1] * sign_of(w0));
  if (const auto m = s.max_over_bounds(pair); m && *m < 0) {
    v.refuted = true;
    v.method = "(Reg)";
    v.reason = "<nu, R_w0> = " + pair.to_string() + " < 0";
    return v;
  }
  VirtualUnipotent n{};
  for (int r = 0; r < kUnipotent; ++r) {
    if (!nu[r].is_constant()) {
      v.reason = "nu is not numeric";
      return v;
    }
    const mpq_class c = nu[r].constant();
    n[r + 1] = c.get_num().get_si();
  }
  v.nu = n;
  for (const auto& J : a3_levis()) {
    v.restrictions.push_back(restrict_split(n, J, ctx.dict));
    const auto& lr = v.restrictions.back();
    if (lr.eta.negative) {
      v.method = "(HC)";
      v.reason += std::string(v.refuted ? "; " : "") + "*R_" + levi_tag(J) + "(" + nu_string(n) + ") = " +
                  to_string_rho(lr.rho) + " = " + to_string_eta(lr.eta);
      v.refuted = true;
    }
  }
  if (!v.refuted) v.reason = "no rule refutes " + nu_string(n);
  return v;
}

std::array<SymExpr, kUnipotent> pim_coefficients(const DecompState& s, int w) {
  for (int i = 0; i < kUnipotent; ++i)
    if (!s.known[i]) throw RuleInapplicableError("Psi" + std::to_string(i + 1) + " is not known yet");
  const VirtualUnipotent R = r_w(w);
  std::array<SymExpr, kUnipotent> a;
  for (int i = 0; i < kUnipotent; ++i) {
    SymExpr x(R[i + 1]);
    for (int j = 0; j < i; ++j) x -= s.d[i][j] * a[j];
    a[i] = x;
  }
  return a;
}

SymExpr reg_pairing(const DecompState& s, int i, int w) {
  const VirtualUnipotent R = r_w(w);
  SymExpr e;
  for (int r = 0; r < kUnipotent; ++r) e += s.d[r][i - 1] * SymExpr(R[r + 1] * sign_of(w));
  return e;
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Load: return "load";
    case Rule::Block: return "block";
    case Rule::Uni: return "uni";
    case Rule::RegIndecomposable: return "reg-indecomposable";
    case Rule::Shape: return "shape";
    case Rule::Reg: return "reg";
    case Rule::Indecomposable: return "indecomposable";
    case Rule::DL: return "dl";
    case Rule::Squeeze: return "squeeze";
    case Rule::Split: return "split";
    case Rule::Pin: return "pin";
    case Rule::Scan: return "scan";
    case Rule::Merge: return "merge";
    case Rule::Bounds: return "bounds";
  }
  return "?";
}

namespace {

void set_column(DecompState& s, int i, const Column& c) {
  for (int r = 0; r < kUnipotent; ++r) s.d[r][i - 1] = c[r];
  s.known[i - 1] = true;
}

void rule_load(DecompState& s, LogEntry& e, const SolverContext& ctx) {
  e.method = "(HC)";
  e.premises.push_back("inner products <Ind psi, chi_i> at q=" + std::to_string(ctx.q));
  e.premises.push_back("R_L(eta_k) is projective for every PIM eta_k of an A3 Levi");
  s.projectives.clear();
  const auto& names = column_names();
  for (int j = 0; j < kColumns; ++j) {
    VirtualUnipotent v{};
    for (int r = 0; r < kUnipotent; ++r) {
      const mpq_class& x = ctx.table[r][j];
      if (x.get_den() != 1 || !x.get_num().fits_slong_p())
        throw DataError("projective column " + names[j] + " has a non-integral entry");
      v[r + 1] = x.get_num().get_si();
    }
    v[kOwnBlock] = 0;
    s.projectives.push_back({names[j], v});
  }
  const std::vector<std::pair<int, std::vector<int>>> inductions = {
      {1, {1, 2, 3}}, {2, {1, 2, 3}}, {3, {1, 3, 4}}, {3, {2, 3, 4}}, {3, {1, 2, 3}}};
  for (const auto& [k, J] : inductions) {
    VirtualUnipotent v = hc_induce(a3_pims()[k - 1], J, ctx.dict);
    v[kOwnBlock] = 0;
    for (int r = 1; r <= kUnipotent; ++r)
      if (v[r] < 0) throw DataError(induction_name(k, J) + " has a negative coefficient");
    s.projectives.push_back({induction_name(k, J), v});
  }
  for (const auto& p : s.projectives) e.conclusions.push_back(p.name + " = " + nu_string(p.v));
}

void rule_block(DecompState& s, LogEntry& e) {
  e.method = "(Block)";
  if (e.target != kOwnBlock) throw RuleInapplicableError("only chi8 forms a block of its own");
  Column c;
  c[kOwnBlock - 1] = 1;
  set_column(s, kOwnBlock, c);
  e.premises.push_back("chi8 forms an l-block on its own");
  e.conclusions.push_back("Psi8 = chi8");
}

void rule_uni(DecompState& s, LogEntry& e) {
  e.method = "(Uni)";
  const auto& p = s.projective(e.projective);
  for (int r = 1; r <= kUnipotent; ++r)
    if (p.v[r] != (r == e.target ? 1 : 0))
      throw RuleInapplicableError("(Uni): " + p.name + " is not chi" + std::to_string(e.target));
  set_column(s, e.target, to_column(p.v));
  e.premises.push_back(p.name + " = chi" + std::to_string(e.target));
  e.conclusions.push_back("Psi" + std::to_string(e.target) + " = " + p.name);
}

void rule_reg_indecomposable(DecompState& s, LogEntry& e, const SolverContext& ctx) {
  e.method = "(Reg)";
  require_general_position(e.w, ctx);
  const auto& p = s.projective(e.projective);
  const int i = leading(p.v);
  if (p.v[i] != 1) throw RuleInapplicableError("(Reg): " + p.name + " has leading coefficient " + std::to_string(p.v[i]));
  const VirtualUnipotent R = r_w(e.w);
  const int sg = sign_of(e.w);
  auto pairing = [&](const VirtualUnipotent& v) { return sg * dl_inner(v, R); };
  if (pairing(p.v) != 0)
    throw RuleInapplicableError("(Reg): <" + p.name + ", R_" + weyl_label(e.w) + "> is not zero");
  e.premises.push_back("<" + p.name + ", R_" + weyl_label(e.w) + "> = 0");
  // Psi_i is a sub-character containing chi_i; both it and its complement pair to >= 0.
  std::vector<int> rows;
  std::uint64_t count = 1;
  for (int r = 1; r <= kUnipotent; ++r)
    if (r != i && p.v[r] > 0) {
      rows.push_back(r);
      count *= static_cast<std::uint64_t>(p.v[r] + 1);
      if (count > 1u << 20) throw RuleInapplicableError("(Reg): too many sub-characters of " + p.name);
    }
  for (std::uint64_t idx = 0; idx + 1 < count; ++idx) {
    VirtualUnipotent nu{};
    nu[i] = 1;
    std::uint64_t t = idx;
    for (int r : rows) {
      nu[r] = static_cast<long>(t % static_cast<std::uint64_t>(p.v[r] + 1));
      t /= static_cast<std::uint64_t>(p.v[r] + 1);
    }
    const long x = pairing(nu);
    e.premises.push_back("<" + nu_string(nu) + ", R_" + weyl_label(e.w) + "> = " + std::to_string(x));
    if (x == 0) throw RuleInapplicableError("(Reg): " + nu_string(nu) + " pairs to zero with R_" + weyl_label(e.w));
  }
  set_column(s, i, to_column(p.v));
  e.target = i;
  e.conclusions.push_back("Psi" + std::to_string(i) + " = " + p.name);
}

void rule_shape(DecompState& s, LogEntry& e) {
  e.method = "(Uni)+(Sum)";
  const int i = e.target;
  if (triality_chi(i) != i) throw RuleInapplicableError("shape: chi" + std::to_string(i) + " is not triality-stable");
  const auto& p = s.projective(e.projective);
  if (leading(p.v) != i || p.v[i] != 1)
    throw RuleInapplicableError("shape: " + p.name + " does not have leading term chi" + std::to_string(i));
  std::vector<std::vector<int>> orbits;
  for (int r = i + 1; r <= kUnipotent; ++r) {
    if (r == kOwnBlock) continue;
    bool seen = false;
    for (const auto& o : orbits)
      if (std::find(o.begin(), o.end(), r) != o.end()) seen = true;
    if (seen) continue;
    std::vector<int> o = {r};
    for (int t = triality_chi(r); t != r; t = triality_chi(t)) o.push_back(t);
    std::sort(o.begin(), o.end());
    orbits.push_back(o);
  }
  if (orbits.size() != e.symbols.size()) throw InvalidInputError("shape: expected one symbol per triality orbit");
  Column c;
  c[i - 1] = 1;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const SymExpr x = SymExpr::sym(e.symbols[k]);
    long cap = p.v[orbits[k][0]];
    for (int r : orbits[k]) {
      c[r - 1] = x;
      cap = std::min(cap, p.v[r]);
    }
    s.add({x, Relation::Geq, "(Sum) coefficients are nonnegative"});
    s.add({SymExpr(cap) - x, Relation::Geq, "(Sum) Psi" + std::to_string(i) + " <= " + p.name});
    e.conclusions.push_back(std::string("0 <= ") + symbol_name(e.symbols[k]) + " <= " + std::to_string(cap));
  }
  set_column(s, i, c);
  e.premises.push_back(p.name + " = " + nu_string(p.v));
  e.premises.push_back("Psi" + std::to_string(i) + " is triality-stable");
  e.conclusions.insert(e.conclusions.begin(), "Psi" + std::to_string(i) + " = " + chi_sum(c));
}

void rule_reg(DecompState& s, LogEntry& e, const SolverContext& ctx) {
  e.method = "(Reg)";
  require_general_position(e.w, ctx);
  const SymExpr x = reg_pairing(s, e.target, e.w);
  e.premises.push_back("an l-character of T_" + weyl_label(e.w) + " in general position exists");
  e.facts.push_back({pairing_name(e.target, e.w), x});
  const Constraint c{x, Relation::Geq, "(Reg) " + pairing_name(e.target, e.w) + " >= 0"};
  s.add(c);
  e.conclusions.push_back(c.to_string());
}

void rule_indecomposable(DecompState& s, LogEntry& e, const SolverContext& ctx) {
  e.method = "(Uni)+(Sum)+(Reg)+(HC)";
  const auto& p = s.projective(e.projective);
  const int i = leading(p.v);
  if (p.v[i] != 1) throw RuleInapplicableError(p.name + " has leading coefficient " + std::to_string(p.v[i]));
  if (s.known[i - 1]) throw RuleInapplicableError("Psi" + std::to_string(i) + " is already known");
  e.target = i;
  e.premises.push_back(p.name + " = " + nu_string(p.v));
  for (int j = i + 1; j <= kUnipotent; ++j) {
    if (p.v[j] == 0 || j == kOwnBlock) continue;
    if (!s.known[j - 1]) throw RuleInapplicableError("Psi" + std::to_string(j) + " is needed before Psi" + std::to_string(i));
    e.verdicts.push_back(split_elimination(s, ctx, p.v, j));
    const auto& v = e.verdicts.back();
    e.premises.push_back(p.name + " - Psi" + std::to_string(j) + ": " + (v.refuted ? "refuted by " + v.method : "open") +
                         ", " + v.reason);
    if (!v.refuted)
      throw InfeasibleError("cannot decide whether Psi" + std::to_string(j) + " is a summand of " + p.name + ": " + v.reason);
  }
  set_column(s, i, to_column(p.v));
  e.conclusions.push_back("Psi" + std::to_string(i) + " = " + p.name);
}

void rule_dl(DecompState& s, LogEntry& e) {
  e.method = "(DL)";
  const WeylGroup& W = weyl();
  int below = 0;
  for (int u = 0; u < W.order(); ++u) {
    if (u == e.w || !W.bruhat_leq(u, e.w)) continue;
    ++below;
    const auto a = pim_coefficients(s, u);
    for (int t : e.targets)
      if (!a[t - 1].is_zero())
        throw RuleInapplicableError("(DL): " + weyl_label(e.w) + " is not minimal, " + coefficient_name(u, t) + " = " +
                                    a[t - 1].to_string());
  }
  std::string zero;
  for (int t : e.targets) zero += (zero.empty() ? "" : " = ") + std::string("a_{w,") + std::to_string(t) + "}";
  e.premises.push_back(zero + " = 0 for the " + std::to_string(below) + " elements w < " + weyl_label(e.w));
  const auto a = pim_coefficients(s, e.w);
  const int sg = sign_of(e.w);
  for (int t : e.targets) {
    e.facts.push_back({coefficient_name(e.w, t), a[t - 1]});
    const Constraint c{a[t - 1] * SymExpr(sg), Relation::Geq, "(DL) " + coefficient_name(e.w, t) + " >= 0"};
    e.conclusions.push_back(coefficient_name(e.w, t) + " = " + a[t - 1].to_string() + ", so " + c.to_string());
    s.add(c);
  }
}

void rule_squeeze(DecompState& s, LogEntry& e) {
  e.method = "(Reg)+(DL)";
  const Symbol g = e.symbols.at(0);
  const int dk = static_cast<int>(Symbol::Delta);
  if (!s.lower[dk]) throw RuleInapplicableError("squeeze: no lower bound on delta");
  const mpq_class lo = *s.lower[dk];
  for (const auto& lc : s.constraints) {
    if (lc.rel != Relation::Geq || !lc.expr.is_affine() || lc.expr.linear(g) <= 0) continue;
    const SymExpr L = -(lc.expr * SymExpr(1 / lc.expr.linear(g)) - SymExpr::sym(g));
    for (const auto& uc : s.constraints) {
      if (uc.rel != Relation::Geq || uc.expr.linear(g) >= 0) continue;
      const SymExpr U = uc.expr * SymExpr(-1 / uc.expr.linear(g)) + SymExpr::sym(g);
      if (U.uses(g) || L.uses(g)) continue;
      const SymExpr S = U - L;
      const auto split = split_delta_product(S);
      if (!split) continue;
      const auto& [B, c] = *split;
      // S = B (delta - c) with c = lo and -B a recorded nonnegative quantity.
      if (c != lo) continue;
      const SymExpr X = -B;
      const Constraint* xc = nullptr;
      for (const auto& k : s.constraints)
        if (k.rel == Relation::Geq && k.expr == X) xc = &k;
      if (!xc) continue;
      e.premises.push_back(lc.origin + ": " + std::string(symbol_name(g)) + " >= " + L.to_string());
      e.premises.push_back(uc.origin + ": " + std::string(symbol_name(g)) + " <= " + U.to_string());
      e.premises.push_back(xc->origin + ": " + X.to_string() + " >= 0");
      e.premises.push_back("delta >= " + d4::to_string(lo));
      const SymExpr prod = X * (SymExpr::sym(Symbol::Delta) - SymExpr(lo));
      e.facts.push_back({symbol_name(g), L});
      e.conclusions.push_back(std::string(symbol_name(g)) + " = " + L.to_string());
      e.conclusions.push_back("(" + X.to_string() + ")*(delta - " + d4::to_string(lo) + ") = 0");
      s.substitute(g, L);
      s.add({prod, Relation::Eq, "(Reg)+(DL) squeeze"});
      return;
    }
  }
  throw RuleInapplicableError(std::string("squeeze: no matching bounds on ") + symbol_name(g));
}

void rule_split(BranchStates& states, LogEntry& e) {
  e.method = "(case split)";
  const DecompState& s = state_of(states, e.branch);
  for (const auto& c : s.constraints) {
    if (c.rel != Relation::Eq) continue;
    const auto split = split_delta_product(c.expr);
    if (!split) continue;
    const auto& [X, v] = *split;
    if (!X.is_affine()) continue;
    e.premises.push_back(c.to_string());
    const std::string a = X.to_string() + " >= 1", b = X.to_string() + " = 0";
    DecompState A = s, B = s;
    A.add({X - SymExpr(1), Relation::Geq, "branch " + a});
    A.substitute(Symbol::Delta, SymExpr(v));
    e.conclusions.push_back(a + ": delta = " + d4::to_string(v));
    Symbol solved = Symbol::Beta;
    bool found = false;
    for (Symbol t : {Symbol::Beta, Symbol::Alpha, Symbol::Gamma})
      if (!found && abs(X.linear(t)) == 1) {
        solved = t;
        found = true;
      }
    if (!found) throw RuleInapplicableError("split: cannot solve " + b);
    const SymExpr sol = SymExpr::sym(solved) - X * SymExpr(1 / X.linear(solved));
    B.substitute(solved, sol);
    e.conclusions.push_back(b + ": " + symbol_name(solved) + " = " + sol.to_string());
    e.facts.push_back({"split", X});
    const std::string prefix = e.branch.empty() ? "" : e.branch + "/";
    e.branches = {prefix + a, prefix + b};
    states[e.branches[0]] = A;
    states[e.branches[1]] = B;
    return;
  }
  throw RuleInapplicableError("split: no product constraint to split on");
}

void rule_pin(DecompState& s, LogEntry& e) {
  e.method = "(bounds)";
  const Symbol x = e.symbols.at(0);
  const int k = static_cast<int>(x);
  if (!s.lower[k] || !s.upper[k] || *s.lower[k] != *s.upper[k])
    throw RuleInapplicableError(std::string("pin: ") + symbol_name(x) + " is not determined");
  const mpq_class v = *s.lower[k];
  e.premises.push_back(d4::to_string(v) + " <= " + symbol_name(x) + " <= " + d4::to_string(v));
  e.facts.push_back({symbol_name(x), SymExpr(v)});
  e.conclusions.push_back(std::string(symbol_name(x)) + " = " + d4::to_string(v));
  s.substitute(x, SymExpr(v));
}

void rule_scan(DecompState& s, LogEntry& e) {
  e.method = "(DL)";
  const WeylGroup& W = weyl();
  int zero = 0;
  for (int w = 0; w < W.order(); ++w) {
    const auto a = pim_coefficients(s, w);
    bool any = false;
    for (int t : e.targets)
      if (!a[t - 1].is_zero()) {
        any = true;
        e.facts.push_back({coefficient_name(w, t), a[t - 1]});
        e.conclusions.push_back(coefficient_name(w, t) + " = " + a[t - 1].to_string());
      }
    if (!any) ++zero;
  }
  e.premises.push_back(std::to_string(zero) + " of " + std::to_string(W.order()) + " elements have zero coefficients");
}

void rule_merge(BranchStates& states, LogEntry& e) {
  e.method = "(case split)";
  DecompState& main = state_of(states, e.branch);
  const Symbol x = e.symbols.at(0);
  std::optional<SymExpr> value;
  for (const auto& [name, st] : states) {
    if (name == e.branch) continue;
    const auto it = st.fixed.find(x);
    if (it == st.fixed.end() || !it->second.is_constant())
      throw RuleInapplicableError(std::string("merge: branch ") + name + " does not fix " + symbol_name(x));
    if (value && *value != it->second) throw RuleInapplicableError("merge: the branches disagree");
    value = it->second;
    e.premises.push_back(name + ": " + symbol_name(x) + " = " + it->second.to_string());
  }
  if (!value) throw RuleInapplicableError("merge: no branches");
  DecompState merged = main;
  merged.substitute(x, *value);
  for (const auto& [name, st] : states) {
    if (name == e.branch) continue;
    auto d = merged.d;
    for (const auto& [sym, v] : st.fixed)
      for (auto& row : d)
        for (auto& entry : row) entry = entry.substitute(sym, v);
    if (d != st.d) throw RuleInapplicableError("merge: branch " + name + " has a different matrix");
  }
  main = merged;
  e.facts.push_back({symbol_name(x), *value});
  e.conclusions.push_back(std::string(symbol_name(x)) + " = " + value->to_string() + " in every branch");
}

void rule_bounds(DecompState& s, LogEntry& e) {
  e.method = "(bounds)";
  const int ak = static_cast<int>(Symbol::Alpha);
  if (!s.upper[ak]) throw RuleInapplicableError("bounds: alpha has no upper bound");
  e.conclusions.push_back("alpha <= " + d4::to_string(*s.upper[ak]));
  // The tightest cap on beta from a constraint beta <= f(alpha).
  std::optional<mpq_class> best;
  for (const auto& c : s.constraints) {
    if (c.rel != Relation::Geq || !c.expr.is_affine() || c.expr.linear(Symbol::Beta) >= 0) continue;
    const SymExpr cap = c.expr * SymExpr(-1 / c.expr.linear(Symbol::Beta)) + SymExpr::sym(Symbol::Beta);
    if (cap.uses(Symbol::Beta) || !cap.uses(Symbol::Alpha)) continue;
    const auto m = s.max_over_bounds(cap);
    if (!m) continue;
    e.premises.push_back(c.origin + ": beta <= " + cap.to_string() + " <= " + d4::to_string(*m));
    if (!best || *m < *best) best = m;
  }
  if (!best) throw RuleInapplicableError("bounds: beta has no upper bound in terms of alpha");
  s.add({SymExpr(*best) - SymExpr::sym(Symbol::Beta), Relation::Geq, "(bounds) beta <= " + d4::to_string(*best)});
  e.conclusions.push_back("beta <= " + d4::to_string(*best));
}

}  // namespace

void execute(BranchStates& states, LogEntry& e, const SolverContext& ctx) {
  e.method.clear();
  e.premises.clear();
  e.conclusions.clear();
  e.verdicts.clear();
  e.facts.clear();
  e.branches.clear();
  if (e.rule == Rule::Split) return rule_split(states, e);
  if (e.rule == Rule::Merge) return rule_merge(states, e);
  DecompState& s = state_of(states, e.branch);
  switch (e.rule) {
    case Rule::Load: return rule_load(s, e, ctx);
    case Rule::Block: return rule_block(s, e);
    case Rule::Uni: return rule_uni(s, e);
    case Rule::RegIndecomposable: return rule_reg_indecomposable(s, e, ctx);
    case Rule::Shape: return rule_shape(s, e);
    case Rule::Reg: return rule_reg(s, e, ctx);
    case Rule::Indecomposable: return rule_indecomposable(s, e, ctx);
    case Rule::DL: return rule_dl(s, e);
    case Rule::Squeeze: return rule_squeeze(s, e);
    case Rule::Pin: return rule_pin(s, e);
    case Rule::Scan: return rule_scan(s, e);
    case Rule::Bounds: return rule_bounds(s, e);
    default: break;
  }
}

bool LogEntry::same_result(const LogEntry& o) const {
  if (method != o.method || premises != o.premises || conclusions != o.conclusions || facts != o.facts ||
      branches != o.branches || verdicts.size() != o.verdicts.size())
    return false;
  for (std::size_t k = 0; k < verdicts.size(); ++k) {
    const auto &a = verdicts[k], &b = o.verdicts[k];
    if (a.candidate != b.candidate || a.refuted != b.refuted || a.method != b.method || a.reason != b.reason) return false;
  }
  return true;
}

std::string LogEntry::to_string() const {
  std::ostringstream os;
  os << "[" << rule_name(rule) << "]";
  if (!branch.empty()) os << " {" << branch << "}";
  os << " " << method;
  for (const auto& p : premises) os << "\n    given " << p;
  for (const auto& c : conclusions) os << "\n    => " << c;
  return os.str();
}

const Fact* ConstraintLog::find_fact(const std::string& name) const {
  for (const auto& e : entries)
    for (const auto& f : e.facts)
      if (f.name == name) return &f;
  return nullptr;
}

namespace {

// Bruhat-minimal elements w with a_{w,t} != 0 for some target t.
std::vector<int> minimal_support(const DecompState& s, const std::vector<int>& targets) {
  const WeylGroup& W = weyl();
  std::vector<int> support;
  for (int w = 0; w < W.order(); ++w) {
    const auto a = pim_coefficients(s, w);
    for (int t : targets)
      if (!a[t - 1].is_zero()) {
        support.push_back(w);
        break;
      }
  }
  std::vector<int> minimal;
  for (int w : support) {
    bool min = true;
    for (int u : support)
      if (u != w && W.bruhat_leq(u, w)) min = false;
    if (min) minimal.push_back(w);
  }
  return minimal;
}

SolveResult finish(BranchStates& states, ConstraintLog log) {
  SolveResult r;
  r.state = states.at("");
  r.log = std::move(log);
  for (const auto& [name, st] : states)
    if (!name.empty()) r.branches[name] = st;
  const SymExpr a = SymExpr::sym(Symbol::Alpha);
  for (const auto& c : r.state.constraints) {
    const bool alpha_cap = c.expr.is_affine() && c.expr.linear(Symbol::Alpha) < 0 && !c.expr.uses(Symbol::Beta);
    const bool beta_cap = c.origin.rfind("(bounds)", 0) == 0;
    const bool dl = c.origin.rfind("(DL)", 0) == 0;
    const bool gamma = c.origin == "(Sum) coefficients are nonnegative" && c.expr.uses(Symbol::Beta) &&
                       c.expr.uses(Symbol::Alpha);
    if (alpha_cap || beta_cap || dl || gamma) r.bounds.push_back(c);
  }
  (void)a;
  return r;
}

}  // namespace

SolveResult solve(const SolverContext& ctx) {
  BranchStates states;
  states[""] = DecompState();
  ConstraintLog log;
  auto step = [&](LogEntry e) {
    execute(states, e, ctx);
    log.entries.push_back(e);
    return log.entries.back();
  };
  auto entry = [](Rule r) {
    LogEntry e;
    e.rule = r;
    return e;
  };
  const int w0 = weyl().longest();

  step(entry(Rule::Load));
  {
    auto e = entry(Rule::Block);
    e.target = kOwnBlock;
    step(e);
  }
  {
    auto e = entry(Rule::Uni);
    e.target = kUnipotent;
    e.projective = "psi14";
    step(e);
  }
  for (const char* p : {"psi10", "psi11", "psi12"}) {
    auto e = entry(Rule::RegIndecomposable);
    e.projective = p;
    e.w = w0;
    step(e);
  }
  {
    auto e = entry(Rule::Shape);
    e.target = 13;
    e.projective = "psi13";
    e.symbols = {Symbol::Delta};
    step(e);
    auto r = entry(Rule::Reg);
    r.target = 13;
    r.w = w0;
    step(r);
  }
  for (const std::string& p : std::vector<std::string>{"psi7'", "psi6'", induction_name(3, {1, 3, 4}), induction_name(3, {2, 3, 4}),
                              induction_name(3, {1, 2, 3}), induction_name(2, {1, 2, 3}), induction_name(1, {1, 2, 3})}) {
    auto e = entry(Rule::Indecomposable);
    e.projective = p;
    step(e);
  }
  {
    auto e = entry(Rule::Shape);
    e.target = 9;
    e.projective = "psi9";
    e.symbols = {Symbol::Alpha, Symbol::Beta, Symbol::Gamma};
    step(e);
    auto r = entry(Rule::Reg);
    r.target = 9;
    r.w = w0;
    step(r);
  }
  {
    auto e = entry(Rule::DL);
    e.w = weyl().coxeter();
    e.targets = {13, 14};
    step(e);
  }
  {
    auto e = entry(Rule::Squeeze);
    e.symbols = {Symbol::Gamma};
    step(e);
  }
  const LogEntry split = step(entry(Rule::Split));
  for (const auto& b : split.branches) {
    DecompState& s = states.at(b);
    if (s.fixed.count(Symbol::Delta) == 0) {
      for (int w : minimal_support(s, {13, 14})) {
        auto e = entry(Rule::DL);
        e.branch = b;
        e.w = w;
        e.targets = {13, 14};
        step(e);
      }
      auto p = entry(Rule::Pin);
      p.branch = b;
      p.symbols = {Symbol::Delta};
      step(p);
    }
    auto sc = entry(Rule::Scan);
    sc.branch = b;
    sc.targets = {14};
    step(sc);
  }
  {
    auto e = entry(Rule::Merge);
    e.symbols = {Symbol::Delta};
    step(e);
  }
  step(entry(Rule::Bounds));
  return finish(states, std::move(log));
}

SolveResult solve(const EtaTable& eta, std::uint64_t q, std::int64_t ell) { return solve(make_context(eta, q, ell)); }

SolveResult replay(const ConstraintLog& log, const SolverContext& ctx) {
  BranchStates states;
  states[""] = DecompState();
  ConstraintLog out;
  for (std::size_t k = 0; k < log.entries.size(); ++k) {
    LogEntry e = log.entries[k];
    execute(states, e, ctx);
    if (!e.same_result(log.entries[k]))
      throw SpecMismatchError("replay diverges at entry " + std::to_string(k) + " [" + rule_name(e.rule) + "]");
    out.entries.push_back(e);
  }
  return finish(states, std::move(out));
}

const std::array<Column, kUnipotent>& printed_decomposition_matrix() {
  static const std::array<Column, kUnipotent> t = [] {
    const SymExpr a = SymExpr::sym(Symbol::Alpha), b = SymExpr::sym(Symbol::Beta), g = SymExpr::sym(Symbol::Gamma);
    const long rows[kUnipotent][kUnipotent] = {
        {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0},
        {2, 2, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 0, 0, 0},
        {1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 0}, {1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 1, 0, 0},
        {2, 1, 1, 1, 1, 1, 2, 0, 0, 1, 1, 1, 1, 0}, {1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 1, 4, 1},
    };
    std::array<Column, kUnipotent> m;
    for (int r = 0; r < kUnipotent; ++r)
      for (int c = 0; c < kUnipotent; ++c) m[r][c] = SymExpr(rows[r][c]);
    m[9][8] = a;
    m[10][8] = a;
    m[11][8] = a;
    m[12][8] = b;
    m[13][8] = g;
    return m;
  }();
  return t;
}

}  // namespace d4
