#include "d4/uchars.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace d4 {

namespace {

Elem parse_elem(const std::string& s, const FieldSpec& F) {
  if (s == "mu") return F.fix_mu();
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw InvalidInputError("bad field element '" + s + "'");
  const unsigned long v = std::stoul(s);
  if (v >= F.q()) throw InvalidInputError("field element " + s + " outside F_" + std::to_string(F.q()));
  return static_cast<Elem>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

}  // namespace

UCharSpec UCharSpec::linear(std::array<Elem, kRank> b) {
  UCharSpec s;
  s.kind = Linear;
  s.b = b;
  return s;
}

UCharSpec UCharSpec::q3half(const FieldSpec& F, Elem s, Elem t) {
  const Elem mu = F.fix_mu();
  if ((s != 0 && s != mu) || (t != 0 && t != mu)) throw InvalidInputError("q3half parameters must lie in {0, mu}");
  UCharSpec c;
  c.kind = Q3Half;
  c.s = s;
  c.t = t;
  return c;
}

UCharSpec UCharSpec::chi567(Elem d) {
  if (d == 0 || d == 1) throw InvalidInputError("chi567 needs d outside {0, 1}");
  UCharSpec c;
  c.kind = Chi567;
  c.d = d;
  return c;
}

UCharSpec UCharSpec::parse(const std::string& text, const FieldSpec& F) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::vector<std::string> args =
      colon == std::string::npos ? std::vector<std::string>{} : split(text.substr(colon + 1), ',');
  if (kind == "lin" || kind == "linear") {
    if (args.size() != kRank) throw InvalidInputError("linear character needs four entries: '" + text + "'");
    std::array<Elem, kRank> b{};
    for (int i = 0; i < kRank; ++i) b[i] = parse_elem(args[i], F);
    return linear(b);
  }
  if (kind == "q3half") {
    if (args.size() != 2) throw InvalidInputError("q3half needs s,t: '" + text + "'");
    return q3half(F, parse_elem(args[0], F), parse_elem(args[1], F));
  }
  if (kind == "chi567") {
    if (args.size() > 1) throw InvalidInputError("chi567 takes at most one parameter: '" + text + "'");
    return chi567(args.empty() ? F.first_non_binary() : parse_elem(args[0], F));
  }
  throw InvalidInputError("unknown character kind '" + kind + "'");
}

std::string UCharSpec::to_string() const {
  switch (kind) {
    case Linear:
      return "lin:" + std::to_string(b[0]) + "," + std::to_string(b[1]) + "," + std::to_string(b[2]) + "," +
             std::to_string(b[3]);
    case Q3Half:
      return "q3half:" + std::to_string(s) + "," + std::to_string(t);
    case Chi567:
      return "chi567:" + std::to_string(d);
  }
  return "";
}

mpq_class UCharSpec::degree(const FieldSpec& F) const {
  const mpq_class q = F.q();
  switch (kind) {
    case Linear:
      return 1;
    case Q3Half:
      return q * q * q / 2;
    case Chi567:
      return q;
  }
  return 0;
}

mpq_class value(const UCharSpec& spec, const UnipotentElement& x) {
  const FieldSpec& F = *x.field();
  const auto& t = x.coords();
  const mpq_class q = F.q();
  switch (spec.kind) {
    case UCharSpec::Linear: {
      Elem arg = 0;
      for (int i = 0; i < kRank; ++i) arg ^= F.mul(spec.b[i], t[i + 1]);
      return F.phi(arg);
    }
    case UCharSpec::Chi567: {
      if (spec.d == 0 || spec.d == 1) throw InvalidInputError("chi567 needs d outside {0, 1}");
      if (t[3] != 0 || (t[1] ^ t[2] ^ t[4]) != 0) return 0;
      return q * F.phi(t[2] ^ F.mul(spec.d, t[4]) ^ t[5] ^ t[6] ^ t[7]);
    }
    case UCharSpec::Q3Half: {
      const Elem mu = F.fix_mu();
      if ((spec.s != 0 && spec.s != mu) || (spec.t != 0 && spec.t != mu))
        throw InvalidInputError("q3half parameters must lie in {0, mu}");
      const bool binary = t[1] == t[2] && t[2] == t[4] && t[1] <= 1;
      const Elem tail = t[8] ^ t[9] ^ t[10];
      if (t[3] == 0 && binary && t[5] == t[6] && t[6] == t[7])
        return q * q * q / 2 * F.phi(F.mul(spec.s, t[1]) ^ t[7] ^ tail);
      if (t[3] != 1 || !binary) return 0;
      const Elem arg = F.mul(spec.s, t[1]) ^ F.mul(spec.t, t[3]) ^ t[7] ^ F.mul(t[5] ^ t[7], t[6] ^ t[7]) ^ tail;
      return q * q / 2 * F.phi(arg);
    }
  }
  return 0;
}

mpq_class family_sum(const UCharSpec& spec, const FamilySpec& fam, const Field& field) {
  mpq_class s = 0;
  for (const auto& x : instances(fam, field)) s += value(spec, x);
  return s;
}

// ---- symbolic polynomials ----

namespace {

int modulus_of(const FieldSpec& F) { return static_cast<int>(F.q()) - 1; }

int reduce(long long e, int n) {
  long long r = e % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Inverse of e modulo n, or 0 when gcd(e, n) != 1.
int inverse_mod(int e, int n) {
  if (n == 1) return 0;
  long long a = e, b = n, x0 = 1, x1 = 0;
  while (b) {
    const long long k = a / b;
    std::tie(a, b) = std::make_pair(b, a - k * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - k * x1);
  }
  if (a != 1) return 0;
  return reduce(x0, n);
}

}  // namespace

SymPoly SymPoly::constant(const FieldSpec& F, Elem c) { return mono(F, c, {}); }

SymPoly SymPoly::var(const FieldSpec& F, int i) {
  std::array<int, kMaxVars> e{};
  e.at(i) = 1;
  return mono(F, 1, e);
}

SymPoly SymPoly::mono(const FieldSpec& F, Elem c, const std::array<int, kMaxVars>& e) {
  SymPoly p;
  p.m_.push_back({c, e});
  p.normalize(F);
  return p;
}

void SymPoly::normalize(const FieldSpec& F) {
  const int n = modulus_of(F);
  for (auto& m : m_)
    for (auto& x : m.e) x = reduce(x, n);
  std::sort(m_.begin(), m_.end(), [](const SymMono& a, const SymMono& b) { return a.e < b.e; });
  std::vector<SymMono> out;
  for (const auto& m : m_) {
    if (!out.empty() && out.back().e == m.e)
      out.back().c ^= m.c;
    else
      out.push_back(m);
  }
  std::erase_if(out, [](const SymMono& m) { return m.c == 0; });
  m_ = std::move(out);
}

std::optional<Elem> SymPoly::as_constant() const {
  if (m_.empty()) return Elem{0};
  if (m_.size() == 1 && m_[0].e == std::array<int, kMaxVars>{}) return m_[0].c;
  return std::nullopt;
}

bool SymPoly::uses(int var) const {
  return std::any_of(m_.begin(), m_.end(), [var](const SymMono& m) { return m.e[var] != 0; });
}

SymPoly SymPoly::add(const FieldSpec& F, const SymPoly& o) const {
  SymPoly p = *this;
  p.m_.insert(p.m_.end(), o.m_.begin(), o.m_.end());
  p.normalize(F);
  return p;
}

SymPoly SymPoly::mul(const FieldSpec& F, const SymPoly& o) const {
  SymPoly p;
  for (const auto& a : m_)
    for (const auto& b : o.m_) {
      SymMono m;
      m.c = F.mul(a.c, b.c);
      for (int i = 0; i < kMaxVars; ++i) m.e[i] = a.e[i] + b.e[i];
      p.m_.push_back(m);
    }
  p.normalize(F);
  return p;
}

SymPoly SymPoly::substitute(const FieldSpec& F, int var, Elem k, const std::array<int, kMaxVars>& e) const {
  const int n = modulus_of(F);
  SymPoly p;
  for (const auto& a : m_) {
    SymMono m = a;
    const int x = a.e[var];
    m.e[var] = 0;
    if (x) {
      m.c = F.mul(m.c, F.pow(k, static_cast<std::uint64_t>(x)));
      for (int i = 0; i < kMaxVars; ++i)
        if (i != var) m.e[i] = reduce(static_cast<long long>(m.e[i]) + static_cast<long long>(x) * e[i], n);
    }
    p.m_.push_back(m);
  }
  p.normalize(F);
  return p;
}

SymPoly SymPoly::frobenius(const FieldSpec& F, int k) const {
  const int n = modulus_of(F);
  const int f = F.degree();
  k = ((k % f) + f) % f;
  SymPoly p = *this;
  for (auto& m : p.m_)
    for (int i = 0; i < k; ++i) {
      m.c = F.sqr(m.c);
      for (auto& x : m.e) x = reduce(2LL * x, n);
    }
  p.normalize(F);
  return p;
}

std::optional<SymPoly> SymPoly::substitute(const FieldSpec& F, int var, const SymPoly& p) const {
  const int n = modulus_of(F);
  SymPoly out;
  for (const auto& a : m_) {
    SymMono rest = a;
    const int x = a.e[var];
    rest.e[var] = 0;
    SymPoly factor = SymPoly::mono(F, rest.c, rest.e);
    if (x != 0) {
      std::optional<SymPoly> power;
      long long two = 1;
      for (int k = 0; k < F.degree() && !power; ++k, two = two * 2 % n)
        if (two == x) power = p.frobenius(F, k);
      if (!power && x <= 4) {
        power = p;
        for (int i = 1; i < x; ++i) power = power->mul(F, p);
      }
      if (!power) return std::nullopt;
      factor = factor.mul(F, *power);
    }
    out = out.add(F, factor);
  }
  return out;
}

Elem SymPoly::eval(const FieldSpec& F, const std::vector<Elem>& a) const {
  Elem s = 0;
  for (const auto& m : m_) {
    Elem v = m.c;
    for (int i = 0; i < kMaxVars; ++i)
      if (m.e[i]) v = F.mul(v, F.pow(a.at(i), static_cast<std::uint64_t>(m.e[i])));
    s ^= v;
  }
  return s;
}

std::string SymPoly::to_string() const {
  if (m_.empty()) return "0";
  std::string s;
  for (const auto& m : m_) {
    if (!s.empty()) s += " + ";
    std::string t = m.c == 1 ? "" : std::to_string(m.c);
    for (int i = 0; i < kMaxVars; ++i)
      if (m.e[i]) {
        if (!t.empty()) t += "*";
        t += "a" + std::to_string(i);
        if (m.e[i] != 1) t += "^" + std::to_string(m.e[i]);
      }
    s += t.empty() ? "1" : t;
  }
  return s;
}

// ---- elimination ----

namespace {

struct Work {
  CharSum s;
  unsigned alive = 0;
};

bool dead_zero(const SymPoly& p) {
  // p = 0 is impossible when p is a nonzero constant or a single monomial in nonzero variables.
  return !p.is_zero() && p.monos().size() == 1;
}

// Tries to solve c1 M1 + c2 M2 = 0 for a live variable with invertible exponent.
bool solve_binomial(const FieldSpec& F, const SymPoly& p, unsigned alive, int& var, Elem& k,
                    std::array<int, kMaxVars>& e) {
  if (p.monos().size() != 2) return false;
  const int n = modulus_of(F);
  const auto& m1 = p.monos()[0];
  const auto& m2 = p.monos()[1];
  std::array<int, kMaxVars> r{};
  for (int i = 0; i < kMaxVars; ++i) r[i] = reduce(m1.e[i] - m2.e[i], n);
  // prod a_i^{r_i} = c2 / c1
  const Elem ratio = F.div(m2.c, m1.c);
  for (int j = 0; j < kMaxVars; ++j) {
    if (!(alive >> j & 1) || r[j] == 0) continue;
    const int inv = inverse_mod(r[j], n);
    if (!inv) continue;
    var = j;
    k = F.pow(ratio, static_cast<std::uint64_t>(inv));
    for (int i = 0; i < kMaxVars; ++i)
      e[i] = i == j ? 0 : reduce(-static_cast<long long>(r[i]) * inv, n);
    return true;
  }
  return false;
}

// Solves p = 0 for a variable occurring in a single monomial c a^(2^k) M:
// a = ((p - c a^(2^k) M)/(c M))^(2^-k), valid where that value is nonzero.
bool solve_linear(const FieldSpec& F, const SymPoly& p, unsigned alive, int& var, SymPoly& value) {
  const int n = modulus_of(F);
  for (int j = 0; j < kMaxVars; ++j) {
    if (!(alive >> j & 1)) continue;
    int count = 0;
    const SymMono* hit = nullptr;
    for (const auto& m : p.monos())
      if (m.e[j]) {
        ++count;
        hit = &m;
      }
    if (count != 1) continue;
    int k = -1;
    long long two = 1;
    for (int i = 0; i < F.degree(); ++i, two = two * 2 % n)
      if (two == hit->e[j]) k = i;
    if (k < 0) continue;
    std::array<int, kMaxVars> inv{};
    for (int i = 0; i < kMaxVars; ++i) inv[i] = i == j ? 0 : -hit->e[i];
    const SymPoly rest = p.add(F, SymPoly::mono(F, hit->c, hit->e));
    var = j;
    value = rest.mul(F, SymPoly::mono(F, F.inv(hit->c), inv)).frobenius(F, -k);
    return true;
  }
  return false;
}

void substitute_all(const FieldSpec& F, CharSum& s, int var, Elem k, const std::array<int, kMaxVars>& e) {
  s.phase = s.phase.substitute(F, var, k, e);
  for (auto& p : s.zero) p = p.substitute(F, var, k, e);
  for (auto& p : s.nonzero) p = p.substitute(F, var, k, e);
  for (auto& [p, v] : s.trace) p = p.substitute(F, var, k, e);
}

bool in_conditions(const CharSum& s, int var) {
  for (const auto& p : s.zero)
    if (p.uses(var)) return true;
  for (const auto& p : s.nonzero)
    if (p.uses(var)) return true;
  for (const auto& [p, v] : s.trace)
    if (p.uses(var)) return true;
  return false;
}

// Splits the phase as a^e L + R after moving every monomial in a by a Frobenius
// power so that the exponent of a is the least element of its 2-orbit.
bool split_phase(const FieldSpec& F, const SymPoly& phase, int var, SymPoly& L, SymPoly& R) {
  const int n = modulus_of(F);
  const int f = F.degree();
  int common = -1;
  L = SymPoly();
  R = SymPoly();
  for (const auto& m : phase.monos()) {
    if (m.e[var] == 0) {
      R = R.add(F, SymPoly::mono(F, m.c, m.e));
      continue;
    }
    SymMono best = m, cur = m;
    for (int s = 1; s < f; ++s) {
      cur.c = F.sqr(cur.c);
      for (auto& x : cur.e) x = reduce(2LL * x, n);
      if (cur.e[var] < best.e[var]) best = cur;
    }
    if (common == -1) common = best.e[var];
    if (best.e[var] != common) return false;
    std::array<int, kMaxVars> rest = best.e;
    rest[var] = 0;
    L = L.add(F, SymPoly::mono(F, best.c, rest));
  }
  return common > 0 && inverse_mod(common, n) != 0;
}

}  // namespace

SumResult evaluate_sum(const FieldSpec& F, int nvars, std::vector<CharSum> terms, bool allow_enumeration) {
  if (nvars < 0 || nvars > kMaxVars) throw InvalidInputError("too many summation variables");
  const mpq_class q = F.q();
  const mpq_class qm1 = q - 1;
  SumResult res;
  res.value = 0;
  std::vector<Work> stack;
  for (auto& t : terms) stack.push_back({std::move(t), (1u << nvars) - 1});

  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    CharSum& s = w.s;
    if (s.weight == 0) continue;

    bool dead = false;
    bool progress = true;
    while (progress && !dead) {
      progress = false;
      // Constant and single-monomial conditions.
      std::vector<SymPoly> zero;
      for (auto& p : s.zero) {
        if (p.is_zero()) continue;
        if (dead_zero(p)) dead = true;
        zero.push_back(std::move(p));
      }
      s.zero = std::move(zero);
      std::vector<SymPoly> nonzero;
      for (auto& p : s.nonzero) {
        if (p.is_zero()) dead = true;
        if (p.monos().size() == 1) continue;
        nonzero.push_back(std::move(p));
      }
      s.nonzero = std::move(nonzero);
      std::vector<std::pair<SymPoly, int>> trace;
      for (auto& [p, v] : s.trace) {
        if (auto c = p.as_constant()) {
          if (F.trace(*c) != v) dead = true;
          continue;
        }
        trace.emplace_back(std::move(p), v);
      }
      s.trace = std::move(trace);
      if (dead) break;
      // Binomial equations are solved by substitution.
      for (std::size_t i = 0; i < s.zero.size(); ++i) {
        int var = 0;
        Elem k = 0;
        std::array<int, kMaxVars> e{};
        if (solve_binomial(F, s.zero[i], w.alive, var, k, e)) {
          s.zero.erase(s.zero.begin() + static_cast<long>(i));
          substitute_all(F, s, var, k, e);
          w.alive &= ~(1u << var);
          progress = true;
          break;
        }
      }
      if (progress) continue;
      for (std::size_t i = 0; i < s.zero.size() && !progress; ++i) {
        int var = 0;
        SymPoly v;
        if (!solve_linear(F, s.zero[i], w.alive, var, v)) continue;
        CharSum t = s;
        t.zero.erase(t.zero.begin() + static_cast<long>(i));
        bool ok = true;
        auto sub = [&](SymPoly& p) {
          if (!ok) return;
          auto r = p.substitute(F, var, v);
          if (r) p = std::move(*r);
          else ok = false;
        };
        sub(t.phase);
        for (auto& p : t.zero) sub(p);
        for (auto& p : t.nonzero) sub(p);
        for (auto& [p, x] : t.trace) sub(p);
        if (!ok) continue;
        t.nonzero.push_back(v);
        s = std::move(t);
        w.alive &= ~(1u << var);
        progress = true;
      }
    }
    if (dead) continue;

    if (!s.trace.empty()) {
      auto [p, v] = s.trace.back();
      s.trace.pop_back();
      Work a = w, b = w;
      a.s.weight /= 2;
      b.s.weight = (v ? -s.weight : s.weight) / 2;
      b.s.phase = b.s.phase.add(F, p);
      stack.push_back(std::move(a));
      stack.push_back(std::move(b));
      continue;
    }
    if (!s.nonzero.empty()) {
      SymPoly p = s.nonzero.back();
      s.nonzero.pop_back();
      Work a = w, b = w;
      b.s.weight = -s.weight;
      b.s.zero.push_back(p);
      stack.push_back(std::move(a));
      stack.push_back(std::move(b));
      continue;
    }

    // Variables that no longer occur.
    for (int j = 0; j < nvars; ++j)
      if ((w.alive >> j & 1) && !s.phase.uses(j) && !in_conditions(s, j)) {
        s.weight *= qm1;
        w.alive &= ~(1u << j);
      }
    if (w.alive == 0) {
      const auto c = s.phase.as_constant();
      if (!c || !s.zero.empty()) throw Error("internal: constant term with open conditions");
      res.value += s.weight * F.phi(*c);
      continue;
    }

    // Sum over a variable that occurs in the phase only.
    int best = -1;
    SymPoly bestL, bestR;
    for (int j = 0; j < nvars; ++j) {
      if (!(w.alive >> j & 1) || in_conditions(s, j)) continue;
      SymPoly L, R;
      if (!split_phase(F, s.phase, j, L, R)) continue;
      if (best == -1 || (L.monos().size() == 1 && bestL.monos().size() != 1)) {
        best = j;
        bestL = L;
        bestR = R;
      }
    }
    if (best != -1) {
      w.alive &= ~(1u << best);
      Work a = w;
      a.s.weight = -s.weight;
      a.s.phase = bestR;
      stack.push_back(a);
      if (bestL.monos().size() != 1) {
        Work b = w;
        b.s.weight = s.weight * q;
        b.s.phase = bestR;
        b.s.zero.push_back(bestL);
        stack.push_back(std::move(b));
      }
      continue;
    }

    if (!allow_enumeration) throw NotImplementedError("no elimination rule applies to " + s.phase.to_string());
    int var = -1, uses = -1;
    for (int j = 0; j < nvars; ++j) {
      if (!(w.alive >> j & 1)) continue;
      int u = 0;
      for (const auto& p : s.zero) u += p.uses(j);
      u = 2 * u + s.phase.uses(j);
      if (u > uses) {
        uses = u;
        var = j;
      }
    }
    res.closed = false;
    w.alive &= ~(1u << var);
    for (Elem v = 1; v < F.q(); ++v) {
      Work a = w;
      substitute_all(F, a.s, var, v, {});
      stack.push_back(std::move(a));
      ++res.enumerated;
    }
  }
  return res;
}

// ---- symbolic families ----

namespace {

struct AfterTable {
  std::array<std::vector<int>, kPositiveRoots + 1> after;
};

const AfterTable& after_table() {
  static const AfterTable t = [] {
    AfterTable t;
    const auto& order = RootSystemD4::canonical_order();
    for (int p = 0; p < kPositiveRoots; ++p)
      for (int s = p + 1; s < kPositiveRoots; ++s) t.after[order[p]].push_back(order[s]);
    return t;
  }();
  return t;
}

// Same collection step as raw::rmul, over polynomial coefficients.
void sym_rmul(const FieldSpec& F, std::array<SymPoly, kPositiveRoots + 1>& a, int r, const SymPoly& t) {
  if (t.is_zero()) return;
  std::vector<std::pair<int, SymPoly>> moved;
  for (int c : after_table().after[r])
    if (!a[c].is_zero()) {
      moved.emplace_back(c, a[c]);
      a[c] = SymPoly();
    }
  a[r] = a[r].add(F, t);
  for (const auto& [c, v] : moved) {
    sym_rmul(F, a, c, v);
    const int s = root_system().sum(c, r);
    if (s) sym_rmul(F, a, s, v.mul(F, t));
  }
}

struct ExprParser {
  const FieldSpec& F;
  const std::vector<std::string>& params;

  // Product of factors such as "a_1 a_10^2 mu"; the result is a monomial.
  SymPoly product(const std::string& text, int sign) const {
    std::array<int, kMaxVars> e{};
    Elem c = 1;
    std::stringstream ss(text);
    std::string tok;
    while (ss >> tok) {
      int power = 1;
      const auto caret = tok.find('^');
      std::string name = tok;
      if (caret != std::string::npos) {
        name = tok.substr(0, caret);
        power = std::stoi(tok.substr(caret + 1));
      }
      const auto it = std::find(params.begin(), params.end(), name);
      if (it != params.end()) {
        e[it - params.begin()] += sign * power;
      } else {
        Elem v = parse_elem(name, F);
        if (v == 0) return SymPoly();
        if (sign < 0) v = F.inv(v);
        c = F.mul(c, F.pow(v, static_cast<std::uint64_t>(power)));
      }
    }
    return SymPoly::mono(F, c, e);
  }

  SymPoly monomial(std::string text) const {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return product(text, 1);
    std::string den = text.substr(slash + 1);
    if (!den.empty() && den.front() == '(' && den.back() == ')') den = den.substr(1, den.size() - 2);
    return product(text.substr(0, slash), 1).mul(F, product(den, -1));
  }

  SymPoly poly(const std::string& text) const {
    SymPoly p;
    std::size_t pos = 0;
    while (true) {
      const auto plus = text.find(" + ", pos);
      p = p.add(F, monomial(text.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos)));
      if (plus == std::string::npos) break;
      pos = plus + 3;
    }
    return p;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(' ');
  const auto e = s.find_last_not_of(' ');
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

SymbolicFamily symbolic_family(const FamilySpec& fam, const FieldSpec& F) {
  if (fam.params.size() > kMaxVars) throw InvalidInputError("family " + fam.key + " has too many parameters");
  SymbolicFamily out;
  out.nvars = static_cast<int>(fam.params.size());
  const ExprParser P{F, fam.params};
  const std::string& s = fam.pattern;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s.compare(pos, 2, "x_") != 0) throw InvalidInputError("bad pattern '" + s + "'");
    const auto open = s.find('(', pos);
    int depth = 0;
    std::size_t close = open;
    for (; close < s.size(); ++close) {
      if (s[close] == '(') ++depth;
      if (s[close] == ')' && --depth == 0) break;
    }
    if (open == std::string::npos || close >= s.size()) throw InvalidInputError("bad pattern '" + s + "'");
    const int r = std::stoi(s.substr(pos + 2, open - pos - 2));
    sym_rmul(F, out.coords, r, P.poly(s.substr(open + 1, close - open - 1)));
    pos = close + 1;
  }
  for (const auto& c : fam.constraints) {
    if (c.rfind("Tr(", 0) == 0) {
      const auto eq = c.rfind('=');
      const auto close = c.rfind(')', eq);
      out.trace.emplace_back(P.poly(c.substr(3, close - 3)), std::stoi(trim(c.substr(eq + 1))));
    } else if (const auto ne = c.find("!="); ne != std::string::npos) {
      if (trim(c.substr(ne + 2)) != "0") throw InvalidInputError("bad constraint '" + c + "'");
      out.nonzero.push_back(P.poly(trim(c.substr(0, ne))));
    } else if (const auto eq = c.find('='); eq != std::string::npos) {
      if (trim(c.substr(eq + 1)) != "0") throw InvalidInputError("bad constraint '" + c + "'");
      out.zero.push_back(P.poly(trim(c.substr(0, eq))));
    } else {
      throw InvalidInputError("bad constraint '" + c + "'");
    }
  }
  return out;
}

std::vector<CharSum> character_terms(const UCharSpec& spec, const SymbolicFamily& fam, const FieldSpec& F) {
  const auto& t = fam.coords;
  const mpq_class q = F.q();
  auto k = [&](Elem c) { return SymPoly::constant(F, c); };
  auto base = [&](mpq_class w) {
    CharSum s;
    s.weight = std::move(w);
    s.zero = fam.zero;
    s.nonzero = fam.nonzero;
    s.trace = fam.trace;
    return s;
  };
  std::vector<CharSum> out;
  switch (spec.kind) {
    case UCharSpec::Linear: {
      CharSum s = base(1);
      for (int i = 0; i < kRank; ++i) s.phase = s.phase.add(F, k(spec.b[i]).mul(F, t[i + 1]));
      out.push_back(std::move(s));
      break;
    }
    case UCharSpec::Chi567: {
      CharSum s = base(q);
      s.zero.push_back(t[3]);
      s.zero.push_back(t[1].add(F, t[2]).add(F, t[4]));
      s.phase = t[2].add(F, k(spec.d).mul(F, t[4])).add(F, t[5]).add(F, t[6]).add(F, t[7]);
      out.push_back(std::move(s));
      break;
    }
    case UCharSpec::Q3Half: {
      const SymPoly tail = t[8].add(F, t[9]).add(F, t[10]);
      for (Elem c : {Elem{0}, Elem{1}}) {
        // Inside Z.
        CharSum z = base(q * q * q / 2);
        z.zero.push_back(t[3]);
        for (int r : {1, 2, 4}) z.zero.push_back(t[r].add(F, k(c)));
        z.zero.push_back(t[5].add(F, t[6]));
        z.zero.push_back(t[6].add(F, t[7]));
        z.phase = k(F.mul(spec.s, c)).add(F, t[7]).add(F, tail);
        out.push_back(std::move(z));
        // t3 = 1, hence outside Z.
        CharSum o = base(q * q / 2);
        o.zero.push_back(t[3].add(F, k(1)));
        for (int r : {1, 2, 4}) o.zero.push_back(t[r].add(F, k(c)));
        o.phase = k(F.mul(spec.s, c))
                      .add(F, k(spec.t).mul(F, t[3]))
                      .add(F, t[7])
                      .add(F, t[5].add(F, t[7]).mul(F, t[6].add(F, t[7])))
                      .add(F, tail);
        out.push_back(std::move(o));
      }
      break;
    }
  }
  return out;
}

std::optional<mpq_class> closed_form_sum(const UCharSpec& spec, const FamilySpec& fam, const Field& field) {
  const SymbolicFamily sf = symbolic_family(fam, *field);
  try {
    return evaluate_sum(*field, sf.nvars, character_terms(spec, sf, *field), false).value;
  } catch (const NotImplementedError&) {
    return std::nullopt;
  }
}

SumResult fast_family_sum(const UCharSpec& spec, const FamilySpec& fam, const Field& field) {
  const SymbolicFamily sf = symbolic_family(fam, *field);
  return evaluate_sum(*field, sf.nvars, character_terms(spec, sf, *field), true);
}

}  // namespace d4
