#include "d4/chevalley.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace d4 {

namespace {

struct Tables {
  // Roots strictly after r in canonical order.
  std::array<std::vector<int>, kPositiveRoots + 1> after;
  std::array<std::array<int, kPositiveRoots + 1>, kPositiveRoots + 1> sum{};
};

const Tables& tables() {
  static const Tables t = [] {
    Tables t;
    const auto& order = RootSystemD4::canonical_order();
    for (int p = 0; p < kPositiveRoots; ++p)
      for (int s = p + 1; s < kPositiveRoots; ++s) t.after[order[p]].push_back(order[s]);
    for (int i = 1; i <= kPositiveRoots; ++i)
      for (int j = 1; j <= kPositiveRoots; ++j) t.sum[i][j] = root_system().sum(i, j);
    return t;
  }();
  return t;
}

}  // namespace

namespace raw {

void rmul(const FieldSpec& F, Coords& a, int r, Elem t) {
  if (t == 0) return;
  const Tables& T = tables();
  // Factors after x_r are moved past x_r(t): Q x_r(t) = x_r(t) prod_c x_c(a_c) x_{c+r}(a_c t).
  int roots[kPositiveRoots];
  Elem vals[kPositiveRoots];
  int n = 0;
  for (int c : T.after[r])
    if (a[c] != 0) {
      roots[n] = c;
      vals[n] = a[c];
      a[c] = 0;
      ++n;
    }
  a[r] ^= t;
  for (int i = 0; i < n; ++i) {
    const int c = roots[i];
    rmul(F, a, c, vals[i]);
    const int s = T.sum[c][r];
    if (s) rmul(F, a, s, F.mul(vals[i], t));
  }
}

Coords mul(const FieldSpec& F, const Coords& x, const Coords& y) {
  Coords a = x;
  for (int r : RootSystemD4::canonical_order()) rmul(F, a, r, y[r]);
  return a;
}

Coords inverse(const FieldSpec& F, const Coords& x) {
  Coords a{};
  const auto& order = RootSystemD4::canonical_order();
  for (int p = kPositiveRoots - 1; p >= 0; --p) rmul(F, a, order[p], x[order[p]]);
  return a;
}

Coords conj_root(const FieldSpec& F, const Coords& x, int r, Elem t) {
  Coords a{};
  a[r] = t;
  for (int c : RootSystemD4::canonical_order()) rmul(F, a, c, x[c]);
  rmul(F, a, r, t);
  return a;
}

Coords collect(const FieldSpec& F, const std::vector<std::pair<int, Elem>>& word) {
  Coords a{};
  for (auto [r, t] : word) {
    if (!RootSystemD4::positive(r)) throw OutOfUError("root " + std::to_string(r) + " is not positive");
    rmul(F, a, r, t);
  }
  return a;
}

}  // namespace raw

UnipotentElement::UnipotentElement(Field field) : field_(std::move(field)) {
  if (!field_) throw InvalidInputError("unipotent element without a field");
}

UnipotentElement::UnipotentElement(Field field, const Coords& coords) : field_(std::move(field)), c_(coords) {
  if (!field_) throw InvalidInputError("unipotent element without a field");
  c_[0] = 0;
  for (int r = 1; r <= kPositiveRoots; ++r)
    if (c_[r] >= field_->q()) throw InvalidInputError("coordinate outside the field");
}

UnipotentElement UnipotentElement::root_element(Field field, int r, Elem t) {
  return from_word(std::move(field), {{r, t}});
}

UnipotentElement UnipotentElement::from_word(Field field, const std::vector<std::pair<int, Elem>>& word) {
  for (auto [r, t] : word)
    if (t >= field->q()) throw InvalidInputError("word coefficient outside the field");
  Coords c = raw::collect(*field, word);
  return UnipotentElement(std::move(field), c);
}

UnipotentElement UnipotentElement::from_canonical(Field field, const std::array<Elem, kPositiveRoots>& c) {
  Coords a{};
  const auto& order = RootSystemD4::canonical_order();
  for (int p = 0; p < kPositiveRoots; ++p) a[order[p]] = c[p];
  return UnipotentElement(std::move(field), a);
}

std::array<Elem, kPositiveRoots> UnipotentElement::canonical() const {
  std::array<Elem, kPositiveRoots> out{};
  const auto& order = RootSystemD4::canonical_order();
  for (int p = 0; p < kPositiveRoots; ++p) out[p] = c_[order[p]];
  return out;
}

std::vector<int> UnipotentElement::support() const {
  std::vector<int> s;
  for (int r : RootSystemD4::canonical_order())
    if (c_[r]) s.push_back(r);
  return s;
}

std::vector<std::pair<int, Elem>> UnipotentElement::word() const {
  std::vector<std::pair<int, Elem>> w;
  for (int r : RootSystemD4::canonical_order())
    if (c_[r]) w.emplace_back(r, c_[r]);
  return w;
}

bool UnipotentElement::is_identity() const {
  for (int r = 1; r <= kPositiveRoots; ++r)
    if (c_[r]) return false;
  return true;
}

void UnipotentElement::check(const UnipotentElement& o) const {
  if (field_ != o.field_ && !(*field_ == *o.field_)) throw SpecMismatchError("elements of U over different fields");
}

UnipotentElement UnipotentElement::operator*(const UnipotentElement& o) const {
  check(o);
  return UnipotentElement(field_, raw::mul(*field_, c_, o.c_));
}

UnipotentElement UnipotentElement::inverse() const { return UnipotentElement(field_, raw::inverse(*field_, c_)); }

std::string UnipotentElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int r : RootSystemD4::canonical_order())
    if (c_[r]) {
      if (!first) os << ' ';
      os << 'x' << r << '(' << c_[r] << ')';
      first = false;
    }
  if (first) os << "1";
  return os.str();
}

std::string UnipotentElement::to_hex() const {
  std::ostringstream os;
  const auto c = canonical();
  for (int p = 0; p < kPositiveRoots; ++p) {
    if (p) os << ',';
    char buf[16];
    std::snprintf(buf, sizeof buf, "%x", c[p]);
    os << buf;
  }
  return os.str();
}

UnipotentElement UnipotentElement::from_hex(Field field, const std::string& s) {
  std::array<Elem, kPositiveRoots> c{};
  std::stringstream ss(s);
  std::string tok;
  int p = 0;
  while (std::getline(ss, tok, ',')) {
    if (p >= kPositiveRoots) throw InvalidInputError("more than 12 coordinates in '" + s + "'");
    try {
      c[p++] = static_cast<Elem>(std::stoul(tok, nullptr, 16));
    } catch (const std::exception&) {
      throw InvalidInputError("bad hex coordinate '" + tok + "'");
    }
  }
  if (p != kPositiveRoots) throw InvalidInputError("expected 12 coordinates in '" + s + "'");
  return from_canonical(std::move(field), c);
}

UnipotentElement mul(const UnipotentElement& x, const UnipotentElement& y) { return x * y; }
UnipotentElement inverse(const UnipotentElement& x) { return x.inverse(); }
UnipotentElement commutator(const UnipotentElement& x, const UnipotentElement& y) {
  return x.inverse() * y.inverse() * x * y;
}

TorusElement TorusElement::make(const FieldSpec& F, std::array<Elem, kRank> t) {
  for (Elem v : t)
    if (v == 0 || v >= F.q()) throw InvalidInputError("torus coordinates must be nonzero field elements");
  TorusElement h;
  h.t = t;
  return h;
}

Elem torus_weight(const FieldSpec& F, int r, const TorusElement& h) {
  const auto& rs = root_system();
  Elem num = 1, den = 1;
  for (int i = 1; i <= kRank; ++i) {
    const int e = rs.torus_exponent(r, i);
    if (e > 0) num = F.mul(num, F.pow(h.t[i - 1], e));
    if (e < 0) den = F.mul(den, F.pow(h.t[i - 1], -e));
  }
  return F.div(num, den);
}

UnipotentElement conj_torus(const UnipotentElement& x, const TorusElement& h) {
  const FieldSpec& F = *x.field();
  Coords c = x.coords();
  for (int r = 1; r <= kPositiveRoots; ++r) c[r] = F.mul(c[r], torus_weight(F, r, h));
  return UnipotentElement(x.field(), c);
}

UnipotentElement conj_weyl(const UnipotentElement& x, int w) {
  const WeylElement& we = weyl().element(w);
  std::vector<std::pair<int, Elem>> word;
  for (auto [r, t] : x.word()) {
    const int s = we.apply(r);
    if (!RootSystemD4::positive(s))
      throw OutOfUError("w sends alpha_" + std::to_string(r) + " to a negative root");
    word.emplace_back(s, t);
  }
  return UnipotentElement::from_word(x.field(), word);
}

UnipotentElement conj_unip(const UnipotentElement& x, const UnipotentElement& u) { return u.inverse() * x * u; }

std::uint64_t centralizer_order_U(const UnipotentElement& x, bool force) {
  const FieldSpec& F = *x.field();
  if (F.q() > 4 && !force)
    throw RefusalError("brute-force centralizer needs q = 4 (q = " + std::to_string(F.q()) + " requested)");
  const int f = F.degree();
  const std::uint64_t total = std::uint64_t(1) << (f * kPositiveRoots);
  const Elem mask = F.q() - 1;
  std::uint64_t count = 0;
  const Coords& xc = x.coords();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Coords y{};
    std::uint64_t v = idx;
    for (int r = 1; r <= kPositiveRoots; ++r) {
      y[r] = Elem(v) & mask;
      v >>= f;
    }
    if (raw::mul(F, xc, y) == raw::mul(F, y, xc)) ++count;
  }
  return count;
}

TypeAResult typeA_normalize(const std::vector<int>& simple_roots, const std::vector<std::pair<int, Elem>>& word,
                            const Field& field) {
  const auto& rs = root_system();
  const int n = static_cast<int>(simple_roots.size());
  if (n < 1 || n > 3) throw InvalidInputError("typeA_normalize supports rank 1..3");
  // Positive roots of the subsystem: beta_i + ... + beta_l, ordered by height then start.
  struct SubRoot {
    int root, start, end;
  };
  std::vector<SubRoot> sub;
  for (int h = 1; h <= n; ++h)
    for (int i = 0; i + h <= n; ++i) {
      Coeffs c{};
      for (int j = i; j < i + h; ++j)
        for (int t = 0; t < kRank; ++t) c[t] += rs.root(simple_roots[j]).coeffs[t];
      const int r = rs.find(c);
      if (!RootSystemD4::positive(r)) throw InvalidInputError("simple roots do not span an A_n chain");
      sub.push_back({r, i, i + h - 1});
    }
  std::vector<int> seen;
  for (auto [r, t] : word) {
    if (std::find(simple_roots.begin(), simple_roots.end(), r) == simple_roots.end())
      throw InvalidInputError("word contains a root outside the simple system");
    if (std::find(seen.begin(), seen.end(), r) != seen.end()) throw InvalidInputError("repeated simple root");
    if (t == 0 || t >= field->q()) throw InvalidInputError("coefficients must be nonzero field elements");
    seen.push_back(r);
  }
  if (static_cast<int>(seen.size()) != n) throw InvalidInputError("missing simple root");

  const FieldSpec& F = *field;
  UnipotentElement cur = UnipotentElement::from_word(field, word);
  std::vector<Elem> a(n);
  std::vector<std::pair<int, Elem>> ordered;
  for (int i = 0; i < n; ++i) {
    a[i] = cur.coord(simple_roots[i]);
    ordered.emplace_back(simple_roots[i], a[i]);
  }
  const UnipotentElement target = UnipotentElement::from_word(field, ordered);
  const UnipotentElement target_inv = target.inverse();
  UnipotentElement conj = UnipotentElement::identity(field);
  for (int guard = 0; guard < 16; ++guard) {
    const UnipotentElement rest = target_inv * cur;
    const SubRoot* pick = nullptr;
    for (const auto& s : sub)
      if (s.end > s.start && rest.coord(s.root) != 0) {
        pick = &s;
        break;
      }
    if (!pick) return {conj, cur, a};
    // alpha_s = gamma - beta_start
    Coeffs c = rs.root(pick->root).coeffs;
    for (int t = 0; t < kRank; ++t) c[t] -= rs.root(simple_roots[pick->start]).coeffs[t];
    const int s = rs.find(c);
    const UnipotentElement u =
        UnipotentElement::root_element(field, s, F.div(rest.coord(pick->root), a[pick->start]));
    cur = conj_unip(cur, u);
    conj = conj * u;
  }
  throw InvalidInputError("type-A elimination did not terminate");
}

}  // namespace d4
