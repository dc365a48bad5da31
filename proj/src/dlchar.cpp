#include "d4/dlchar.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace d4 {

FamilyFourierData FamilyFourierData::standard() {
  FamilyFourierData f;
  const int s[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f.matrix[i][j] = mpq_class(s[i][j], 2);
  return f;
}

bool FamilyFourierData::orthogonal() const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mpq_class s = 0;
      for (int k = 0; k < 4; ++k) s += matrix[i][k] * matrix[j][k];
      if (s != (i == j ? 1 : 0)) return false;
    }
  return true;
}

const VirtualUnipotent& printed_r_w0() {
  static const VirtualUnipotent v = {0, 1, -4, 3, 3, 3, -6, -2, 0, -8, 3, 3, 3, -4, 1};
  return v;
}

const std::vector<PrintedInduction>& printed_inductions() {
  static const std::vector<PrintedInduction> v = {
      {3, {1, 3, 4}, {0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0}},
      {2, {1, 2, 3}, {0, 0, 1, 1, 1, 1, 1, 2, 0, 0, 1, 1, 1, 1, 0}},
      {1, {1, 2, 3}, {0, 1, 2, 1, 1, 1, 0, 2, 0, 0, 1, 1, 1, 2, 1}},
  };
  return v;
}

const std::vector<PrintedRestriction>& printed_restrictions() {
  static const std::vector<PrintedRestriction> v = {
      {"nu10^6", {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0}, {1, 3, 4}, {0, 0, 1, 2, 0}},
      {"nu10^7", {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 0}, {1, 3, 4}, {0, 1, 0, 4, 1}},
      {"nu7^1", {0, 1, 2, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0}, {1, 2, 3}, {4, 5, 1, 1, 0}},
      {"nu10^1", {0, 1, 2, 1, 1, 1, 0, 2, 0, 0, 0, 1, 1, 1, 0}, {1, 3, 4}, {4, 6, 1, 5, 1}},
      {"nu3^2", {0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0}, {1, 2, 3}, {1, 4, 0, 1, 0}},
  };
  return v;
}

namespace {

const std::array<int, 3> kFamilyPrincipal = {6, 7, 8};

// Coefficient vector of R_w over chi, from phi(w) for all phi.
VirtualUnipotent assemble(const Calibration& cal, const std::vector<long>& phi_at_w) {
  VirtualUnipotent out{};
  for (int i = 1; i <= kUnipotent; ++i) {
    if (i >= 6 && i <= 9) continue;
    out[i] = phi_at_w[cal.dict.irr[i]];
  }
  for (int m = 0; m < 4; ++m) {
    mpq_class s = 0;
    for (int a : kFamilyPrincipal)
      s += phi_at_w[cal.dict.irr[a]] * cal.fourier.matrix[cal.position[a - 6]][cal.position[m]];
    if (s.get_den() != 1) throw CalibrationError("Fourier coefficient is not integral");
    out[cal.fourier.members[m]] = s.get_num().get_si();
  }
  return out;
}

std::vector<long> column(int w) {
  const Parabolic& W = whole_weyl();
  const int c = W.class_of(w);
  std::vector<long> v;
  for (const auto& row : W.characters()) v.push_back(row[c]);
  return v;
}

std::string describe(const Calibration& c) {
  std::ostringstream s;
  for (int i = 1; i <= kUnipotent; ++i) s << (i > 1 ? " " : "") << "chi" << i << "->" << c.dict.irr[i];
  s << " positions";
  for (int p : c.position) s << " " << p;
  return s.str();
}

}  // namespace

Calibration calibrate(const FamilyFourierData& fourier) {
  if (!fourier.orthogonal()) throw CalibrationError("Fourier matrix is not orthogonal");
  const Parabolic& W = whole_weyl();
  const WeylGroup& G = weyl();
  const int nirr = static_cast<int>(W.characters().size());
  const auto at_w0 = column(G.longest());
  const auto at_1 = column(G.identity());
  const VirtualUnipotent& target = printed_r_w0();

  // Candidates for the characters outside the family: phi(w0) is the printed coefficient.
  std::vector<int> outside;
  for (int i = 1; i <= kUnipotent; ++i)
    if (i < 6 || i > 9) outside.push_back(i);
  std::vector<std::vector<int>> cand(kUnipotent + 1);
  for (int i : outside)
    for (int phi = 0; phi < nirr; ++phi)
      if (at_w0[phi] == target[i] && std::abs(target[i]) == at_1[phi]) cand[i].push_back(phi);
  // 1_G occurs in every R_w with coefficient 1.
  std::erase_if(cand[1], [&](int phi) {
    for (long v : W.characters()[phi])
      if (v != 1) return true;
    return false;
  });

  // Harish-Chandra inductions of the printed etas, over Irr(W).
  std::vector<std::vector<long>> induced;
  for (const auto& p : printed_inductions()) {
    const Parabolic& L = parabolic(p.J);
    std::vector<long> v(nirr, 0);
    const auto& eta = a3_pims()[p.eta - 1];
    for (int lambda = 0; lambda < kPartitions; ++lambda) {
      if (eta[lambda] == 0) continue;
      const auto c = decompose(induce(character(L, rho_index(L, static_cast<Rho>(lambda))), {1, 2, 3, 4}));
      for (int phi = 0; phi < nirr; ++phi) v[phi] += eta[lambda] * c[phi].get_num().get_si();
    }
    induced.push_back(v);
  }
  std::vector<int> tau(nirr);
  for (int phi = 0; phi < nirr; ++phi) tau[phi] = triality_irr(phi);

  std::vector<Calibration> found;
  std::set<std::vector<long>> seen;
  Calibration c;
  c.fourier = fourier;
  c.dict.calibrated = true;
  c.dict.irr.fill(-1);
  std::vector<bool> used(nirr, false);

  auto finish = [&]() {
    // Family: the three unused phi's on chi_6..chi_8, all Fourier positions.
    std::vector<int> rest;
    for (int phi = 0; phi < nirr; ++phi)
      if (!used[phi]) rest.push_back(phi);
    if (rest.size() != 3) return;
    std::sort(rest.begin(), rest.end());
    do {
      for (int k = 0; k < 3; ++k) c.dict.irr[6 + k] = rest[k];
      c.dict.irr[9] = -1;
      std::array<int, 4> pos = {0, 1, 2, 3};
      do {
        c.position = pos;
        if (assemble(c, at_w0) != target) continue;
        bool ok = true;
        for (std::size_t p = 0; p < induced.size() && ok; ++p)
          for (int i = 1; i <= kUnipotent && ok; ++i) {
            if (i == kOwnBlock) continue;
            const long v = c.dict.irr[i] < 0 ? 0 : induced[p][c.dict.irr[i]];
            ok = v == printed_inductions()[p].value[i];
          }
        if (!ok) continue;
        // Triality acts on chi as on U and on Irr(W) by conjugation with the
        // same root permutation.
        bool eq = true;
        for (int i = 1; i <= kUnipotent && eq; ++i)
          if (c.dict.irr[i] >= 0) eq = c.dict.irr[triality_chi(i)] == tau[c.dict.irr[i]];
        if (!eq) continue;
        const auto& gate = printed_restrictions().front();
        if (hc_restrict(gate.v, gate.J, c.dict) != gate.value) continue;
        // Matchings giving the same R_w on every class are equivalent.
        std::vector<long> key(c.dict.irr.begin(), c.dict.irr.end());
        for (int cl = 0; cl < W.class_count(); ++cl) {
          const auto r = assemble(c, column(W.class_rep(cl)));
          key.insert(key.end(), r.begin(), r.end());
        }
        if (seen.insert(key).second) found.push_back(c);
      } while (std::next_permutation(pos.begin(), pos.end()));
    } while (std::next_permutation(rest.begin(), rest.end()));
  };

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == outside.size()) {
      finish();
      return;
    }
    const int i = outside[k];
    for (int phi : cand[i]) {
      if (used[phi]) continue;
      used[phi] = true;
      c.dict.irr[i] = phi;
      self(self, k + 1);
      used[phi] = false;
    }
    c.dict.irr[i] = -1;
  };
  rec(rec, 0);

  if (found.size() != 1) {
    std::ostringstream s;
    s << "calibration found " << found.size() << " inequivalent matchings";
    for (const auto& f : found) s << "\n  " << describe(f);
    throw CalibrationError(s.str());
  }
  found[0].solutions = 1;
  return found[0];
}

const Calibration& calibration() {
  static const Calibration c = calibrate(FamilyFourierData::standard());
  return c;
}

VirtualUnipotent r_w(int w, const Calibration& cal) {
  if (!cal.dict.calibrated) throw CalibrationError("r_w needs a calibrated dictionary");
  return assemble(cal, column(w));
}

VirtualUnipotent r_w(int w) { return r_w(w, calibration()); }

long dl_inner(const VirtualUnipotent& a, const VirtualUnipotent& b) {
  long s = 0;
  for (int i = 1; i <= kUnipotent; ++i) s += a[i] * b[i];
  return s;
}

QPoly torus_order(int w) {
  const auto m = weyl().matrix(w);
  std::vector<mpq_class> xs, ys;
  for (int x = 0; x <= kRank; ++x) {
    // det(x - m) by exact elimination.
    std::array<std::array<mpq_class, kRank>, kRank> a;
    for (int i = 0; i < kRank; ++i)
      for (int j = 0; j < kRank; ++j) a[i][j] = (i == j ? x : 0) - m[i][j];
    mpq_class det = 1;
    for (int c = 0; c < kRank; ++c) {
      int p = c;
      while (p < kRank && a[p][c] == 0) ++p;
      if (p == kRank) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(a[p], a[c]);
        det = -det;
      }
      det *= a[c][c];
      for (int i = c + 1; i < kRank; ++i) {
        const mpq_class f = a[i][c] / a[c][c];
        for (int j = c; j < kRank; ++j) a[i][j] -= f * a[c][j];
      }
    }
    xs.emplace_back(x);
    ys.push_back(det);
  }
  return QPoly::interpolate(xs, ys);
}

namespace {

// Coordinates of the positive roots in the basis e_1..e_4 of the character
// lattice of SO8: alpha_1 = e1-e2, alpha_3 = e2-e3, alpha_2 = e3-e4, alpha_4 = e3+e4.
std::array<std::array<int, 4>, kPositiveRoots> roots_in_e() {
  const int simple[4][4] = {{1, -1, 0, 0}, {0, 0, 1, -1}, {0, 1, -1, 0}, {0, 0, 1, 1}};
  std::array<std::array<int, 4>, kPositiveRoots> out{};
  for (int r = 1; r <= kPositiveRoots; ++r)
    for (int i = 0; i < kRank; ++i)
      for (int k = 0; k < 4; ++k) out[r - 1][k] += root_system().root(r).coeffs[i] * simple[i][k];
  return out;
}

std::int64_t mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

}  // namespace

bool general_position_exists(int w, std::int64_t ell, std::int64_t q) {
  if (ell < 2 || q < 2) throw InvalidInputError("general_position_exists: need ell, q >= 2");
  if (q % ell == 0) throw InvalidInputError("general_position_exists: ell divides q");
  for (std::int64_t d = 2; d * d <= ell; ++d)
    if (ell % d == 0) throw InvalidInputError("general_position_exists: ell is not prime");
  if (w != weyl().longest()) throw NotImplementedError("general_position_exists: only w0 is supported");
  // l divides |W| = 192: the stabilizer criterion by hyperplanes does not apply.
  if (192 % ell == 0) return false;
  std::int64_t n = 1, rest = q + 1;
  while (rest % ell == 0) {
    rest /= ell;
    n *= ell;
  }
  if (n == 1) return false;
  // l-characters are the n-torsion (Z/n)^4 of (Z/(q+1))^4; such a character
  // lies on the hyperplane of alpha when <x, alpha> = 0 mod n.
  const auto roots = roots_in_e();
  std::array<std::int64_t, 4> x{};
  for (std::int64_t idx = 0; idx < n * n * n * n; ++idx) {
    std::int64_t t = idx;
    for (auto& c : x) {
      c = t % n;
      t /= n;
    }
    bool off = true;
    for (const auto& r : roots) {
      std::int64_t s = 0;
      for (int k = 0; k < 4; ++k) s += r[k] * x[k];
      if (mod(s, n) == 0) {
        off = false;
        break;
      }
    }
    if (!off) continue;
    // Confirm that only the identity of W(D4) (signed permutations with an
    // even number of sign changes) fixes x.
    std::array<int, 4> perm = {0, 1, 2, 3};
    bool fixed_by_other = false;
    do {
      for (int signs = 0; signs < 16 && !fixed_by_other; ++signs) {
        if (__builtin_popcount(signs) % 2) continue;
        if (signs == 0 && perm == std::array<int, 4>{0, 1, 2, 3}) continue;
        bool fixes = true;
        for (int k = 0; k < 4 && fixes; ++k) {
          const std::int64_t v = (signs >> k) & 1 ? -x[perm[k]] : x[perm[k]];
          fixes = mod(v - x[k], n) == 0;
        }
        fixed_by_other = fixes;
      }
    } while (!fixed_by_other && std::next_permutation(perm.begin(), perm.end()));
    if (!fixed_by_other) return true;
  }
  return false;
}

int parse_weyl_element(const std::string& text) {
  const WeylGroup& W = weyl();
  if (text == "w0") return W.longest();
  if (text == "coxeter") return W.coxeter();
  if (text == "id" || text == "1") return W.identity();
  if (text.rfind("word:", 0) == 0) {
    std::vector<int> word;
    std::stringstream s(text.substr(5));
    std::string tok;
    while (std::getline(s, tok, ',')) {
      if (tok.empty()) continue;
      int i = 0;
      try {
        i = std::stoi(tok);
      } catch (const std::exception&) {
        throw InvalidInputError("bad Weyl word " + text);
      }
      if (i < 1 || i > kRank) throw InvalidInputError("bad Weyl word " + text);
      word.push_back(i);
    }
    return W.from_word(word);
  }
  throw InvalidInputError("unknown Weyl element " + text);
}

QPoly unipotent_degree(int i) {
  if (i < 1 || i > kUnipotent) throw InvalidInputError("unipotent_degree: index out of range");
  const QPoly order_pprime = QPoly::parse("(q^2-1)(q^4-1)^2(q^6-1)");
  const WeylGroup& W = weyl();
  const Parabolic& P = whole_weyl();
  QPoly s;
  for (int c = 0; c < P.class_count(); ++c) {
    const int w = P.class_rep(c);
    const long a = r_w(w)[i];
    if (a == 0) continue;
    const int sign = W.length(w) % 2 ? -1 : 1;
    s += QPoly(sign * a * P.class_size(c)) * order_pprime.divide_exact(torus_order(w));
  }
  return s * QPoly(mpq_class(1, W.order()));
}

}  // namespace d4
