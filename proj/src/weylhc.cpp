#include "d4/weylhc.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace d4 {

namespace {

using QMat = std::vector<std::vector<mpq_class>>;

// Basis of the null space of a (rows x cols), as column vectors.
std::vector<std::vector<mpq_class>> null_space(QMat a, int cols) {
  const int rows = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const mpq_class iv = 1 / a[r][c];
    for (auto& x : a[r]) x *= iv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (int k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<std::vector<mpq_class>> basis;
  for (int free = 0; free < cols; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<mpq_class> v(cols, 0);
    v[free] = 1;
    for (int i = 0; i < r; ++i) v[pivot_col[i]] = -a[i][free];
    basis.push_back(v);
  }
  return basis;
}

// Solves B x = y for x, B of full column rank; y must lie in the span.
std::vector<mpq_class> solve_in_span(const QMat& B, const std::vector<mpq_class>& y) {
  const int n = static_cast<int>(B.size()), d = static_cast<int>(B[0].size());
  QMat a(n, std::vector<mpq_class>(d + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) a[i][j] = B[i][j];
    a[i][d] = y[i];
  }
  int r = 0;
  std::vector<int> piv;
  for (int c = 0; c < d; ++c) {
    int p = r;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw DataError("solve_in_span: dependent basis");
    std::swap(a[p], a[r]);
    const mpq_class iv = 1 / a[r][c];
    for (auto& x : a[r]) x *= iv;
    for (int i = 0; i < n; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (int k = 0; k <= d; ++k) a[i][k] -= f * a[r][k];
    }
    piv.push_back(c);
    ++r;
  }
  for (int i = r; i < n; ++i)
    if (a[i][d] != 0) throw DataError("solve_in_span: vector outside the span");
  std::vector<mpq_class> x(d);
  for (int i = 0; i < d; ++i) x[i] = a[i][d];
  return x;
}

long to_long(const mpq_class& x) {
  if (x.get_den() != 1 || !x.get_num().fits_slong_p()) throw DataError("non-integral character value " + x.get_str());
  return x.get_num().get_si();
}

}  // namespace

std::vector<std::vector<long>> burnside_table(const std::vector<std::vector<int>>& mult,
                                              const std::vector<int>& class_of, int class_count) {
  const int n = static_cast<int>(mult.size());
  const int r = class_count;
  std::vector<std::vector<int>> members(r);
  for (int x = 0; x < n; ++x) members[class_of[x]].push_back(x);
  int identity = -1;
  for (int x = 0; x < n && identity < 0; ++x) {
    bool id = true;
    for (int y = 0; y < n && id; ++y) id = mult[x][y] == y;
    if (id) identity = x;
  }
  std::vector<int> inverse(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (mult[x][y] == identity) inverse[x] = y;

  // a[j][i][k] = #{x in C_j : x^-1 z in C_i} for a fixed z in C_k.
  std::vector<QMat> A(r, QMat(r, std::vector<mpq_class>(r, 0)));
  for (int k = 0; k < r; ++k) {
    const int z = members[k][0];
    for (int j = 0; j < r; ++j)
      for (int x : members[j]) A[j][class_of[mult[inverse[x]][z]]][k] += 1;
  }

  // Refine eigenspaces of the A_j acting on column vectors.
  std::vector<QMat> spaces;  // each as a list of basis vectors
  {
    QMat id(r, std::vector<mpq_class>(r, 0));
    for (int i = 0; i < r; ++i) id[i][i] = 1;
    spaces.push_back(id);
  }
  for (int j = 0; j < r; ++j) {
    std::vector<QMat> next;
    const long bound = static_cast<long>(members[j].size());
    for (const auto& S : spaces) {
      const int d = static_cast<int>(S.size());
      if (d == 1) {
        next.push_back(S);
        continue;
      }
      // B has the basis vectors as columns; A_j B = B R.
      QMat B(r, std::vector<mpq_class>(d));
      for (int c = 0; c < d; ++c)
        for (int i = 0; i < r; ++i) B[i][c] = S[c][i];
      QMat R(d, std::vector<mpq_class>(d));
      for (int c = 0; c < d; ++c) {
        std::vector<mpq_class> y(r, 0);
        for (int i = 0; i < r; ++i)
          for (int k = 0; k < r; ++k) y[i] += A[j][i][k] * S[c][k];
        const auto x = solve_in_span(B, y);
        for (int t = 0; t < d; ++t) R[t][c] = x[t];
      }
      int found = 0;
      for (long lambda = -bound; lambda <= bound; ++lambda) {
        QMat M = R;
        for (int t = 0; t < d; ++t) M[t][t] -= lambda;
        const auto ker = null_space(M, d);
        if (ker.empty()) continue;
        QMat sub;
        for (const auto& v : ker) {
          std::vector<mpq_class> w(r, 0);
          for (int t = 0; t < d; ++t)
            for (int i = 0; i < r; ++i) w[i] += v[t] * S[t][i];
          sub.push_back(w);
        }
        found += static_cast<int>(ker.size());
        next.push_back(sub);
      }
      if (found != d) throw DataError("burnside_table: irrational central character");
    }
    spaces = std::move(next);
  }

  const int id_class = class_of[identity];
  std::vector<std::vector<long>> table;
  for (const auto& S : spaces) {
    if (S.size() != 1) throw DataError("burnside_table: eigenspaces did not split");
    std::vector<mpq_class> w = S[0];
    const mpq_class scale = w[id_class];
    for (auto& x : w) x /= scale;
    mpq_class s = 0;
    for (int i = 0; i < r; ++i)
      s += w[i] * w[class_of[inverse[members[i][0]]]] / static_cast<long>(members[i].size());
    const mpq_class deg2 = mpq_class(n) / s;
    mpz_class deg;
    if (deg2.get_den() != 1 || !mpz_perfect_square_p(deg2.get_num().get_mpz_t()))
      throw DataError("burnside_table: degree is not an integer");
    deg = sqrt(deg2.get_num());
    std::vector<long> row(r);
    for (int i = 0; i < r; ++i) row[i] = to_long(w[i] * mpq_class(deg) / static_cast<long>(members[i].size()));
    table.push_back(row);
  }
  std::sort(table.begin(), table.end(), [&](const auto& a, const auto& b) {
    if (a[id_class] != b[id_class]) return a[id_class] < b[id_class];
    return a > b;
  });
  return table;
}

Parabolic::Parabolic(std::vector<int> J) : J_(std::move(J)) {
  std::sort(J_.begin(), J_.end());
  for (std::size_t i = 0; i < J_.size(); ++i)
    if (J_[i] < 1 || J_[i] > kRank || (i > 0 && J_[i] == J_[i - 1]))
      throw InvalidInputError("parabolic: J must be a subset of {1,2,3,4}");
  const WeylGroup& W = weyl();
  local_.assign(W.order(), -1);
  std::vector<int> todo = {W.identity()};
  local_[W.identity()] = 0;
  std::vector<int> found = {W.identity()};
  while (!todo.empty()) {
    const int a = todo.back();
    todo.pop_back();
    for (int j : J_) {
      const int b = W.mul(a, W.simple(j));
      if (local_[b] >= 0) continue;
      local_[b] = 0;
      found.push_back(b);
      todo.push_back(b);
    }
  }
  std::sort(found.begin(), found.end());
  elements_ = found;
  for (int i = 0; i < order(); ++i) local_[elements_[i]] = i;

  const int n = order();
  class_of_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (class_of_[i] >= 0) continue;
    const int c = static_cast<int>(reps_.size());
    reps_.push_back(elements_[i]);
    int size = 0;
    for (int g : elements_) {
      const int x = local_[W.mul(W.mul(g, elements_[i]), W.inverse(g))];
      if (class_of_[x] < 0) {
        class_of_[x] = c;
        ++size;
      }
    }
    sizes_.push_back(size);
  }
  std::vector<std::vector<int>> mult(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) mult[x][y] = local_[W.mul(elements_[x], elements_[y])];
  table_ = burnside_table(mult, class_of_, class_count());
}

std::string Parabolic::tag() const {
  std::string s = "W_{";
  for (std::size_t i = 0; i < J_.size(); ++i) s += (i ? "," : "") + std::to_string(J_[i]);
  return s + "}";
}

const Parabolic& whole_weyl() { return parabolic({1, 2, 3, 4}); }

const Parabolic& parabolic(const std::vector<int>& J) {
  static std::mutex m;
  static std::map<std::vector<int>, std::unique_ptr<Parabolic>> cache;
  std::vector<int> key = J;
  std::sort(key.begin(), key.end());
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Parabolic>(key)).first;
  return *it->second;
}

ClassFunction character(const Parabolic& P, int index) {
  ClassFunction f{P.J(), {}};
  for (long v : P.characters().at(index)) f.values.emplace_back(v);
  return f;
}

mpq_class inner(const Parabolic& P, const ClassFunction& f, const ClassFunction& g) {
  mpq_class s = 0;
  for (int c = 0; c < P.class_count(); ++c) s += P.class_size(c) * f.values[c] * g.values[c];
  return s / P.order();
}

ClassFunction induce(const ClassFunction& f, const std::vector<int>& to) {
  const Parabolic& H = parabolic(f.J);
  const Parabolic& G = parabolic(to);
  for (int h : H.elements())
    if (!G.contains(h)) throw InvalidInputError("induce: " + H.tag() + " is not contained in " + G.tag());
  const WeylGroup& W = weyl();
  ClassFunction out{G.J(), std::vector<mpq_class>(G.class_count(), 0)};
  for (int c = 0; c < G.class_count(); ++c) {
    const int g = G.class_rep(c);
    mpq_class s = 0;
    for (int x : G.elements()) {
      const int y = W.mul(W.mul(x, g), W.inverse(x));
      const int hc = H.class_of(y);
      if (hc >= 0) s += f.values[hc];
    }
    out.values[c] = s / H.order();
  }
  return out;
}

ClassFunction restrict(const ClassFunction& f, const std::vector<int>& to) {
  const Parabolic& G = parabolic(f.J);
  const Parabolic& H = parabolic(to);
  ClassFunction out{H.J(), std::vector<mpq_class>(H.class_count(), 0)};
  for (int c = 0; c < H.class_count(); ++c) {
    const int gc = G.class_of(H.class_rep(c));
    if (gc < 0) throw InvalidInputError("restrict: " + H.tag() + " is not contained in " + G.tag());
    out.values[c] = f.values[gc];
  }
  return out;
}

std::vector<mpq_class> decompose(const ClassFunction& f) {
  const Parabolic& P = parabolic(f.J);
  std::vector<mpq_class> out;
  for (int i = 0; i < static_cast<int>(P.characters().size()); ++i) out.push_back(inner(P, f, character(P, i)));
  return out;
}

std::string rho_name(int lambda) {
  static const char* names[] = {"(4)", "(31)", "(2^2)", "(21^2)", "(1^4)"};
  return names[lambda];
}

int rho_index(const Parabolic& P, Rho lambda) {
  if (P.order() != 24 || P.class_count() != 5) throw InvalidInputError("rho_index: " + P.tag() + " is not of type A3");
  const int s = P.class_of(weyl().simple(P.J()[0]));
  const int id = P.class_of(weyl().identity());
  const auto& t = P.characters();
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    const long d = t[i][id], v = t[i][s];
    switch (lambda) {
      case Rho::P4: if (d == 1 && v == 1) return i; break;
      case Rho::P1111: if (d == 1 && v == -1) return i; break;
      case Rho::P22: if (d == 2) return i; break;
      case Rho::P31: if (d == 3 && v == 1) return i; break;
      case Rho::P211: if (d == 3 && v == -1) return i; break;
    }
  }
  throw DataError("rho_index: no match in " + P.tag());
}

const std::array<RhoVector, kPartitions>& a3_pims() {
  static const std::array<RhoVector, kPartitions> eta = {{
      {1, 1, 0, 1, 1},
      {0, 1, 1, 1, 0},
      {0, 0, 1, 1, 0},
      {0, 0, 0, 1, 1},
      {0, 0, 0, 0, 1},
  }};
  return eta;
}

EtaExpansion eta_decompose(const RhoVector& v) {
  // The eta matrix is unitriangular over the rho's in the order above, with
  // eta_i having leading term rho at position i.
  const auto& eta = a3_pims();
  EtaExpansion e;
  RhoVector rest = v;
  for (int i = 0; i < kPartitions; ++i) {
    e.coeff[i] = rest[i];
    for (int k = 0; k < kPartitions; ++k) rest[k] -= e.coeff[i] * eta[i][k];
    if (e.coeff[i] < 0) e.negative = true;
  }
  return e;
}

int triality_chi(int i) {
  switch (i) {
    case 3: return 5;
    case 5: return 4;
    case 4: return 3;
    case 10: return 12;
    case 12: return 11;
    case 11: return 10;
    default: return i;
  }
}

int triality_irr(int phi) {
  const Parabolic& W = whole_weyl();
  const WeylGroup& G = weyl();
  const auto& t = W.characters();
  std::vector<long> img(W.class_count());
  for (int c = 0; c < W.class_count(); ++c) {
    const int tau_inv = G.triality(G.triality(W.class_rep(c)));
    img[c] = t[phi][W.class_of(tau_inv)];
  }
  for (int i = 0; i < static_cast<int>(t.size()); ++i)
    if (t[i] == img) return i;
  throw DataError("triality_irr: image is not irreducible");
}

namespace {

void require(const Dictionary& dict) {
  if (!dict.calibrated) throw CalibrationError("the chi <-> Irr(W) dictionary is not calibrated");
}

int chi_of_irr(const Dictionary& dict, int phi) {
  for (int i = 1; i <= kUnipotent; ++i)
    if (dict.irr[i] == phi) return i;
  throw CalibrationError("dictionary misses Irr(W) index " + std::to_string(phi));
}

}  // namespace

VirtualUnipotent hc_induce(const RhoVector& v, const std::vector<int>& J, const Dictionary& dict) {
  require(dict);
  const Parabolic& L = parabolic(J);
  VirtualUnipotent out{};
  for (int lambda = 0; lambda < kPartitions; ++lambda) {
    if (v[lambda] == 0) continue;
    const auto coeff = decompose(induce(character(L, rho_index(L, static_cast<Rho>(lambda))), {1, 2, 3, 4}));
    for (int phi = 0; phi < static_cast<int>(coeff.size()); ++phi)
      out[chi_of_irr(dict, phi)] += v[lambda] * to_long(coeff[phi]);
  }
  return out;
}

RhoVector hc_restrict(const VirtualUnipotent& v, const std::vector<int>& J, const Dictionary& dict) {
  require(dict);
  const Parabolic& L = parabolic(J);
  const Parabolic& W = whole_weyl();
  std::array<int, kPartitions> idx{};
  for (int lambda = 0; lambda < kPartitions; ++lambda) idx[lambda] = rho_index(L, static_cast<Rho>(lambda));
  RhoVector out{};
  for (int i = 1; i <= kUnipotent; ++i) {
    if (v[i] == 0 || dict.irr[i] < 0) continue;
    const auto coeff = decompose(restrict(character(W, dict.irr[i]), J));
    for (int lambda = 0; lambda < kPartitions; ++lambda) out[lambda] += v[i] * to_long(coeff[idx[lambda]]);
  }
  return out;
}

std::string to_string(const VirtualUnipotent& v) {
  std::ostringstream s;
  bool first = true;
  for (int i = 1; i <= kUnipotent; ++i) {
    if (v[i] == 0) continue;
    if (v[i] < 0) s << (first ? "-" : " - ");
    else if (!first) s << " + ";
    if (std::abs(v[i]) != 1) s << std::abs(v[i]);
    s << "chi" << i;
    first = false;
  }
  return first ? "0" : s.str();
}

std::string to_string_rho(const RhoVector& v) {
  std::ostringstream s;
  bool first = true;
  for (int i = 0; i < kPartitions; ++i) {
    if (v[i] == 0) continue;
    if (v[i] < 0) s << (first ? "-" : " - ");
    else if (!first) s << " + ";
    if (std::abs(v[i]) != 1) s << std::abs(v[i]);
    s << "rho" << rho_name(i);
    first = false;
  }
  return first ? "0" : s.str();
}

std::string to_string_eta(const EtaExpansion& e) {
  std::ostringstream s;
  bool first = true;
  for (int i = 0; i < kPartitions; ++i) {
    if (e.coeff[i] == 0) continue;
    if (e.coeff[i] < 0) s << (first ? "-" : " - ");
    else if (!first) s << " + ";
    if (std::abs(e.coeff[i]) != 1) s << std::abs(e.coeff[i]);
    s << "eta" << i + 1;
    first = false;
  }
  return first ? "0" : s.str();
}

}  // namespace d4
