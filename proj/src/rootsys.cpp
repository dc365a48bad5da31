#include "d4/rootsys.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace d4 {

namespace {

// Positive roots as coefficient vectors over alpha_1..alpha_4.
constexpr std::array<Coeffs, kPositiveRoots> kPositive = {{
    {1, 0, 0, 0},
    {0, 1, 0, 0},
    {0, 0, 1, 0},
    {0, 0, 0, 1},
    {1, 0, 1, 0},
    {0, 1, 1, 0},
    {0, 0, 1, 1},
    {1, 1, 1, 0},
    {1, 0, 1, 1},
    {0, 1, 1, 1},
    {1, 1, 1, 1},
    {1, 1, 2, 1},
}};

// Scaling exponents of (t1, t2, t3, t4) for x_r(a) -> x_r(a * t^e) under h(t).
constexpr std::array<Coeffs, kPositiveRoots> kTorusWeights = {{
    {-2, 0, 1, 0},
    {0, -2, 1, 0},
    {1, 1, -2, 1},
    {0, 0, 1, -2},
    {-1, 1, -1, 1},
    {1, -1, -1, 1},
    {1, 1, -1, -1},
    {-1, -1, 0, 1},
    {-1, 1, 0, -1},
    {1, -1, 0, -1},
    {-1, -1, 1, -1},
    {0, 0, -1, 0},
}};

constexpr std::array<int, kPositiveRoots> kCanonical = {3, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12};

}  // namespace

RootSystemD4::RootSystemD4() {
  // Dynkin edges 1-3, 2-3, 3-4.
  for (int i = 0; i < kRank; ++i)
    for (int j = 0; j < kRank; ++j) cartan_[i][j] = (i == j) ? 2 : 0;
  for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}, std::pair{2, 3}}) {
    cartan_[i][j] = -1;
    cartan_[j][i] = -1;
  }
  for (int r = 1; r <= kPositiveRoots; ++r) {
    roots_[r].index = r;
    roots_[r].coeffs = kPositive[r - 1];
    roots_[r + kPositiveRoots].index = r + kPositiveRoots;
    for (int i = 0; i < kRank; ++i) roots_[r + kPositiveRoots].coeffs[i] = -kPositive[r - 1][i];
  }
  for (int i = 1; i <= kPositiveRoots; ++i)
    for (int j = 1; j <= kPositiveRoots; ++j) {
      Coeffs c;
      for (int t = 0; t < kRank; ++t) c[t] = roots_[i].coeffs[t] + roots_[j].coeffs[t];
      int k = find(c);
      sum_[i][j] = positive(k) ? k : 0;
    }
  // Simple-root cycle 1 -> 4 -> 2 -> 1 (0-based 0 -> 3 -> 1 -> 0).
  const std::array<int, kRank> tau = {3, 0, 2, 1};
  for (int r = 1; r <= kRoots; ++r) {
    Coeffs c{};
    for (int i = 0; i < kRank; ++i) c[tau[i]] = roots_[r].coeffs[i];
    triality_[r] = find(c);
  }
}

int RootSystemD4::find(const Coeffs& c) const {
  for (int r = 1; r <= kRoots; ++r)
    if (roots_[r].coeffs == c) return r;
  return 0;
}

int RootSystemD4::pairing(int r, int i) const {
  int s = 0;
  for (int j = 0; j < kRank; ++j) s += roots_[r].coeffs[j] * cartan_[j][i - 1];
  return s;
}

const std::array<int, kPositiveRoots>& RootSystemD4::canonical_order() { return kCanonical; }

int RootSystemD4::canonical_position(int r) {
  static const auto pos = [] {
    std::array<int, kPositiveRoots + 1> p{};
    for (int i = 0; i < kPositiveRoots; ++i) p[kCanonical[i]] = i;
    return p;
  }();
  return pos.at(r);
}

const RootSystemD4& root_system() {
  static const RootSystemD4 rs;
  return rs;
}

void check_torus_weights() {
  const auto& rs = root_system();
  for (int r = 1; r <= kPositiveRoots; ++r)
    for (int i = 1; i <= kRank; ++i)
      if (rs.torus_exponent(r, i) != kTorusWeights[r - 1][i - 1])
        throw CalibrationError("torus weight of X_" + std::to_string(r) + " disagrees with alpha_" +
                               std::to_string(r) + "(h)^-1 at t_" + std::to_string(i));
}

namespace {

RootPerm reflection_perm(const RootSystemD4& rs, int i) {
  RootPerm p{};
  for (int r = 1; r <= kRoots; ++r) {
    Coeffs c = rs.root(r).coeffs;
    c[i - 1] -= rs.pairing(r, i);
    p[r] = static_cast<std::uint8_t>(rs.find(c));
  }
  return p;
}

RootPerm compose(const RootPerm& a, const RootPerm& b) {
  RootPerm c{};
  for (int r = 1; r <= kRoots; ++r) c[r] = a[b[r]];
  return c;
}

}  // namespace

WeylGroup::WeylGroup() {
  const auto& rs = root_system();
  std::array<RootPerm, kRank + 1> gens{};
  for (int i = 1; i <= kRank; ++i) gens[i] = reflection_perm(rs, i);

  std::map<RootPerm, int> index;
  WeylElement e;
  for (int r = 1; r <= kRoots; ++r) e.perm[r] = static_cast<std::uint8_t>(r);
  elements_.push_back(e);
  index[e.perm] = 0;
  for (std::size_t head = 0; head < elements_.size(); ++head)
    for (int i = 1; i <= kRank; ++i) {
      RootPerm p = compose(elements_[head].perm, gens[i]);
      if (index.count(p)) continue;
      WeylElement w;
      w.id = static_cast<int>(elements_.size());
      w.perm = p;
      w.word = elements_[head].word;
      w.word.push_back(i);
      w.length = static_cast<int>(w.word.size());
      index[p] = w.id;
      elements_.push_back(std::move(w));
    }
  const int n = order();
  for (auto& w : elements_) {
    int inv = 0;
    for (int r = 1; r <= kPositiveRoots; ++r)
      if (!RootSystemD4::positive(w.perm[r])) ++inv;
    if (inv != w.length) throw CalibrationError("BFS word length differs from inversion count");
  }
  for (int i = 1; i <= kRank; ++i) simple_[i] = index.at(gens[i]);

  table_.assign(n, std::vector<int>(n));
  inverse_.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      table_[a][b] = index.at(compose(elements_[a].perm, elements_[b].perm));
      if (table_[a][b] == 0) inverse_[a] = b;
    }
  for (int a = 0; a < n; ++a)
    if (elements_[a].length == kPositiveRoots) w0_ = a;

  // Bruhat intervals from subword products of the stored reduced word.
  below_.assign(n, {});
  for (int w = 0; w < n; ++w) {
    std::bitset<192> s;
    s.set(0);
    for (int letter : elements_[w].word) {
      std::bitset<192> next = s;
      for (int x = 0; x < n; ++x)
        if (s[x]) next.set(table_[x][simple_[letter]]);
      s = next;
    }
    below_[w] = s;
  }

  class_of_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    if (class_of_[a] >= 0) continue;
    const int c = class_count();
    class_reps_.push_back(a);
    int size = 0;
    for (int g = 0; g < n; ++g) {
      int x = table_[table_[inverse_[g]][a]][g];
      if (class_of_[x] < 0) {
        class_of_[x] = c;
        ++size;
      }
    }
    class_sizes_.push_back(size);
  }

  triality_.assign(n, 0);
  RootPerm tau{}, tau_inv{};
  for (int r = 1; r <= kRoots; ++r) {
    tau[r] = static_cast<std::uint8_t>(rs.triality(r));
    tau_inv[rs.triality(r)] = static_cast<std::uint8_t>(r);
  }
  for (int a = 0; a < n; ++a) triality_[a] = index.at(compose(compose(tau, elements_[a].perm), tau_inv));
}

int WeylGroup::coxeter() const { return from_word({1, 2, 3, 4}); }

int WeylGroup::from_word(const std::vector<int>& word) const {
  int a = 0;
  for (int i : word) {
    if (i < 1 || i > kRank) throw InvalidInputError("simple reflection index out of range: " + std::to_string(i));
    a = table_[a][simple_[i]];
  }
  return a;
}

int WeylGroup::find(const RootPerm& perm) const {
  for (const auto& w : elements_)
    if (w.perm == perm) return w.id;
  throw InvalidInputError("permutation is not in W");
}

std::vector<std::vector<int>> WeylGroup::orbit_tuples(const std::vector<int>& v) const {
  for (int r : v)
    if (!RootSystemD4::positive(r)) throw InvalidInputError("orbit_tuples expects positive root indices");
  std::set<std::vector<int>> out;
  for (const auto& w : elements_) {
    std::vector<int> img;
    img.reserve(v.size());
    bool ok = true;
    for (int r : v) {
      int s = w.perm[r];
      if (!RootSystemD4::positive(s)) {
        ok = false;
        break;
      }
      img.push_back(s);
    }
    if (ok) out.insert(img);
  }
  return {out.begin(), out.end()};
}

std::vector<int> WeylGroup::carriers(const std::vector<int>& v, const std::vector<int>& target) const {
  std::vector<int> out;
  if (v.size() != target.size()) return out;
  for (const auto& w : elements_) {
    bool ok = true;
    for (std::size_t i = 0; i < v.size() && ok; ++i) ok = w.perm[v[i]] == target[i];
    if (ok) out.push_back(w.id);
  }
  return out;
}

std::array<std::array<int, kRank>, kRank> WeylGroup::matrix(int a) const {
  const auto& rs = root_system();
  std::array<std::array<int, kRank>, kRank> m{};
  for (int j = 0; j < kRank; ++j) {
    const Coeffs& c = rs.root(elements_[a].perm[j + 1]).coeffs;
    for (int i = 0; i < kRank; ++i) m[i][j] = c[i];
  }
  return m;
}

const WeylGroup& weyl() {
  static const WeylGroup w;
  return w;
}

}  // namespace d4
