#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <vector>

#include "d4/errors.hpp"

namespace d4 {

constexpr int kPositiveRoots = 12;
constexpr int kRoots = 24;
constexpr int kRank = 4;

using Coeffs = std::array<int, kRank>;

struct Root {
  int index = 0;  // 1..12 positive, 13..24 the negatives in the same order
  Coeffs coeffs{};
  int height() const { return coeffs[0] + coeffs[1] + coeffs[2] + coeffs[3]; }
};

class RootSystemD4 {
 public:
  RootSystemD4();

  const Root& root(int r) const { return roots_.at(r); }
  static bool positive(int r) { return r >= 1 && r <= kPositiveRoots; }
  static int negate(int r) { return r > kPositiveRoots ? r - kPositiveRoots : r + kPositiveRoots; }
  // Index of the root with these coefficients, or 0.
  int find(const Coeffs& c) const;
  // k with alpha_i + alpha_j = alpha_k for positive i, j; 0 when the sum is not a root.
  int sum(int i, int j) const { return sum_[i][j]; }
  // <alpha_r, alpha_i^vee> for a simple root i.
  int pairing(int r, int i) const;
  // Exponent of t_i in the scaling factor of X_r under conjugation by h(t).
  int torus_exponent(int r, int i) const { return -pairing(r, i); }
  // Canonical order of the normal form: 3, 1, 2, 4, 5, ..., 12.
  static const std::array<int, kPositiveRoots>& canonical_order();
  // Position of root r (1..12) in the canonical order.
  static int canonical_position(int r);
  // Image of root r under the diagram automorphism 1 -> 4 -> 2 -> 1.
  int triality(int r) const { return triality_[r]; }
  const std::array<std::array<int, kRank>, kRank>& cartan() const { return cartan_; }

 private:
  std::array<Root, kRoots + 1> roots_{};
  std::array<std::array<int, kPositiveRoots + 1>, kPositiveRoots + 1> sum_{};
  std::array<int, kRoots + 1> triality_{};
  std::array<std::array<int, kRank>, kRank> cartan_{};
};

const RootSystemD4& root_system();

// Check that the torus weights of every root subgroup match the table of
// scaling factors used for conjugation by h(t). Throws on mismatch.
void check_torus_weights();

using RootPerm = std::array<std::uint8_t, kRoots + 1>;

struct WeylElement {
  int id = 0;
  RootPerm perm{};
  std::vector<int> word;  // reduced word, product s_{w[0]} s_{w[1]} ...
  int length = 0;
  int apply(int r) const { return perm[r]; }
};

class WeylGroup {
 public:
  WeylGroup();

  int order() const { return static_cast<int>(elements_.size()); }
  const WeylElement& element(int id) const { return elements_.at(id); }
  const std::vector<WeylElement>& elements() const { return elements_; }
  int identity() const { return 0; }
  int simple(int i) const { return simple_.at(i); }
  int longest() const { return w0_; }
  int coxeter() const;
  // (a*b)(r) = a(b(r)).
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  int from_word(const std::vector<int>& word) const;
  int find(const RootPerm& perm) const;
  int length(int a) const { return elements_[a].length; }
  bool bruhat_leq(int u, int w) const { return below_[w][u]; }

  // Conjugacy classes, ordered by first appearance in the element list.
  int class_count() const { return static_cast<int>(class_reps_.size()); }
  int class_of(int a) const { return class_of_[a]; }
  int class_rep(int c) const { return class_reps_[c]; }
  int class_size(int c) const { return class_sizes_[c]; }
  int centralizer_order(int c) const { return order() / class_sizes_[c]; }

  // Image of a Weyl element under the diagram automorphism.
  int triality(int a) const { return triality_[a]; }

  // All W-images of v with only positive entries, deduplicated, sorted.
  std::vector<std::vector<int>> orbit_tuples(const std::vector<int>& v) const;
  // Elements w with w(v[i]) = target[i] for all i, in id order.
  std::vector<int> carriers(const std::vector<int>& v, const std::vector<int>& target) const;

  // 4x4 matrix of w on the root lattice (columns are images of simple roots).
  std::array<std::array<int, kRank>, kRank> matrix(int a) const;

 private:
  std::vector<WeylElement> elements_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::array<int, kRank + 1> simple_{};
  int w0_ = 0;
  std::vector<std::bitset<192>> below_;
  std::vector<int> class_of_, class_reps_, class_sizes_;
  std::vector<int> triality_;
};

const WeylGroup& weyl();

}  // namespace d4
