#pragma once

#include <gmpxx.h>

#include <array>
#include <string>
#include <vector>

#include "d4/rootsys.hpp"

namespace d4 {

constexpr int kUnipotent = 14;

// Coefficients over chi_1..chi_14 (index 0 unused).
using VirtualUnipotent = std::array<long, kUnipotent + 1>;

// The standard parabolic subgroup W_J of W(D4), J a subset of {1, 2, 3, 4}.
class Parabolic {
 public:
  explicit Parabolic(std::vector<int> J);

  const std::vector<int>& J() const { return J_; }
  std::string tag() const;
  int order() const { return static_cast<int>(elements_.size()); }
  // W ids, increasing.
  const std::vector<int>& elements() const { return elements_; }
  bool contains(int w) const { return local_[w] >= 0; }

  // Classes of W_J, ordered by first member in id order.
  int class_count() const { return static_cast<int>(reps_.size()); }
  // Class of the W element w, -1 when w is outside W_J.
  int class_of(int w) const { return local_[w] < 0 ? -1 : class_of_[local_[w]]; }
  int class_rep(int c) const { return reps_[c]; }
  int class_size(int c) const { return sizes_[c]; }

  // Irreducible characters, rows ordered by degree then values.
  const std::vector<std::vector<long>>& characters() const { return table_; }

 private:
  std::vector<int> J_;
  std::vector<int> elements_;
  std::vector<int> local_;
  std::vector<int> class_of_, reps_, sizes_;
  std::vector<std::vector<long>> table_;
};

// Character table of a group from its class multiplication constants, by
// simultaneous integer eigenvectors of the class-sum matrices. mult[i][j] is
// the class of x*y for x the i-th and y the j-th element; classes are given by
// class_of. Throws DataError when an eigenvalue is not rational.
std::vector<std::vector<long>> burnside_table(const std::vector<std::vector<int>>& mult,
                                              const std::vector<int>& class_of, int class_count);

const Parabolic& whole_weyl();
const Parabolic& parabolic(const std::vector<int>& J);

struct ClassFunction {
  std::vector<int> J;
  std::vector<mpq_class> values;  // per class of W_J
};

ClassFunction character(const Parabolic& P, int index);
mpq_class inner(const Parabolic& P, const ClassFunction& f, const ClassFunction& g);
ClassFunction induce(const ClassFunction& f, const std::vector<int>& to);
ClassFunction restrict(const ClassFunction& f, const std::vector<int>& to);
// Coefficients over the irreducibles of the group of f.
std::vector<mpq_class> decompose(const ClassFunction& f);

// Unipotent characters of a Levi subgroup of type A3: partitions of 4.
enum class Rho { P4, P31, P22, P211, P1111 };
constexpr int kPartitions = 5;
using RhoVector = std::array<long, kPartitions>;
std::string rho_name(int lambda);
// Index in the character table of W_J of rho_lambda; J must be of type A3.
int rho_index(const Parabolic& P, Rho lambda);

// eta_1..eta_5 over (4), (31), (2^2), (21^2), (1^4).
const std::array<RhoVector, kPartitions>& a3_pims();
struct EtaExpansion {
  std::array<long, kPartitions> coeff{};
  bool negative = false;
};
EtaExpansion eta_decompose(const RhoVector& v);

// chi_i <-> Irr(W); irr[i] = -1 for the cuspidal chi_9.
struct Dictionary {
  bool calibrated = false;
  std::array<int, kUnipotent + 1> irr{};
};

// The chi_i permutation induced by triality, read off the diagonal of the
// projective columns: chi_3 -> chi_5 -> chi_4, chi_10 -> chi_12 -> chi_11.
int triality_chi(int i);
// Irr(W) index of phi o tau^-1.
int triality_irr(int phi);

VirtualUnipotent hc_induce(const RhoVector& v, const std::vector<int>& J, const Dictionary& dict);
RhoVector hc_restrict(const VirtualUnipotent& v, const std::vector<int>& J, const Dictionary& dict);

std::string to_string(const VirtualUnipotent& v);
std::string to_string_rho(const RhoVector& v);
std::string to_string_eta(const EtaExpansion& e);

}  // namespace d4
