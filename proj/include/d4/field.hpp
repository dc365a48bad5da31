#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "d4/errors.hpp"

namespace d4 {

// Raw field element: the bit vector of a residue modulo the field modulus.
using Elem = std::uint32_t;

// GF(2^f) for 2 <= f <= 16, with log/antilog tables for multiplication.
class FieldSpec {
 public:
  explicit FieldSpec(int f);
  FieldSpec(int f, Elem modulus);

  static Elem default_modulus(int f);
  static bool is_irreducible(Elem poly, int degree);

  int degree() const { return f_; }
  Elem modulus() const { return modulus_; }
  Elem q() const { return q_; }
  bool operator==(const FieldSpec& o) const { return f_ == o.f_ && modulus_ == o.modulus_; }

  static Elem add(Elem x, Elem y) { return x ^ y; }
  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    return exp_[log_[x] + log_[y]];
  }
  Elem sqr(Elem x) const { return mul(x, x); }
  Elem inv(Elem x) const;
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, std::uint64_t e) const;
  Elem sqrt(Elem x) const { return sqrt_[x]; }
  int trace(Elem x) const { return __builtin_parity(x & trace_mask_); }
  // (-1)^Tr(x)
  int phi(Elem x) const { return trace(x) ? -1 : 1; }

  // Smallest t (bit order) with a t^2 + b t + c = 0, or none when Tr(ac/b^2) = 1.
  std::optional<Elem> artin_schreier(Elem a, Elem b, Elem c) const;
  // The fixed trace-1 element, the smallest one unless set by with_mu.
  Elem fix_mu() const { return mu_; }
  // Copy of this field with another trace-1 element in the role of mu.
  std::shared_ptr<const FieldSpec> with_mu(Elem mu) const;
  // Smallest element outside {0, 1}.
  Elem first_non_binary() const { return 2; }

  // Reference multiplication by shift-and-reduce, independent of the tables.
  Elem clmul_reduce(Elem x, Elem y) const;

 private:
  void build();

  int f_;
  Elem modulus_;
  Elem q_;
  Elem trace_mask_ = 0;
  Elem mu_ = 0;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;
  std::vector<Elem> sqrt_;
  std::vector<Elem> as_root_;  // as_root_[k] = smallest s with s^2+s=k, or q if none
};

using Field = std::shared_ptr<const FieldSpec>;

Field make_field(int f);
Field make_field(int f, Elem modulus);
// q must be 2^f with 2 <= f <= 16.
Field make_field_q(std::uint64_t q);

// Checked value type tying an element to its field.
class FieldElement {
 public:
  FieldElement(Field field, Elem bits);
  static FieldElement zero(Field field) { return FieldElement(std::move(field), 0); }
  static FieldElement one(Field field) { return FieldElement(std::move(field), 1); }

  Elem bits() const { return bits_; }
  const Field& field() const { return field_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const { return *this + o; }
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement inv() const;
  FieldElement sqrt() const;
  int trace() const { return field_->trace(bits_); }
  int phi() const { return field_->phi(bits_); }
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  void check(const FieldElement& o) const;
  Field field_;
  Elem bits_;
};

std::optional<FieldElement> artin_schreier(const FieldElement& a, const FieldElement& b,
                                           const FieldElement& c);
FieldElement fix_mu(const Field& field);

}  // namespace d4
