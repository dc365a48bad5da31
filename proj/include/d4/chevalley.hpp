#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "d4/field.hpp"
#include "d4/rootsys.hpp"

namespace d4 {

// Coordinates indexed by root number; slot 0 is unused.
using Coords = std::array<Elem, kPositiveRoots + 1>;

// Raw normal-form arithmetic used by the hot loops.
namespace raw {
// a <- a * x_r(t)
void rmul(const FieldSpec& F, Coords& a, int r, Elem t);
Coords mul(const FieldSpec& F, const Coords& x, const Coords& y);
Coords inverse(const FieldSpec& F, const Coords& x);
// x^{x_r(t)} = x_r(t) x x_r(t)
Coords conj_root(const FieldSpec& F, const Coords& x, int r, Elem t);
// Product of the word, collected.
Coords collect(const FieldSpec& F, const std::vector<std::pair<int, Elem>>& word);
}  // namespace raw

class UnipotentElement {
 public:
  UnipotentElement() = default;  // unbound; assign before use
  explicit UnipotentElement(Field field);
  UnipotentElement(Field field, const Coords& coords);

  static UnipotentElement identity(Field field) { return UnipotentElement(std::move(field)); }
  static UnipotentElement root_element(Field field, int r, Elem t);
  // Product of root elements in the given order.
  static UnipotentElement from_word(Field field, const std::vector<std::pair<int, Elem>>& word);
  // Coordinates listed in canonical order a3, a1, a2, a4, a5, ..., a12.
  static UnipotentElement from_canonical(Field field, const std::array<Elem, kPositiveRoots>& c);

  const Field& field() const { return field_; }
  Elem coord(int r) const { return c_.at(r); }
  const Coords& coords() const { return c_; }
  std::array<Elem, kPositiveRoots> canonical() const;
  // Roots with nonzero coordinate, in canonical order.
  std::vector<int> support() const;
  // The normal form as a word in canonical order (nonzero factors only).
  std::vector<std::pair<int, Elem>> word() const;
  bool is_identity() const;

  UnipotentElement operator*(const UnipotentElement& o) const;
  UnipotentElement inverse() const;
  bool operator==(const UnipotentElement& o) const { return c_ == o.c_; }
  bool operator!=(const UnipotentElement& o) const { return !(*this == o); }

  std::string to_string() const;
  std::string to_hex() const;
  static UnipotentElement from_hex(Field field, const std::string& s);

 private:
  void check(const UnipotentElement& o) const;
  Field field_;
  Coords c_{};
};

UnipotentElement mul(const UnipotentElement& x, const UnipotentElement& y);
UnipotentElement inverse(const UnipotentElement& x);
UnipotentElement commutator(const UnipotentElement& x, const UnipotentElement& y);

struct TorusElement {
  std::array<Elem, kRank> t{1, 1, 1, 1};
  static TorusElement make(const FieldSpec& F, std::array<Elem, kRank> t);
};

// Scale factor of X_r under conjugation by h(t).
Elem torus_weight(const FieldSpec& F, int r, const TorusElement& h);
UnipotentElement conj_torus(const UnipotentElement& x, const TorusElement& h);
// Each factor x_a(t) of the normal form goes to x_{w(a)}(t); the word is then re-collected.
UnipotentElement conj_weyl(const UnipotentElement& x, int w);
// u^-1 x u
UnipotentElement conj_unip(const UnipotentElement& x, const UnipotentElement& u);

// |C_U(x)| by enumerating all of U; refuses q > 4 unless forced.
std::uint64_t centralizer_order_U(const UnipotentElement& x, bool force = false);

// Type-A normal form: an A_n subsystem given by its simple roots (as D4 root
// indices, in Dynkin order) and a product of one element from each simple root
// subgroup in arbitrary order.
struct TypeAResult {
  UnipotentElement conjugator;
  UnipotentElement result;
  std::vector<Elem> coefficients;  // a_1..a_n of the ordered product
};
TypeAResult typeA_normalize(const std::vector<int>& simple_roots,
                            const std::vector<std::pair<int, Elem>>& word, const Field& field);

}  // namespace d4
