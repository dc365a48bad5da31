#include "d4/field.hpp"

#include <array>
#include <string>

namespace d4 {

namespace {

// Lexicographically least irreducible polynomial of each degree.
constexpr std::array<Elem, 17> kDefaultModulus = {
    0,      0,      0x7,    0xb,    0x13,   0x25,   0x43,   0x83,   0x11b,
    0x203,  0x409,  0x805,  0x1009, 0x201b, 0x4021, 0x8003, 0x1002b};

int poly_degree(Elem p) { return 31 - __builtin_clz(p); }

Elem poly_mod(Elem a, Elem b) {
  const int db = poly_degree(b);
  while (a != 0 && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
  return a;
}

}  // namespace

Elem FieldSpec::default_modulus(int f) {
  if (f < 2 || f > 16) throw InvalidInputError("field degree must lie in 2..16, got " + std::to_string(f));
  return kDefaultModulus[f];
}

bool FieldSpec::is_irreducible(Elem poly, int degree) {
  if (poly == 0 || poly_degree(poly) != degree) return false;
  for (int d = 1; d <= degree / 2; ++d)
    for (Elem p = Elem(1) << d; p < (Elem(1) << (d + 1)); ++p)
      if (poly_mod(poly, p) == 0) return false;
  return true;
}

FieldSpec::FieldSpec(int f) : FieldSpec(f, default_modulus(f)) {}

FieldSpec::FieldSpec(int f, Elem modulus) : f_(f), modulus_(modulus), q_(Elem(1) << f) {
  if (f < 2 || f > 16) throw InvalidInputError("field degree must lie in 2..16, got " + std::to_string(f));
  if (!is_irreducible(modulus, f)) throw InvalidInputError("modulus is not irreducible of degree " + std::to_string(f));
  build();
}

Elem FieldSpec::clmul_reduce(Elem x, Elem y) const {
  std::uint64_t acc = 0;
  for (int i = 0; i < f_; ++i)
    if ((y >> i) & 1) acc ^= std::uint64_t(x) << i;
  for (int i = 2 * f_ - 2; i >= f_; --i)
    if ((acc >> i) & 1) acc ^= std::uint64_t(modulus_) << (i - f_);
  return Elem(acc);
}

void FieldSpec::build() {
  // Find a generator of the multiplicative group.
  const Elem order = q_ - 1;
  std::vector<Elem> prime_factors;
  {
    Elem n = order;
    for (Elem p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        prime_factors.push_back(p);
        while (n % p == 0) n /= p;
      }
    if (n > 1) prime_factors.push_back(n);
  }
  auto slow_pow = [&](Elem x, std::uint64_t e) {
    Elem r = 1;
    while (e) {
      if (e & 1) r = clmul_reduce(r, x);
      x = clmul_reduce(x, x);
      e >>= 1;
    }
    return r;
  };
  Elem gen = 0;
  for (Elem g = 2; g < q_; ++g) {
    bool ok = true;
    for (Elem p : prime_factors)
      if (slow_pow(g, order / p) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      gen = g;
      break;
    }
  }
  log_.assign(q_, 0);
  exp_.assign(2 * std::size_t(order), 0);
  Elem x = 1;
  for (Elem i = 0; i < order; ++i) {
    exp_[i] = x;
    exp_[i + order] = x;
    log_[x] = i;
    x = clmul_reduce(x, gen);
  }

  // Tr is linear; record which basis vectors have trace 1.
  for (int i = 0; i < f_; ++i) {
    Elem b = Elem(1) << i, s = b, t = 0;
    for (int j = 0; j < f_; ++j) {
      t ^= s;
      s = clmul_reduce(s, s);
    }
    if (t == 1) trace_mask_ |= b;
  }

  sqrt_.assign(q_, 0);
  for (Elem y = 0; y < q_; ++y) sqrt_[mul(y, y)] = y;

  as_root_.assign(q_, q_);
  for (Elem s = 0; s < q_; ++s) {
    Elem k = mul(s, s) ^ s;
    if (as_root_[k] == q_) as_root_[k] = s;
  }

  for (Elem y = 1; y < q_; ++y)
    if (trace(y) == 1) {
      mu_ = y;
      break;
    }
}

Elem FieldSpec::inv(Elem x) const {
  if (x == 0) throw DivisionByZeroError("inverse of zero in GF(2^" + std::to_string(f_) + ")");
  const Elem order = q_ - 1;
  return exp_[(order - log_[x]) % order];
}

Elem FieldSpec::pow(Elem x, std::uint64_t e) const {
  if (e == 0) return 1;
  if (x == 0) return 0;
  const std::uint64_t order = q_ - 1;
  return exp_[(std::uint64_t(log_[x]) * (e % order)) % order];
}

std::optional<Elem> FieldSpec::artin_schreier(Elem a, Elem b, Elem c) const {
  if (a == 0 || b == 0) throw DegenerateEquationError("artin_schreier needs a != 0 and b != 0");
  // t = (b/a) s turns the equation into s^2 + s = ac/b^2.
  const Elem k = div(mul(a, c), sqr(b));
  const Elem s = as_root_[k];
  if (s == q_) return std::nullopt;
  const Elem scale = div(b, a);
  const Elem t0 = mul(scale, s);
  const Elem t1 = mul(scale, s ^ 1);
  return t0 < t1 ? t0 : t1;
}

Field FieldSpec::with_mu(Elem mu) const {
  if (mu >= q() || trace(mu) != 1) throw InvalidInputError("mu must be a field element of trace 1");
  auto copy = std::make_shared<FieldSpec>(*this);
  copy->mu_ = mu;
  return copy;
}

Field make_field(int f) { return std::make_shared<const FieldSpec>(f); }
Field make_field(int f, Elem modulus) { return std::make_shared<const FieldSpec>(f, modulus); }

Field make_field_q(std::uint64_t q) {
  if (q < 4 || (q & (q - 1)) != 0 || q > 65536)
    throw InvalidInputError("q must be a power of two between 4 and 65536, got " + std::to_string(q));
  return make_field(__builtin_ctzll(q));
}

FieldElement::FieldElement(Field field, Elem bits) : field_(std::move(field)), bits_(bits) {
  if (!field_) throw InvalidInputError("field element without a field");
  if (bits_ >= field_->q()) throw InvalidInputError("bit vector longer than the field degree");
}

void FieldElement::check(const FieldElement& o) const {
  if (field_ != o.field_ && !(*field_ == *o.field_))
    throw SpecMismatchError("operands live in different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check(o);
  return FieldElement(field_, bits_ ^ o.bits_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check(o);
  return FieldElement(field_, field_->mul(bits_, o.bits_));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check(o);
  return FieldElement(field_, field_->div(bits_, o.bits_));
}

FieldElement FieldElement::inv() const { return FieldElement(field_, field_->inv(bits_)); }
FieldElement FieldElement::sqrt() const { return FieldElement(field_, field_->sqrt(bits_)); }

bool FieldElement::operator==(const FieldElement& o) const {
  check(o);
  return bits_ == o.bits_;
}

std::optional<FieldElement> artin_schreier(const FieldElement& a, const FieldElement& b,
                                           const FieldElement& c) {
  if (!(*a.field() == *b.field()) || !(*a.field() == *c.field()))
    throw SpecMismatchError("artin_schreier operands live in different fields");
  auto t = a.field()->artin_schreier(a.bits(), b.bits(), c.bits());
  if (!t) return std::nullopt;
  return FieldElement(a.field(), *t);
}

FieldElement fix_mu(const Field& field) { return FieldElement(field, field->fix_mu()); }

}  // namespace d4
