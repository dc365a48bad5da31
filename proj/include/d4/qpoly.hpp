#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace d4 {

// Laurent polynomial in q with rational coefficients.
class QPoly {
 public:
  QPoly() = default;
  QPoly(long c);  // NOLINT: implicit constant
  QPoly(const mpq_class& c);  // NOLINT
  static QPoly q(int exponent = 1);
  static QPoly monomial(const mpq_class& c, int exponent);
  // Coefficients listed from degree 0 upward.
  static QPoly from_coeffs(const std::vector<mpq_class>& c);
  // Parses expressions such as "2q^8(q-1)^2", "q^3/2", "-q^2(q-2)/4".
  static QPoly parse(const std::string& text);

  const std::map<int, mpq_class>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree() const;      // highest exponent; throws on zero
  int low_degree() const;  // lowest exponent; throws on zero
  mpq_class coeff(int e) const;
  mpq_class eval(const mpq_class& x) const;

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator-() const;
  QPoly operator*(const QPoly& o) const;
  QPoly& operator+=(const QPoly& o) { return *this = *this + o; }
  QPoly& operator-=(const QPoly& o) { return *this = *this - o; }
  QPoly& operator*=(const QPoly& o) { return *this = *this * o; }
  QPoly pow(int n) const;
  // Exact division; throws DataError when o does not divide this.
  QPoly divide_exact(const QPoly& o) const;
  bool operator==(const QPoly& o) const { return t_ == o.t_; }
  bool operator!=(const QPoly& o) const { return !(*this == o); }

  std::string to_string() const;

  // Lagrange interpolation through (x_i, y_i) as an ordinary polynomial.
  static QPoly interpolate(const std::vector<mpq_class>& xs, const std::vector<mpq_class>& ys);

 private:
  void normalize();
  std::map<int, mpq_class> t_;
};

std::string to_string(const mpq_class& x);

}  // namespace d4
