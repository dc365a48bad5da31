#include "d4/qpoly.hpp"

#include <cctype>
#include <sstream>

#include "d4/errors.hpp"

namespace d4 {

std::string to_string(const mpq_class& x) { return x.get_str(); }

QPoly::QPoly(long c) {
  if (c != 0) t_[0] = c;
}

QPoly::QPoly(const mpq_class& c) {
  if (c != 0) t_[0] = c;
}

QPoly QPoly::q(int exponent) { return monomial(1, exponent); }

QPoly QPoly::monomial(const mpq_class& c, int exponent) {
  QPoly p;
  if (c != 0) p.t_[exponent] = c;
  return p;
}

QPoly QPoly::from_coeffs(const std::vector<mpq_class>& c) {
  QPoly p;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) p.t_[static_cast<int>(i)] = c[i];
  return p;
}

void QPoly::normalize() {
  for (auto it = t_.begin(); it != t_.end();) it = it->second == 0 ? t_.erase(it) : std::next(it);
}

int QPoly::degree() const {
  if (t_.empty()) throw DataError("degree of the zero polynomial");
  return t_.rbegin()->first;
}

int QPoly::low_degree() const {
  if (t_.empty()) throw DataError("degree of the zero polynomial");
  return t_.begin()->first;
}

mpq_class QPoly::coeff(int e) const {
  auto it = t_.find(e);
  return it == t_.end() ? mpq_class(0) : it->second;
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class s = 0;
  for (const auto& [e, c] : t_) {
    if (e < 0 && x == 0) throw DivisionByZeroError("Laurent polynomial evaluated at 0");
    mpq_class p = 1;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    p = e < 0 ? mpq_class(den, num) : mpq_class(num, den);
    p.canonicalize();
    s += c * p;
  }
  return s;
}

QPoly QPoly::operator+(const QPoly& o) const {
  QPoly r = *this;
  for (const auto& [e, c] : o.t_) r.t_[e] += c;
  r.normalize();
  return r;
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& [e, c] : r.t_) c = -c;
  return r;
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::operator*(const QPoly& o) const {
  QPoly r;
  for (const auto& [e1, c1] : t_)
    for (const auto& [e2, c2] : o.t_) r.t_[e1 + e2] += c1 * c2;
  r.normalize();
  return r;
}

QPoly QPoly::pow(int n) const {
  if (n < 0) {
    if (t_.size() != 1) throw DataError("negative power of a non-monomial");
    return monomial(1 / t_.begin()->second, -t_.begin()->first).pow(-n);
  }
  QPoly r = 1;
  for (int i = 0; i < n; ++i) r *= *this;
  return r;
}

QPoly QPoly::divide_exact(const QPoly& o) const {
  if (o.is_zero()) throw DivisionByZeroError("polynomial division by zero");
  if (is_zero()) return {};
  QPoly rem = *this, quo;
  const int od = o.degree();
  const mpq_class lead = o.t_.rbegin()->second;
  const int stop = rem.low_degree() - o.low_degree();
  while (!rem.is_zero() && rem.degree() - od >= stop) {
    const int e = rem.degree() - od;
    const QPoly m = monomial(rem.t_.rbegin()->second / lead, e);
    quo += m;
    rem -= m * o;
  }
  if (!rem.is_zero()) throw DataError("(" + to_string() + ") is not divisible by (" + o.to_string() + ")");
  return quo;
}

std::string QPoly::to_string() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    mpq_class c = it->second;
    const int e = it->first;
    if (c < 0) {
      os << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    const bool unit = c == 1;
    if (!unit || e == 0) os << c.get_str();
    if (e != 0) {
      if (!unit) os << "*";
      os << "q";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

QPoly QPoly::interpolate(const std::vector<mpq_class>& xs, const std::vector<mpq_class>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw InvalidInputError("interpolation needs matching nonempty samples");
  QPoly r;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    QPoly basis = 1;
    mpq_class den = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis *= QPoly::q() - QPoly(xs[j]);
      den *= xs[i] - xs[j];
    }
    if (den == 0) throw InvalidInputError("repeated interpolation node");
    r += basis * QPoly(ys[i] / den);
  }
  return r;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  QPoly parse() {
    QPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  [[noreturn]] void fail(const std::string& why) {
    throw InvalidInputError("cannot parse polynomial '" + s_ + "': " + why);
  }

  QPoly expr() {
    QPoly r;
    bool neg = false;
    if (peek() == '-') {
      ++pos_;
      neg = true;
    } else if (peek() == '+') {
      ++pos_;
    }
    QPoly t = term();
    r = neg ? -t : t;
    while (peek() == '+' || peek() == '-') {
      const char op = s_[pos_++];
      t = term();
      r = op == '+' ? r + t : r - t;
    }
    return r;
  }

  QPoly term() {
    QPoly r = factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        r *= factor();
      } else if (c == '/') {
        ++pos_;
        r = r.divide_exact(factor());
      } else if (c == '(' || c == 'q' || std::isdigit(static_cast<unsigned char>(c))) {
        r *= factor();
      } else {
        return r;
      }
    }
  }

  QPoly factor() {
    QPoly b = base();
    if (peek() == '^') {
      ++pos_;
      bool neg = false;
      if (peek() == '-') {
        ++pos_;
        neg = true;
      }
      const long n = integer();
      b = b.pow(static_cast<int>(neg ? -n : n));
    }
    return b;
  }

  QPoly base() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      QPoly e = expr();
      if (peek() != ')') fail("missing )");
      ++pos_;
      return e;
    }
    if (c == 'q') {
      ++pos_;
      return QPoly::q();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return QPoly(integer());
    fail(std::string("unexpected '") + c + "'");
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stol(s_.substr(start, pos_ - start));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

QPoly QPoly::parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace d4
