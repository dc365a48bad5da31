#include "d4/errors.hpp"
#include "d4/qpoly.hpp"
#include "doctest.h"

using namespace d4;

TEST_CASE("polynomial parsing and arithmetic") {
  const QPoly a = QPoly::parse("2q^8(q-1)^2");
  CHECK(a.eval(4) == 2 * 65536 * 9);
  CHECK(a.degree() == 10);
  CHECK(QPoly::parse("q^3/2").eval(8) == 256);
  CHECK(QPoly::parse("-q^2(q-2)/4").eval(8) == -96);
  CHECK(QPoly::parse("q^-2").eval(4) == mpq_class(1, 16));
  CHECK((QPoly::parse("q^2-1").divide_exact(QPoly::parse("q+1"))) == QPoly::parse("q-1"));
  CHECK_THROWS_AS(QPoly::parse("q^2+1").divide_exact(QPoly::parse("q+1")), DataError);
  CHECK_THROWS_AS(QPoly::parse("q^2+"), InvalidInputError);
  CHECK(QPoly::parse("(q+1)^2 - q^2 - 2q") == QPoly(1));
  CHECK(QPoly::parse("2q^3 - q").to_string() == "2*q^3 - q");
}

TEST_CASE("interpolation recovers a cubic") {
  const QPoly p = QPoly::parse("q^3/2 - 3q + 7");
  std::vector<mpq_class> xs, ys;
  for (int x : {4, 8, 16, 32}) {
    xs.push_back(x);
    ys.push_back(p.eval(x));
  }
  CHECK(QPoly::interpolate(xs, ys) == p);
}
