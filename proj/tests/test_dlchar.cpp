#include "d4/dlchar.hpp"
#include "doctest.h"

using namespace d4;

TEST_CASE("R_w0 and torus orders") {
  const WeylGroup& W = weyl();
  CHECK(r_w(W.longest()) == printed_r_w0());
  const QPoly q = QPoly::q();
  CHECK(torus_order(W.identity()) == (q - QPoly(1)).pow(4));
  CHECK(torus_order(W.longest()) == (q + QPoly(1)).pow(4));
  CHECK(torus_order(W.coxeter()) == (q.pow(3) + QPoly(1)) * (q + QPoly(1)));
  // |T_w| depends only on the class and sums to q^4 |W| over the group.
  QPoly total;
  for (int c = 0; c < W.class_count(); ++c) total += QPoly(W.class_size(c)) * torus_order(W.class_rep(c));
  CHECK(total == QPoly(192) * q.pow(4));
}

TEST_CASE("Deligne-Lusztig characters are orthogonal") {
  const WeylGroup& W = weyl();
  for (int a = 0; a < W.class_count(); ++a)
    for (int b = 0; b < W.class_count(); ++b)
      CHECK(dl_inner(r_w(W.class_rep(a)), r_w(W.class_rep(b))) == (a == b ? W.centralizer_order(a) : 0));
  for (int w = 0; w < W.order(); ++w) CHECK(r_w(w) == r_w(W.class_rep(W.class_of(w))));
}

TEST_CASE("trivial and Steinberg multiplicities") {
  const WeylGroup& W = weyl();
  for (int w = 0; w < W.order(); ++w) {
    const VirtualUnipotent v = r_w(w);
    CHECK(v[1] == 1);
    CHECK(v[14] == (W.length(w) % 2 ? -1 : 1));
  }
}

TEST_CASE("unipotent degrees") {
  const QPoly q = QPoly::q(), one(1);
  const QPoly q2 = q.pow(2);
  CHECK(unipotent_degree(1) == one);
  CHECK(unipotent_degree(2) == q * (q2 + one).pow(2));
  for (int i : {3, 4, 5}) CHECK(unipotent_degree(i) == q2 * (q.pow(4) + q2 + one));
  for (int i : {10, 11, 12}) CHECK(unipotent_degree(i) == q.pow(6) * (q.pow(4) + q2 + one));
  CHECK(unipotent_degree(13) == q.pow(7) * (q2 + one).pow(2));
  CHECK(unipotent_degree(14) == q.pow(12));
  QPoly fam;
  for (int i = 6; i <= 9; ++i) fam += unipotent_degree(i);
  CHECK(fam == QPoly(2) * q.pow(3) * (q2 + one).pow(3));
  CHECK(unipotent_degree(7) - unipotent_degree(6) == q.pow(4) * (q2 + one).pow(2));
  CHECK_THROWS_AS(unipotent_degree(15), InvalidInputError);
}

TEST_CASE("the degree of R_w is (-1)^l(w) |G|_p' / |T_w|") {
  const WeylGroup& W = weyl();
  const QPoly order_pprime = QPoly::parse("(q^2-1)(q^4-1)^2(q^6-1)");
  for (int c = 0; c < W.class_count(); ++c) {
    const int w = W.class_rep(c);
    QPoly deg;
    for (int i = 1; i <= kUnipotent; ++i) deg += QPoly(r_w(w)[i]) * unipotent_degree(i);
    CHECK(deg * torus_order(w) == QPoly(W.length(w) % 2 ? -1 : 1) * order_pprime);
  }
}

TEST_CASE("general position") {
  const WeylGroup& W = weyl();
  CHECK(general_position_exists(W.longest(), 11, 32));
  CHECK(general_position_exists(W.longest(), 43, 128));
  CHECK_THROWS_AS(general_position_exists(W.identity(), 11, 32), NotImplementedError);
  CHECK_THROWS_AS(general_position_exists(W.longest(), 9, 32), InvalidInputError);
}

TEST_CASE("parsing Weyl elements") {
  const WeylGroup& W = weyl();
  CHECK(parse_weyl_element("w0") == W.longest());
  CHECK(parse_weyl_element("coxeter") == W.coxeter());
  CHECK(parse_weyl_element("word:1,2,3,1,4,3") == W.from_word({1, 2, 3, 1, 4, 3}));
  CHECK_THROWS_AS(parse_weyl_element("word:1,9"), InvalidInputError);
}

TEST_CASE("calibration") {
  const Calibration& cal = calibration();
  CHECK(cal.solutions == 1);
  CHECK(cal.dict.calibrated);
  CHECK(FamilyFourierData::standard().orthogonal());
  FamilyFourierData bad = FamilyFourierData::standard();
  bad.matrix[0][0] = 2;
  CHECK_THROWS_AS(calibrate(bad), CalibrationError);
}
