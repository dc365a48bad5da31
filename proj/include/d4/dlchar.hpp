#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "d4/qpoly.hpp"
#include "d4/weylhc.hpp"

namespace d4 {

// chi_8 forms an l-block of its own for l | q+1; the printed inductions give
// the principal-block part only.
constexpr int kOwnBlock = 8;

// Fourier matrix of the four-element family; positions are matched to
// chi_6..chi_9 by calibration.
struct FamilyFourierData {
  std::array<int, 4> members{6, 7, 8, 9};
  std::array<std::array<mpq_class, 4>, 4> matrix;
  static FamilyFourierData standard();
  bool orthogonal() const;
};

struct Calibration {
  Dictionary dict;
  FamilyFourierData fourier;
  // Fourier index of each family member chi_6..chi_9.
  std::array<int, 4> position{};
  // Inequivalent matchings that passed every gate (1 when calibrated).
  int solutions = 0;
};

// The printed R_{w0} and the three printed Harish-Chandra inductions used as
// calibration gates.
const VirtualUnipotent& printed_r_w0();
struct PrintedInduction {
  int eta;             // 1..5
  std::vector<int> J;  // Levi
  VirtualUnipotent value;
};
const std::vector<PrintedInduction>& printed_inductions();
// Printed Harish-Chandra restrictions. The first one is a calibration gate
// (it fixes the rotation of chi_10, chi_11, chi_12); the others are checks.
struct PrintedRestriction {
  std::string name;
  VirtualUnipotent v;
  std::vector<int> J;
  RhoVector value;
};
const std::vector<PrintedRestriction>& printed_restrictions();

// Matches chi <-> Irr(W) and the Fourier positions; throws CalibrationError
// listing the candidates when no unique matching exists.
Calibration calibrate(const FamilyFourierData& fourier);
// Calibration with the standard Fourier matrix, computed once.
const Calibration& calibration();

VirtualUnipotent r_w(int w, const Calibration& cal);
VirtualUnipotent r_w(int w);
long dl_inner(const VirtualUnipotent& a, const VirtualUnipotent& b);

// |det(q w - 1)| on the character lattice.
QPoly torus_order(int w);

// Existence of an l-character of T^{wF} in general position. Implemented for
// w = w0, where the twisted W-action is the ordinary one on (Z/(q+1))^4.
bool general_position_exists(int w, std::int64_t ell, std::int64_t q);

// Parses "w0", "coxeter", "id" or "word:1,2,3".
int parse_weyl_element(const std::string& text);

// Degree of a unipotent character as a polynomial in q, from the R_w.
QPoly unipotent_degree(int i);

}  // namespace d4
