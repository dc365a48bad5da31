#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "d4/chevalley.hpp"
#include "d4/qpoly.hpp"

namespace d4 {

constexpr int kClasses = 14;

struct UnipotentClass {
  int k = 0;
  UnipotentElement rep;
  QPoly cg_order;
  std::string rep_text;
};

// Representatives u_1..u_14 (index 0 is u_1) with |C_G(u_k)|.
std::vector<UnipotentClass> class_reps(const Field& field);
// |SO_8^+(q)| = q^12 (q^2-1)(q^4-1)^2(q^6-1).
QPoly group_order();

using Word = std::vector<std::pair<int, Elem>>;

struct FamilySpec {
  std::string label;    // e.g. C^7_{3,q^8,1}
  std::string key;      // command-line name, e.g. C7_3_q8_1
  int target_k = 0;
  std::string pattern;  // printed representative
  std::vector<std::string> params;
  std::vector<std::string> constraints;
  // Word of the representative for a parameter tuple in (F^x)^n; nullopt when a constraint fails.
  std::function<std::optional<Word>(const FieldSpec&, const std::vector<Elem>&)> word;
  QPoly count;          // number of members
  QPoly cu;             // |C_U| of each member
  bool cu_printed = true;  // cu read off the label rather than inferred at q = 4
  std::string recipe;   // witness recipe, see canonicalize
  std::string note;     // reconstruction remarks, empty for rows taken verbatim
};

const std::vector<FamilySpec>& catalogue();
const FamilySpec& family(const std::string& key);

std::vector<UnipotentElement> instances(const FamilySpec& fam, const Field& field);
UnipotentElement random_instance(const FamilySpec& fam, const Field& field, std::mt19937_64& rng);

// A single conjugation step.
struct Move {
  enum Kind { Weyl, Unip, Torus } kind = Unip;
  std::string step;          // recipe token that produced it
  int w = 0;                 // Weyl element id
  Word u;                    // conjugating word in U
  TorusElement h;
};

struct Witness {
  int k = 0;
  UnipotentElement start;
  UnipotentElement end;
  std::vector<Move> moves;
};

UnipotentElement apply_move(const Move& m, const UnipotentElement& x);
// Replays the moves from start; true when the result is exactly end and equals u_k.
bool replay(const Witness& w);

// Applies the recipe tokens to x (k selects the torus step); no end-point check.
Witness run_recipe(const std::string& recipe, int k, const UnipotentElement& x);

// Runs the family recipe on x and checks the end point is u_k exactly.
// Recipe tokens, separated by spaces:
//   W:r1,..,rm   Weyl move sending the support (canonical order) entrywise to r1..rm
//   S:r1,..,rm   Weyl move sending the support set onto {r1..rm}
//   K:k@s        conjugate by x_s(c), c chosen so coordinate k vanishes
//   N:r1,..,rm   kill every coordinate outside {r1..rm}, lowest height first
//   U:name       explicit conjugator (see explicit_conjugator)
//   T            torus normalization to u_k
// Throws FusionMismatchError when the chain does not end at u_k.
Witness canonicalize(const FamilySpec& fam, const UnipotentElement& x);

// Named explicit conjugators, computed from the coordinates of x:
//   k6     x5(w)x6(a2 w/a1)x7(a4 w/a1)x10(a2 a4 w/a1), w^2 = a1 a12/(a2 a4)
//   k7a    x6(a8/a1)
//   k7d    x9(a1 a12/(a2 a5)) x10(a12/a5)
//   k7e    x1(a11/a10) x2(a6 a11/(a5 a10))
//   as0    x1(a5 t)x2(a6 t)x4(a7 t)x8(a5 a6 t), adds a5 a6 a7 t^2 + a5 a10 t to x11; kills x11
//   asmu   the same map, setting a11 = a5 a10^2 mu/(a6 a7)
//   k9     x8(a12/a7)
//   k11    x3(a)x4(a4)x6(a2 a)x10(a2 a4 a), a = a6/a2
//   k12    x3(a6/a2) on the collected y (its a6/a2 is the printed a2/a6*)
//   k12b   x3(a7/a4) on the collected y
Word explicit_conjugator(const std::string& name, const UnipotentElement& x);

// Torus element normalizing a first-row representative of u_k.
TorusElement torus_witness(int k, const UnipotentElement& x);

// Orbit partition of U at q = 4 under U-conjugation.
struct UPartition {
  int classes = 0;
  std::vector<std::uint16_t> class_of;  // indexed by sum a_r 4^(r-1)
  std::vector<std::uint32_t> size;      // per class
  static std::uint32_t index(const UnipotentElement& x);
};
UPartition partition_U_q4();

struct FamilyAudit {
  std::string key;
  int target_k = 0;
  std::uint64_t count = 0;
  std::uint64_t expected_count = 0;
  std::uint64_t cu_observed = 0;     // 0 when members disagree
  std::uint64_t cu_presumed = 0;
  bool witnesses_ok = true;
  std::string first_failure;
};

struct FusionReport {
  int q = 0;
  std::vector<FamilyAudit> families;
  std::uint64_t total_instances = 0;
  std::uint64_t expected_classes = 0;    // class-count polynomial at q
  bool partition_checked = false;
  bool partition_ok = false;             // every class hit exactly once, sizes sum to q^12
  std::uint64_t classes_hit = 0;
  std::uint64_t classes_hit_twice = 0;
  std::uint64_t size_sum = 0;
  std::vector<std::string> discrepancies;
};

// Number of U-classes: 2q^5 + 8q^4 - 16q^3 + 14q^2 - 10q + 3.
QPoly class_count_poly();

// Enumerates all members at q, canonicalizes each, and with a partition
// (q = 4 only) checks that the catalogue is a transversal of the U-classes.
FusionReport fusion_table(const Field& field, const UPartition* partition);

}  // namespace d4
