#include <map>

#include "d4/fusion.hpp"

namespace d4 {

namespace {

std::string root_list(const std::vector<int>& roots) {
  std::string s;
  for (int r : roots) s += "x_" + std::to_string(r) + "(a_" + std::to_string(r) + ")";
  return s;
}

QPoly r_pow(int n) { return QPoly::parse("q-1").pow(n); }

// One free nonzero parameter per root, product in the listed order.
FamilySpec plain(std::string label, std::string key, int k, std::vector<int> roots, std::string cu,
                 std::string recipe) {
  FamilySpec f;
  f.label = std::move(label);
  f.key = std::move(key);
  f.target_k = k;
  f.pattern = root_list(roots);
  for (int r : roots) f.params.push_back("a_" + std::to_string(r));
  f.word = [roots](const FieldSpec&, const std::vector<Elem>& p) -> std::optional<Word> {
    Word w;
    for (std::size_t i = 0; i < roots.size(); ++i) w.emplace_back(roots[i], p[i]);
    return w;
  };
  f.count = r_pow(static_cast<int>(roots.size()));
  if (cu.empty()) {
    f.cu_printed = false;
  } else {
    f.cu = QPoly::parse(cu);
  }
  f.recipe = std::move(recipe);
  return f;
}

// x_3(d) x_8 x_9 x_10 x_11 split by the trace of a8 a9 a10/(d a11^2).
FamilySpec trace_split(int tr, std::string recipe) {
  FamilySpec f;
  f.label = tr == 0 ? "C^7_{3,q^8,1}" : "C^8_{3,q^8}";
  f.key = tr == 0 ? "C7_3_q8_1" : "C8_3_q8";
  f.target_k = tr == 0 ? 7 : 8;
  f.pattern = "x_3(d)x_8(a_8)x_9(a_9)x_10(a_10)x_11(a_11)";
  f.params = {"d", "a_8", "a_9", "a_10", "a_11"};
  f.constraints = {std::string("Tr(a_8 a_9 a_10/(d a_11^2)) = ") + (tr ? "1" : "0")};
  f.word = [tr](const FieldSpec& F, const std::vector<Elem>& p) -> std::optional<Word> {
    const Elem v = F.div(F.mul(F.mul(p[1], p[2]), p[3]), F.mul(p[0], F.sqr(p[4])));
    if (F.trace(v) != tr) return std::nullopt;
    return Word{{3, p[0]}, {8, p[1]}, {9, p[2]}, {10, p[3]}, {11, p[4]}};
  };
  f.count = tr == 0 ? r_pow(4) * QPoly::parse("q/2-1") : r_pow(4) * QPoly::parse("q/2");
  f.cu = QPoly::parse("q^8");
  f.recipe = std::move(recipe);
  f.note = "d ranges over F^x; the trace value splits the members between u_7 and u_8";
  return f;
}

std::vector<FamilySpec> build() {
  std::vector<FamilySpec> c;
  auto add = [&](FamilySpec f) { c.push_back(std::move(f)); };

  {
    FamilySpec f;
    f.label = "C^1";
    f.key = "C1";
    f.target_k = 1;
    f.pattern = "x_12(0)";
    f.word = [](const FieldSpec&, const std::vector<Elem>&) -> std::optional<Word> { return Word{}; };
    f.count = 1;
    f.cu = QPoly::parse("q^12");
    f.cu_printed = false;
    f.recipe = "";
    add(f);
  }
  // |C_U(x_i)| = q^(12 - number of positive roots alpha_j with alpha_i + alpha_j a root).
  for (int i = 1; i <= kPositiveRoots; ++i) {
    int e = kPositiveRoots;
    for (int j = 1; j <= kPositiveRoots; ++j)
      if (RootSystemD4::positive(root_system().sum(i, j))) --e;
    FamilySpec f = plain("C^2_{" + std::to_string(i) + "}", "C2_" + std::to_string(i), 2, {i}, "", "W:1 T");
    f.cu = QPoly::q(e);
    add(f);
  }

  add(plain("C^3_{1,2,q^8}", "C3_1_2_q8", 3, {1, 2}, "q^8", "T"));
  add(plain("C^3_{4,q^8}", "C3_4_q8", 3, {4, 12}, "q^8", "W:1,2 T"));
  add(plain("C^3_{3,q^8}", "C3_3_q8", 3, {3, 8}, "q^8", "W:1,2 T"));
  add(plain("C^3_{5,6,q^9}", "C3_5_6_q9", 3, {5, 6}, "q^9", "W:1,2 T"));
  add(plain("C^3_{7,q^9}", "C3_7_q9", 3, {7, 11}, "q^9", "W:1,2 T"));
  add(plain("C^3_{8,9,10,q^10}", "C3_8_9_10_q10", 3, {9, 10}, "q^10", "W:1,2 T"));

  add(plain("C^4_{1,4,q^8}", "C4_1_4_q8", 4, {1, 4}, "q^8", "T"));
  add(plain("C^4_{2,q^8}", "C4_2_q8", 4, {2, 12}, "q^8", "W:1,4 T"));
  add(plain("C^4_{3,q^8}", "C4_3_q8", 4, {3, 9}, "q^8", "W:1,4 T"));
  add(plain("C^4_{5,7,q^9}", "C4_5_7_q9", 4, {5, 7}, "q^9", "W:1,4 T"));
  add(plain("C^4_{6,q^9}", "C4_6_q9", 4, {6, 11}, "q^9", "W:1,4 T"));
  add(plain("C^4_{8,9,10,q^10}", "C4_8_9_10_q10", 4, {8, 10}, "q^10", "W:1,4 T"));

  add(plain("C^5_{2,4,q^8}", "C5_2_4_q8", 5, {2, 4}, "q^8", "T"));
  add(plain("C^5_{1,q^8}", "C5_1_q8", 5, {1, 12}, "q^8", "W:2,4 T"));
  add(plain("C^5_{3,q^8}", "C5_3_q8", 5, {3, 10}, "q^8", "W:2,4 T"));
  add(plain("C^5_{6,7,q^9}", "C5_6_7_q9", 5, {6, 7}, "q^9", "W:2,4 T"));
  add(plain("C^5_{5,q^9}", "C5_5_q9", 5, {5, 11}, "q^9", "W:2,4 T"));
  add(plain("C^5_{8,9,10,q^10}", "C5_8_9_10_q10", 5, {8, 9}, "q^10", "W:2,4 T"));

  add(plain("C^{6,p=2}_{1,2,4,q^7}", "C6p2_1_2_4_q7", 6, {1, 2, 4}, "q^7", "T"));
  add(plain("C^6_{1,2,q^8}", "C6_1_2_q8", 6, {1, 2, 12}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{1,4,q^8}", "C6_1_4_q8", 6, {1, 4, 12}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{2,4,q^8}", "C6_2_4_q8", 6, {2, 4, 12}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{5,6,7,q^8}", "C6_5_6_7_q8", 6, {5, 6, 7}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{5,6,q^9}", "C6_5_6_q9", 6, {5, 6, 11}, "q^9", "S:1,2,4 T"));
  add(plain("C^6_{5,7,q^9}", "C6_5_7_q9", 6, {5, 7, 11}, "q^9", "S:1,2,4 T"));
  add(plain("C^6_{6,7,q^9}", "C6_6_7_q9", 6, {6, 7, 11}, "q^9", "S:1,2,4 T"));
  add(plain("C^6_{8,9,10,q^10}", "C6_8_9_10_q10", 6, {8, 9, 10}, "q^10", "S:1,2,4 T"));
  add(plain("C^6_{3,q^8,1}", "C6_3_q8_1", 6, {3, 8, 9}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{3,q^8,2}", "C6_3_q8_2", 6, {3, 8, 10}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{3,q^8,3}", "C6_3_q8_3", 6, {3, 9, 10}, "q^8", "S:1,2,4 T"));
  add(plain("C^6_{3,q^8,4}", "C6_3_q8_4", 6, {3, 8, 9, 10}, "q^8", "S:1,2,4,12 U:k6 T"));

  // Chains a) and d) for u_7.
  const std::string k7a = "W:3,8,1 U:k7a T";
  const std::string k7d = "S:1,2,5,12 U:k7d S:1,2,6 " + k7a;
  add(plain("C^7_{1,3,q^5}", "C7_1_3_q5", 7, {3, 1}, "q^5", "T"));
  add(plain("C^7_{2,3,q^5}", "C7_2_3_q5", 7, {3, 2}, "q^5", "W:3,1 T"));
  add(plain("C^7_{3,4,q^5}", "C7_3_4_q5", 7, {3, 4}, "q^5", "W:3,1 T"));
  add(plain("C^{7,p=2}_{1,2,4,2q^7}", "C7p2_1_2_4_2q7", 7, {1, 2, 4, 10}, "2q^7", k7d));
  add(plain("C^7_{1,2,q^6}", "C7_1_2_q6", 7, {1, 2, 6}, "q^6", k7a));
  add(plain("C^7_{1,2,q^7}", "C7_1_2_q7", 7, {1, 2, 10}, "q^7", "W:1,2,6 " + k7a));
  add(plain("C^7_{1,4,q^6}", "C7_1_4_q6", 7, {1, 4, 7}, "q^6", "W:3,9,1 K:9@7 T"));
  add(plain("C^7_{1,4,q^7}", "C7_1_4_q7", 7, {1, 4, 10}, "q^7", "W:3,9,1 K:9@7 T"));
  add(plain("C^7_{2,4,q^6}", "C7_2_4_q6", 7, {2, 4, 7}, "q^6", "W:1,12,3 K:5@1 K:12@11 T"));
  add(plain("C^7_{2,4,q^7}", "C7_2_4_q7", 7, {2, 4, 9}, "q^7", "W:1,12,3 K:5@1 K:12@11 T"));
  add(plain("C^7_{1,q^6,1}", "C7_1_q6_1", 7, {1, 6}, "q^6", "W:3,1 T"));
  add(plain("C^7_{1,q^6,2}", "C7_1_q6_2", 7, {1, 7}, "q^6", "W:3,1 T"));
  add(plain("C^7_{1,q^7}", "C7_1_q7", 7, {1, 10}, "q^7", "W:3,1 T"));
  add(plain("C^7_{2,q^6,1}", "C7_2_q6_1", 7, {2, 5}, "q^6", "W:3,1 T"));
  add(plain("C^7_{2,q^6,2}", "C7_2_q6_2", 7, {2, 7}, "q^6", "W:3,1 T"));
  add(plain("C^7_{2,q^7}", "C7_2_q7", 7, {2, 9}, "q^7", "W:3,1 T"));
  add(plain("C^7_{4,q^6,1}", "C7_4_q6_1", 7, {4, 5}, "q^6", "W:3,1 T"));
  add(plain("C^7_{4,q^6,2}", "C7_4_q6_2", 7, {4, 6}, "q^6", "W:3,1 T"));
  add(plain("C^7_{4,q^7}", "C7_4_q7", 7, {4, 8}, "q^7", "W:3,1 T"));
  add(trace_split(0, "W:5,6,7,11,10 U:as0 S:1,2,4,10 " + k7d));
  {
    // Zero patterns f8 f9 f10 = 0: all proper subsets of {8, 9, 10}.
    const std::vector<std::pair<std::vector<int>, std::string>> subsets = {
        {{}, "W:3,1 T"},
        {{8}, "W:3,8,1 K:8@6 T"},
        {{9}, "W:3,9,1 K:9@7 T"},
        {{10}, "W:1,12,3 K:5@1 K:12@11 T"},
        {{8, 9}, "W:2,1,12,5 U:k7d W:8,3,1 K:8@6 T"},
        {{8, 10}, "W:5,6,11,10 U:k7e W:3,8,1 K:8@6 T"},
        {{9, 10}, "W:1,4,12,7 K:12@8 K:11@10 W:3,9,1 K:9@7 T"}};
    int i = 2;
    for (const auto& [s, recipe] : subsets) {
      std::vector<int> roots = {3};
      roots.insert(roots.end(), s.begin(), s.end());
      roots.push_back(11);
      FamilySpec f = plain("C^7_{3,q^8," + std::to_string(i) + "}", "C7_3_q8_" + std::to_string(i), 7, roots,
                           "q^8", recipe);
      f.note = "one of the seven zero patterns of (f_8, f_9, f_10)";
      add(f);
      ++i;
    }
  }
  add(plain("C^7_{5,6,7,2q^8}", "C7_5_6_7_2q8", 7, {5, 6, 7, 10}, "2q^8", "S:1,2,4,10 " + k7d));
  add(plain("C^7_{5,6,q^8}", "C7_5_6_q8", 7, {5, 6, 10}, "q^8", "W:3,8,1 K:8@6 T"));
  add(plain("C^7_{5,7,q^8}", "C7_5_7_q8", 7, {5, 7, 10}, "q^8", "W:3,9,1 K:9@7 T"));
  add(plain("C^7_{6,7,q^8}", "C7_6_7_q8", 7, {6, 7, 9}, "q^8", "W:1,12,3 K:5@1 K:12@11 T"));
  add(plain("C^7_{5,q^8}", "C7_5_q8", 7, {5, 10}, "q^8", "W:3,1 T"));
  add(plain("C^7_{6,q^8}", "C7_6_q8", 7, {6, 9}, "q^8", "W:3,1 T"));
  add(plain("C^7_{7,q^8}", "C7_7_q8", 7, {7, 8}, "q^8", "W:3,1 T"));

  {
    FamilySpec f;
    f.label = "C^{8,p=2}_{1,2,4,2q^7}";
    f.key = "C8p2_1_2_4_2q7";
    f.target_k = 8;
    f.pattern = "x_1(a_1)x_2(a_2)x_4(a_4)x_10(a_10)x_12(a_1 a_10^2 mu/(a_2 a_4))";
    f.params = {"a_1", "a_2", "a_4", "a_10"};
    f.word = [](const FieldSpec& F, const std::vector<Elem>& p) -> std::optional<Word> {
      const Elem a12 = F.div(F.mul(F.mul(p[0], F.sqr(p[3])), F.fix_mu()), F.mul(p[1], p[2]));
      return Word{{1, p[0]}, {2, p[1]}, {4, p[2]}, {10, p[3]}, {12, a12}};
    };
    f.count = r_pow(4);
    f.cu = QPoly::parse("2q^7");
    f.recipe = "T";
    add(f);
  }
  add(trace_split(1, "W:5,6,7,11,10 U:asmu W:1,2,4,10,12 T"));
  {
    FamilySpec f;
    f.label = "C^8_{5,6,7,2q^8}";
    f.key = "C8_5_6_7_2q8";
    f.target_k = 8;
    f.pattern = "x_5(a_5)x_6(a_6)x_7(a_7)x_10(a_10)x_11(a_5 a_10^2 mu/(a_6 a_7))";
    f.params = {"a_5", "a_6", "a_7", "a_10"};
    f.word = [](const FieldSpec& F, const std::vector<Elem>& p) -> std::optional<Word> {
      const Elem a11 = F.div(F.mul(F.mul(p[0], F.sqr(p[3])), F.fix_mu()), F.mul(p[1], p[2]));
      return Word{{5, p[0]}, {6, p[1]}, {7, p[2]}, {10, p[3]}, {11, a11}};
    };
    f.count = r_pow(4);
    f.cu = QPoly::parse("2q^8");
    f.recipe = "W:1,2,4,10,12 T";
    add(f);
  }

  add(plain("C^9_{1,2,3,q^5}", "C9_1_2_3_q5", 9, {3, 1, 2}, "q^5", "T"));
  add(plain("C^9_{3,4,q^5}", "C9_3_4_q5", 9, {3, 4, 8}, "q^5", "W:1,3,2 K:5@1 T"));
  add(plain("C^{9,p=2}_{1,2,4,q^6}", "C9p2_1_2_4_q6", 9, {1, 2, 4, 7}, "q^6", "S:1,2,7,12 U:k9 W:1,2,3 K:5@3 T"));
  add(plain("C^9_{1,2,q^6}", "C9_1_2_q6", 9, {1, 2, 7}, "q^6", "W:1,2,3 K:5@3 T"));
  add(plain("C^9_{4,q^6}", "C9_4_q6", 9, {4, 5, 6}, "q^6", "W:3,1,2 T"));

  add(plain("C^10_{1,3,4,q^5}", "C10_1_3_4_q5", 10, {3, 1, 4}, "q^5", "T"));
  add(plain("C^10_{2,3,q^5}", "C10_2_3_q5", 10, {3, 2, 9}, "q^5", "W:1,3,4 K:5@1 T"));
  add(plain("C^{10,p=2}_{1,2,4,q^6}", "C10p2_1_2_4_q6", 10, {1, 2, 4, 6}, "q^6", "W:4,12,1,3 K:5@3 K:12@11 T"));
  add(plain("C^10_{1,4,q^6}", "C10_1_4_q6", 10, {1, 4, 6}, "q^6", "W:1,4,3 K:5@3 T"));
  add(plain("C^10_{2,q^6}", "C10_2_q6", 10, {2, 5, 7}, "q^6", "W:3,1,4 T"));

  add(plain("C^11_{2,3,4,q^5}", "C11_2_3_4_q5", 11, {3, 2, 4}, "q^5", "T"));
  add(plain("C^11_{1,3,q^5}", "C11_1_3_q5", 11, {3, 1, 10}, "q^5", "W:2,3,4 K:6@2 T"));
  {
    FamilySpec f;
    f.label = "C^{11,p=2}_{1,2,4,q^6}";
    f.key = "C11p2_1_2_4_q6";
    f.target_k = 11;
    f.pattern = "x_1(a_1)x_2(a_2)x_4(a_4)x_6(a_2 a)x_7(a_4 a)";
    f.params = {"a_1", "a_2", "a_4", "a"};
    f.word = [](const FieldSpec& F, const std::vector<Elem>& p) -> std::optional<Word> {
      return Word{{1, p[0]}, {2, p[1]}, {4, p[2]}, {6, F.mul(p[1], p[3])}, {7, F.mul(p[2], p[3])}};
    };
    f.count = r_pow(4);
    f.cu = QPoly::parse("q^6");
    f.recipe = "U:k11 W:12,4,2,3 K:6@3 K:12@11 T";
    add(f);
  }
  add(plain("C^11_{2,4,q^6}", "C11_2_4_q6", 11, {2, 4, 5}, "q^6", "W:2,4,3 K:6@3 T"));
  add(plain("C^11_{1,q^6}", "C11_1_q6", 11, {1, 6, 7}, "q^6", "W:3,2,4 T"));

  add(plain("C^12_{1,2,3,q^5}", "C12_1_2_3_q5", 12, {3, 1, 2, 10}, "q^5", "T"));
  add(plain("C^12_{1,3,4,q^5}", "C12_1_3_4_q5", 12, {3, 1, 4, 10}, "q^5", "W:2,3,9,4 K:9@5 W:1,10,3,11,2,12,6 K:5@3 K:11@9 T"));
  add(plain("C^12_{2,3,4,q^5}", "C12_2_3_4_q5", 12, {3, 2, 4, 9}, "q^5", "K:9@5 W:1,10,3,2,6 K:5@3 T"));
  {
    FamilySpec f;
    f.label = "C^{12,p=2}_{1,2,4,q^6}";
    f.key = "C12p2_1_2_4_q6";
    f.target_k = 12;
    f.pattern = "x_1(a_1)x_2(a_2)x_4(a_4)x_6(a_6*)x_7(a_7*)";
    f.params = {"a_1", "a_2", "a_4", "a_6*", "a_7*"};
    f.constraints = {"a_2 a_7* + a_4 a_6* != 0"};
    f.word = [](const FieldSpec& F, const std::vector<Elem>& p) -> std::optional<Word> {
      if ((F.mul(p[1], p[4]) ^ F.mul(p[2], p[3])) == 0) return std::nullopt;
      return Word{{1, p[0]}, {2, p[1]}, {4, p[2]}, {6, p[3]}, {7, p[4]}};
    };
    f.count = r_pow(3) * QPoly::parse("(q-1)^2-(q-1)");
    f.cu = QPoly::parse("q^6");
    f.recipe = "W:5,6,7,2,4 U:k12b N:2,4,5,6 W:10,3,1,2 N:3,1,2,10 T";
    add(f);
  }
  add(plain("C^12_{1,2,q^6}", "C12_1_2_q6", 12, {1, 2, 6, 7}, "q^6", "W:1,2,10,3 K:5@3 T"));
  add(plain("C^12_{1,4,q^6}", "C12_1_4_q6", 12, {1, 4, 6, 7}, "q^6", "W:5,7,2,4 K:9@1 K:7@3 W:10,3,1,2,11 T"));
  add(plain("C^12_{2,4,q^6}", "C12_2_4_q6", 12, {2, 4, 5, 7}, "q^6", "W:2,4,3,9 K:6@2 K:9@5 W:1,10,3,5,2,12 T"));

  {
    FamilySpec f = plain("C^13_{1,2,3,4}", "C13", 13, {1, 2, 3, 4}, "", "N:3,1,2,4 T");
    f.cu = QPoly::parse("2q^4");
    f.note = "printed as x_1 x_2 x_3 x_4";
    add(f);
  }
  {
    FamilySpec f;
    f.label = "C^14_{1,2,3,4}";
    f.key = "C14";
    f.target_k = 14;
    f.pattern = "x_3(a_3)x_1(a_1)x_2(a_2)x_4(a_4)x_10(a_2 a_3 a_4 mu)";
    f.params = {"a_3", "a_1", "a_2", "a_4"};
    f.word = [](const FieldSpec& F, const std::vector<Elem>& p) -> std::optional<Word> {
      return Word{{3, p[0]}, {1, p[1]}, {2, p[2]}, {4, p[3]}, {10, F.mul(F.mul(p[2], F.mul(p[0], p[3])), F.fix_mu())}};
    };
    f.count = r_pow(4);
    f.cu = QPoly::parse("2q^4");
    f.cu_printed = false;
    f.recipe = "T";
    add(f);
  }
  return c;
}

}  // namespace

const std::vector<FamilySpec>& catalogue() {
  static const std::vector<FamilySpec> c = build();
  return c;
}

const FamilySpec& family(const std::string& key) {
  for (const auto& f : catalogue())
    if (f.key == key) return f;
  throw InvalidInputError("unknown family '" + key + "'");
}

}  // namespace d4
