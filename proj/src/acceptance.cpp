#include "d4/acceptance.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "d4/dlchar.hpp"
#include "d4/fusion.hpp"
#include "d4/induce.hpp"
#include "d4/solver.hpp"
#include "d4/uchars.hpp"
#include "d4/weylhc.hpp"

namespace d4 {

namespace {

template <class F>
CriterionResult timed(int id, const std::string& name, F body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.summary = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<std::string> recipe_conjugators(const std::string& recipe) {
  std::vector<std::string> out;
  std::istringstream in(recipe);
  std::string tok;
  while (in >> tok)
    if (tok.rfind("U:", 0) == 0) out.push_back(tok.substr(2));
  return out;
}

mpq_class explicit_phi_sum(const FieldSpec& F, const std::vector<Elem>& k) {
  const int m = static_cast<int>(k.size());
  std::vector<Elem> a(m, 1);
  mpq_class s = 0;
  while (true) {
    Elem arg = 0;
    for (int i = 0; i < m; ++i) arg ^= F.mul(k[i], a[i]);
    s += F.phi(arg);
    int i = 0;
    while (i < m && ++a[i] == F.q()) a[i++] = 1;
    if (i == m) break;
  }
  return s;
}

std::string eta_path(const AcceptanceOptions& o) { return o.eta_path.empty() ? EtaTable::default_path() : o.eta_path; }

std::optional<EtaTable> try_load_eta(const AcceptanceOptions& o, std::string& why) {
  const std::string path = eta_path(o);
  if (!std::ifstream(path)) {
    why = "eta file " + path + " is absent";
    return std::nullopt;
  }
  return EtaTable::load(path);
}

}  // namespace

CriterionResult criterion_fusion_witnesses(const AcceptanceOptions& o) {
  return timed(1, "fusion witness suite", [&](CriterionResult& r) {
    std::uint64_t checked = 0, failures = 0, torus_checked = 0;
    std::map<std::string, std::uint64_t> conj;
    for (int m : {2, 3, 4}) {
      const Field field = make_field(m);
      const auto reps = class_reps(field);
      std::mt19937_64 rng(4000 + m);
      for (const auto& fam : catalogue()) {
        const auto names = recipe_conjugators(fam.recipe);
        for (int i = 0; i < o.samples; ++i) {
          const auto x = random_instance(fam, field, rng);
          ++checked;
          try {
            const Witness w = canonicalize(fam, x);
            if (!replay(w)) throw FusionMismatchError("replay differs");
            for (const auto& n : names) ++conj[n];
          } catch (const Error& e) {
            if (failures++ < 5)
              r.details.push_back("q=" + std::to_string(field->q()) + " " + fam.key + " " + x.to_string() + ": " + e.what());
          }
        }
      }
      // Torus witnesses on the first-row representative of each u_k.
      for (int k = 2; k <= kClasses; ++k) {
        if (k == 13) continue;
        const FamilySpec* first = nullptr;
        for (const auto& f : catalogue())
          if (f.target_k == k && (k != 2 || f.key == "C2_1")) {
            first = &f;
            break;
          }
        for (int i = 0; i < o.samples; ++i) {
          const auto x = random_instance(*first, field, rng);
          ++torus_checked;
          if (conj_torus(x, torus_witness(k, x)) != reps[k - 1].rep && failures++ < 5)
            r.details.push_back("torus witness k=" + std::to_string(k) + " fails at " + x.to_string());
        }
      }
    }
    std::string used;
    for (const auto& [n, c] : conj) used += (used.empty() ? "" : ", ") + n + " x" + std::to_string(c);
    r.details.push_back("explicit conjugators exercised: " + used);
    r.details.push_back("u_13 torus step is checked inside its family recipes (its printed word is not in normal form)");
    r.pass = failures == 0;
    r.summary = std::to_string(checked) + " family chains and " + std::to_string(torus_checked) +
                " torus witnesses at q=4,8,16; " + std::to_string(failures) + " failures";
  });
}

CriterionResult criterion_partition_audit(const AcceptanceOptions&) {
  return timed(2, "partition audit at q=4", [&](CriterionResult& r) {
    const UPartition P = partition_U_q4();
    const FusionReport rep = fusion_table(make_field(2), &P);
    std::uint64_t cu_bad = 0;
    for (const auto& f : rep.families)
      if (f.cu_observed != f.cu_presumed) {
        ++cu_bad;
        r.details.push_back(f.key + ": |C_U| observed " + std::to_string(f.cu_observed) + ", presumed " +
                            std::to_string(f.cu_presumed));
      }
    for (const auto& d : rep.discrepancies) r.details.push_back(d);
    const std::uint64_t q12 = 1ull << 24;
    r.pass = rep.total_instances == 3259 && rep.expected_classes == 3259 && P.classes == 3259 && rep.partition_ok &&
             rep.size_sum == q12 && cu_bad == 0 && rep.discrepancies.empty();
    r.summary = std::to_string(rep.total_instances) + " instances, " + std::to_string(P.classes) +
                " orbits, sizes sum to " + std::to_string(rep.size_sum) + " (4^12 = " + std::to_string(q12) + "), " +
                std::to_string(cu_bad) + " |C_U| discrepancies";
  });
}

CriterionResult criterion_closed_forms(const AcceptanceOptions&) {
  return timed(3, "closed forms against explicit sums", [&](CriterionResult& r) {
    std::uint64_t cases = 0, bad = 0;
    for (int q : {4, 8}) {
      const auto F = make_field_q(q);
      for (int m = 1; m <= 3; ++m) {
        std::vector<Elem> k(m, 1);
        while (true) {
          CharSum s;
          for (int i = 0; i < m; ++i)
            s.phase = s.phase.add(*F, SymPoly::constant(*F, k[i]).mul(*F, SymPoly::var(*F, i)));
          const auto cf = evaluate_sum(*F, m, {s}, false);
          const mpq_class ex = explicit_phi_sum(*F, k);
          ++cases;
          if (!cf.closed || cf.value != ex || ex != (m % 2 ? -1 : 1)) ++bad;
          int i = 0;
          while (i < m && ++k[i] == F->q()) k[i++] = 1;
          if (i == m) break;
        }
      }
      const mpq_class qq = q;
      const auto& fam = family("C7_3_q8_1");
      for (Elem s : {Elem{0}, F->fix_mu()})
        for (Elem t : {Elem{0}, F->fix_mu()}) {
          const auto c = UCharSpec::q3half(*F, s, t);
          const mpq_class expect = -F->phi(t) * qq * qq * (qq - 2) / 4;
          const mpq_class brute = family_sum(c, fam, F);
          const auto cf = closed_form_sum(c, fam, F);
          ++cases;
          if (brute != expect || !cf || *cf != expect) {
            ++bad;
            r.details.push_back("q=" + std::to_string(q) + " " + c.to_string() + " on " + fam.key + ": brute " +
                                brute.get_str() + ", expected " + expect.get_str());
          }
        }
      const auto c = UCharSpec::chi567(F->first_non_binary());
      const auto& f12 = family("C12p2_1_2_4_q6");
      const mpq_class brute = family_sum(c, f12, F);
      const auto cf = closed_form_sum(c, f12, F);
      ++cases;
      if (brute != 4 * qq || !cf || *cf != 4 * qq) {
        ++bad;
        r.details.push_back("q=" + std::to_string(q) + " chi567 on " + f12.key + ": brute " + brute.get_str());
      }
    }
    r.pass = bad == 0;
    r.summary = std::to_string(cases) + " cases (every coefficient vector for m <= 3 and both printed sums at q=4,8); " +
                std::to_string(bad) + " mismatches";
  });
}

CriterionResult criterion_projective_table(const AcceptanceOptions& o) {
  return timed(4, "projective character table", [&](CriterionResult& r) {
    std::string why;
    const auto eta = try_load_eta(o, why);
    const std::vector<std::uint64_t> qs = {4, 8, 16, 32, 64};
    const PolyMatrix& printed = printed_projective_table();
    if (!eta) {
      // Degraded: nonnegativity and the psi6..psi9 block on chi6..chi9 and chi14 need eta, so
      // only the family sums can be checked here.
      r.degraded = true;
      r.pass = false;
      r.summary = "degraded mode: " + why;
      return;
    }
    const EtaValidation val = validate_eta(*eta, {4, 8, 16});
    r.details.push_back(std::string("eta: degrees ") + (val.degrees ? "match" : "differ") + " the Deligne-Lusztig degrees, Green identity " +
                        (val.green ? "holds" : "fails") + " at q=4,8,16, values " + (val.integral ? "integral" : "not integral"));
    for (const auto& d : val.diffs) r.details.push_back("  " + d);
    std::map<std::pair<int, int>, std::vector<std::string>> diffs;
    int evaluated = 0;
    for (auto q : qs) {
      const QMatrix M = evaluate_matrix(*eta, q);
      const mpq_class x(mpz_class(std::to_string(q)));
      for (int i = 0; i < kUnipotent; ++i)
        for (int j = 0; j < kColumns; ++j) {
          ++evaluated;
          const mpq_class p = printed[i][j].eval(x);
          if (M[i][j] != p)
            diffs[{i, j}].push_back("q=" + std::to_string(q) + ": " + M[i][j].get_str() + " vs " + p.get_str());
        }
    }
    const InnerProductMatrix A = assemble_matrix(*eta, {4, 8, 16, 32, 64, 128});
    const UnitriangularReport u = check_unitriangular(A.entries);
    const auto vs_corrected = compare_tables(A.entries, corrected_projective_table());
    for (const auto& [ij, lines] : diffs) {
      std::string s = "chi" + std::to_string(ij.first + 1) + " x " + column_names()[ij.second] + ": computed " +
                      A.entries[ij.first][ij.second].to_string() + ", printed " + printed[ij.first][ij.second].to_string();
      r.details.push_back(s);
      for (const auto& l : lines) r.details.push_back("  " + l);
    }
    for (const auto& s : u.issues) r.details.push_back(s);
    const int entries = kUnipotent * kColumns;
    r.details.push_back(std::to_string(entries - static_cast<int>(diffs.size())) + " of " + std::to_string(entries) +
                        " printed entries reproduced; " + std::to_string(vs_corrected.size()) +
                        " differences from the table with the chi13 row corrected");
    try {
      std::vector<int> fs;
      for (int f = 2; f <= 16; ++f) fs.push_back(f);
      (void)reconstruct_eta(printed, fs);
      r.details.push_back("the printed table admits a consistent eta");
    } catch (const DataError& e) {
      r.details.push_back(std::string("no eta reproduces the printed table: ") + e.what());
    }
    r.details.push_back("provenance: eta was solved from the corrected table and checked independently by the "
                        "Deligne-Lusztig degrees and the Green identity; the comparison is partly circular");
    if (A.swapped_13_14) r.details.push_back("eta columns u13, u14 were swapped to get nonnegative integers");
    r.pass = diffs.empty() && u.ok() && val.ok();
    r.summary = std::to_string(evaluated) + " evaluations at q=4..64, " + std::to_string(diffs.size()) +
                " entries differ from print; unitriangular " + (u.unitriangular ? "yes" : "no") + ", triality " +
                (u.triality ? "yes" : "no");
  });
}

CriterionResult criterion_weyl_hc(const AcceptanceOptions&) {
  return timed(5, "Weyl group and Harish-Chandra suite", [&](CriterionResult& r) {
    bool ok = true;
    const Parabolic& W = whole_weyl();
    const auto& X = W.characters();
    ok &= W.order() == 192 && W.class_count() == 13 && X.size() == 13;
    bool orth = true;
    for (std::size_t a = 0; a < X.size(); ++a)
      for (std::size_t b = 0; b < X.size(); ++b) {
        long s = 0;
        for (int c = 0; c < W.class_count(); ++c) s += W.class_size(c) * X[a][c] * X[b][c];
        if (s != (a == b ? 192 : 0)) orth = false;
      }
    ok &= orth;
    r.details.push_back("|W| = " + std::to_string(W.order()) + ", " + std::to_string(W.class_count()) +
                        " classes, orthogonality " + (orth ? "exact" : "fails"));
    const Dictionary& dict = calibration().dict;
    for (const auto& p : printed_inductions()) {
      VirtualUnipotent got = hc_induce(a3_pims()[p.eta - 1], p.J, dict);
      const long own = got[kOwnBlock];
      got[kOwnBlock] = p.value[kOwnBlock];
      const bool same = got == p.value;
      ok &= same;
      r.details.push_back("R(eta" + std::to_string(p.eta) + ") from " + parabolic(p.J).tag() + " " +
                          (same ? "matches" : "differs") + " on the principal block (chi8 coefficient " +
                          std::to_string(own) + ")");
    }
    const auto& rs = printed_restrictions();
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const auto& p = rs[k];
      const RhoVector got = hc_restrict(p.v, p.J, dict);
      const bool same = got == p.value;
      const bool counted = p.name != "nu3^2";
      if (counted) ok &= same;
      r.details.push_back("*R_" + parabolic(p.J).tag() + "(" + p.name + ") = " + to_string_rho(got) +
                          (same ? " matches" : " differs from the printed " + to_string_rho(p.value)) +
                          (k == 0 ? " (also a calibration gate)" : "") + (counted ? "" : " (outside the four checked restrictions)"));
    }
    std::mt19937_64 rng(55);
    int pairs = 0;
    bool recip = true;
    for (const std::vector<int>& J : std::vector<std::vector<int>>{{1, 2, 3}, {1, 3, 4}, {2, 3, 4}, {1, 2, 4}, {1, 3}, {3}}) {
      const Parabolic& P = parabolic(J);
      for (int t = 0; t < 100; ++t) {
        ClassFunction f{J, std::vector<mpq_class>(P.class_count(), 0)};
        for (std::size_t i = 0; i < P.characters().size(); ++i) {
          const long c = static_cast<long>(rng() % 7) - 3;
          for (int cl = 0; cl < P.class_count(); ++cl) f.values[cl] += c * P.characters()[i][cl];
        }
        ClassFunction g{W.J(), std::vector<mpq_class>(W.class_count(), 0)};
        for (std::size_t i = 0; i < X.size(); ++i) {
          const long c = static_cast<long>(rng() % 7) - 3;
          for (int cl = 0; cl < W.class_count(); ++cl) g.values[cl] += c * X[i][cl];
        }
        if (inner(W, induce(f, W.J()), g) != inner(P, f, restrict(g, J))) recip = false;
        ++pairs;
      }
    }
    ok &= recip;
    r.details.push_back("Frobenius reciprocity on " + std::to_string(pairs) + " random pairs: " + (recip ? "holds" : "fails"));
    r.pass = ok;
    r.summary = std::string(ok ? "all checks hold" : "some checks fail");
  });
}

CriterionResult criterion_dl(const AcceptanceOptions&) {
  return timed(6, "Deligne-Lusztig calibration", [&](CriterionResult& r) {
    const WeylGroup& W = weyl();
    const bool rw0 = r_w(W.longest()) == printed_r_w0();
    const QPoly q = QPoly::q();
    const bool torus = torus_order(W.longest()) == (q + QPoly(1)).pow(4);
    bool orth = true;
    for (int a = 0; a < W.class_count(); ++a)
      for (int b = 0; b < W.class_count(); ++b) {
        const long s = dl_inner(r_w(W.class_rep(a)), r_w(W.class_rep(b)));
        if (s != (a == b ? W.centralizer_order(a) : 0)) orth = false;
      }
    r.details.push_back(std::string("r_w(w0) ") + (rw0 ? "equals" : "differs from") + " the printed R_w0 (a calibration gate)");
    r.details.push_back("torus_order(w0) = " + torus_order(W.longest()).to_string());
    r.details.push_back(std::string("<R_w, R_w'> = |C_W(w)| delta across 13 classes: ") + (orth ? "holds" : "fails"));
    const Calibration& cal = calibration();
    r.details.push_back("calibration: " + std::to_string(cal.solutions) + " matching(s) pass every gate");
    r.pass = rw0 && torus && orth && cal.solutions == 1;
    r.summary = r.pass ? "all checks hold" : "some checks fail";
  });
}

CriterionResult criterion_solver(const AcceptanceOptions& o) {
  return timed(7, "solver end to end", [&](CriterionResult& r) {
    std::string why;
    const auto eta = try_load_eta(o, why);
    if (!eta) r.details.push_back(why + "; the projective columns come from the corrected projective table");
    bool ok = true;
    std::optional<std::array<Column, kUnipotent>> first;
    for (auto [q, ell] : std::vector<std::pair<std::uint64_t, std::int64_t>>{{32, 11}, {128, 43}}) {
      const SolverContext ctx = eta ? make_context(*eta, q, ell) : make_context(corrected_projective_table(), q, ell);
      const SolveResult res = solve(ctx);
      const std::string tag = "(q, l) = (" + std::to_string(q) + ", " + std::to_string(ell) + "): ";
      const SymExpr a = SymExpr::sym(Symbol::Alpha), b = SymExpr::sym(Symbol::Beta);
      const SymExpr gamma = SymExpr(-9) * a + SymExpr(4) * b + SymExpr(8);
      auto expected = printed_decomposition_matrix();
      for (auto& row : expected)
        for (auto& e : row) e = e.substitute(Symbol::Gamma, gamma);
      const bool table = res.state.d == expected;
      const auto fd = res.state.fixed.find(Symbol::Delta), fg = res.state.fixed.find(Symbol::Gamma);
      const bool delta = fd != res.state.fixed.end() && fd->second == SymExpr(4);
      const bool gam = fg != res.state.fixed.end() && fg->second == gamma;
      auto has = [&](const SymExpr& e) {
        for (const auto& c : res.bounds)
          if (c.rel == Relation::Geq && c.expr == e) return true;
        return false;
      };
      const mpq_class qq = mpq_class(mpz_class(std::to_string(q)));
      const bool bounds = has(SymExpr(qq / 2) - a) && has(SymExpr((3 * qq - 2) / 2) - b) &&
                          has(SymExpr(3) * a - b - SymExpr(1)) && has(gamma);
      const SolveResult again = replay(res.log, ctx);
      const bool replays = again.state == res.state && again.branches == res.branches;
      auto fact = [&](const std::string& name, const SymExpr& v) {
        const Fact* f = res.log.find_fact(name);
        return f && f->value == v;
      };
      const int wp = weyl().from_word({1, 2, 3, 1, 4, 3});
      const SymExpr d = SymExpr::sym(Symbol::Delta);
      const bool facts = fact("a_{c,13}", SymExpr(3) * a - b - SymExpr(1)) &&
                         fact("a_{" + weyl_label(wp) + ",14}", SymExpr(-4) * d + SymExpr(16)) &&
                         fact("a_{w0,14}", SymExpr(192));
      const bool same_q = !first || *first == res.state.d;
      if (!first) first = res.state.d;
      r.details.push_back(tag + "matrix " + (table ? "matches" : "differs") + ", delta = 4 " + (delta ? "yes" : "no") +
                          ", gamma = -9 alpha + 4 beta + 8 " + (gam ? "yes" : "no") + ", bounds " + (bounds ? "recorded" : "missing") +
                          ", replay " + (replays ? "identical" : "differs") + ", log facts " + (facts ? "present" : "missing") +
                          ", " + std::to_string(res.log.entries.size()) + " log entries");
      ok &= table && delta && gam && bounds && replays && facts && same_q;
    }
    r.pass = ok;
    r.summary = ok ? "both runs reproduce the printed matrix" : "some checks fail";
  });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o, const std::vector<int>& ids) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  const Fn all[] = {criterion_fusion_witnesses, criterion_partition_audit, criterion_closed_forms, criterion_projective_table,
                    criterion_weyl_hc,          criterion_dl,              criterion_solver};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 7; ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    out.push_back(all[id - 1](o));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << (r.degraded ? " (degraded)" : "") << "  "
     << r.name << "  [" << static_cast<long>(r.seconds * 1000) << " ms]  " << r.summary;
  return os.str();
}

}  // namespace d4
