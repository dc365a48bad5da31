// Command-line front end. Exit codes: 0 ok, 2 configuration, 3 data file, 4 mismatch.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "d4/acceptance.hpp"
#include "d4/dlchar.hpp"
#include "d4/errors.hpp"
#include "d4/fusion.hpp"
#include "d4/induce.hpp"
#include "d4/solver.hpp"
#include "d4/uchars.hpp"
#include "d4/weylhc.hpp"
#include "json.hpp"

using json = nlohmann::json;
using namespace d4;

namespace {

enum Exit { kOk = 0, kConfig = 2, kData = 3, kMismatch = 4 };

struct RunConfig {
  std::uint64_t q = 4;
  std::int64_t ell = 0;
  std::string modulus;  // hex or decimal; empty for the default
  std::string eta_path;
  std::string fourier_path;
  std::string out;
  int threads = 1;
  bool force = false;
};

int log2_exact(std::uint64_t q) {
  if (q < 4 || q > 65536 || (q & (q - 1))) throw InvalidInputError("q must be 2^f with 2 <= f <= 16, got " + std::to_string(q));
  return __builtin_ctzll(q);
}

Field field_of(const RunConfig& c) {
  const int f = log2_exact(c.q);
  if (c.modulus.empty()) return make_field(f);
  const Elem m = static_cast<Elem>(std::stoul(c.modulus, nullptr, 0));
  if (!FieldSpec::is_irreducible(m, f)) throw InvalidInputError("modulus " + c.modulus + " is not irreducible of degree " + std::to_string(f));
  return make_field(f, m);
}

EtaTable eta_of(const RunConfig& c) {
  const std::string path = c.eta_path.empty() ? EtaTable::default_path() : c.eta_path;
  if (!std::ifstream(path)) throw DataError("eta file " + path + " not found");
  return EtaTable::load(path);
}

Calibration calibration_of(const RunConfig& c) {
  if (c.fourier_path.empty()) return calibration();
  std::ifstream in(c.fourier_path);
  if (!in) throw DataError("Fourier file " + c.fourier_path + " not found");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(c.fourier_path + ": " + e.what());
  }
  if (j.value("schema", "") != "d4.fourier/1") throw DataError(c.fourier_path + ": schema is not d4.fourier/1");
  FamilyFourierData f;
  for (int i = 0; i < 4; ++i) {
    f.members[i] = j.at("members").at(i).get<int>();
    for (int k = 0; k < 4; ++k) f.matrix[i][k] = mpq_class(j.at("matrix").at(i).at(k).get<std::string>());
  }
  return calibrate(f);
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw InvalidInputError("cannot write " + out);
  f << j.dump(2) << "\n";
}

void emit_text(const std::string& s, const std::string& out) {
  if (out.empty()) {
    std::cout << s;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InvalidInputError("cannot write " + out);
  f << s;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) v.push_back(std::stoi(tok));
  return v;
}

json move_json(const Move& m) {
  json j{{"step", m.step}};
  switch (m.kind) {
    case Move::Weyl:
      j["kind"] = "weyl";
      j["word"] = weyl().element(m.w).word;
      break;
    case Move::Unip: {
      j["kind"] = "unipotent";
      json u = json::array();
      for (const auto& [r, t] : m.u) u.push_back({r, t});
      j["word"] = u;
      break;
    }
    case Move::Torus:
      j["kind"] = "torus";
      j["t"] = m.h.t;
      break;
  }
  return j;
}

json vector_json(const VirtualUnipotent& v) {
  json j = json::array();
  for (int i = 1; i <= kUnipotent; ++i) j.push_back(v[i]);
  return j;
}

json sym_json(const SymExpr& e) {
  json j{{"const", to_string(e.constant())}, {"alpha", to_string(e.linear(Symbol::Alpha))}, {"beta", to_string(e.linear(Symbol::Beta))}};
  for (Symbol s : {Symbol::Gamma, Symbol::Delta})
    if (e.uses(s)) j[symbol_name(s)] = to_string(e.linear(s));
  if (!e.is_affine()) j["text"] = e.to_string();
  return j;
}

std::string latex_sym(std::string s) {
  for (const char* name : {"alpha", "beta", "gamma", "delta"}) {
    const std::string from = name, to = std::string("\\") + name;
    for (std::size_t p = 0; (p = s.find(from, p)) != std::string::npos; p += to.size())
      if (p == 0 || s[p - 1] != '\\') s.replace(p, from.size(), to);
  }
  for (std::size_t p = 0; (p = s.find('*', p)) != std::string::npos;) s.erase(p, 1);
  return s;
}

// ---- subcommands

int cmd_fuse(const RunConfig& c, bool audit, const std::string& only) {
  const Field field = field_of(c);
  std::optional<UPartition> P;
  if (audit) {
    if (c.q != 4) throw InvalidInputError("--audit needs --q 4");
    P = partition_U_q4();
  }
  const FusionReport rep = fusion_table(field, P ? &*P : nullptr);
  json fams = json::array();
  for (const auto& a : rep.families) {
    if (!only.empty() && a.key != only) continue;
    const FamilySpec& fam = family(a.key);
    json j{{"label", fam.label},       {"key", fam.key},           {"target_k", fam.target_k},
           {"count", a.count},         {"expected_count", a.expected_count},
           {"cu_observed", a.cu_observed}, {"cu_presumed", a.cu_presumed}, {"witnesses_ok", a.witnesses_ok}};
    const auto xs = instances(fam, field);
    if (!xs.empty()) {
      const Witness w = canonicalize(fam, xs.front());
      json moves = json::array();
      for (const auto& m : w.moves) moves.push_back(move_json(m));
      j["witness"] = {{"start", w.start.to_hex()}, {"end", w.end.to_hex()}, {"moves", moves}};
    }
    if (!a.first_failure.empty()) j["first_failure"] = a.first_failure;
    fams.push_back(j);
  }
  json out{{"schema", "d4.fuse/1"},
           {"q", c.q},
           {"families", fams},
           {"totals",
            {{"classes", rep.total_instances},
             {"expected_classes", rep.expected_classes},
             {"partition_checked", rep.partition_checked},
             {"partition_ok", rep.partition_ok},
             {"size_sum", rep.size_sum}}},
           {"discrepancies", rep.discrepancies}};
  emit(out, c.out);
  bool ok = rep.discrepancies.empty() && (!audit || rep.partition_ok);
  for (const auto& a : rep.families) ok &= a.witnesses_ok;
  return ok ? kOk : kMismatch;
}

int cmd_centralizers(const RunConfig& c, int k) {
  const Field field = field_of(c);
  const auto reps = class_reps(field);
  json arr = json::array();
  for (int i = 1; i <= kClasses; ++i) {
    if (k && i != k) continue;
    const auto& u = reps[i - 1];
    json j{{"class", i}, {"rep", u.rep_text}, {"coords", u.rep.to_hex()}, {"order_G", u.cg_order.to_string()}};
    if (c.q == 4 || c.force) j["order_U"] = centralizer_order_U(u.rep, c.force);
    arr.push_back(j);
  }
  emit({{"schema", "d4.centralizers/1"}, {"q", c.q}, {"classes", arr}}, c.out);
  return kOk;
}

int cmd_mul_conj(const RunConfig& c, bool conj, const std::string& a, const std::string& b) {
  const Field field = field_of(c);
  const auto x = UnipotentElement::from_hex(field, a), y = UnipotentElement::from_hex(field, b);
  const auto r = conj ? conj_unip(x, y) : x * y;
  emit({{"schema", conj ? "d4.conj/1" : "d4.mul/1"}, {"q", c.q}, {"result", r.to_hex()}, {"text", r.to_string()}}, c.out);
  return kOk;
}

int cmd_weyl(const RunConfig& c, const std::string& orbits, bool classes) {
  const WeylGroup& W = weyl();
  json j{{"schema", "d4.weyl/1"}, {"order", W.order()}};
  if (!orbits.empty()) j["orbits"] = W.orbit_tuples(parse_list(orbits));
  if (classes) {
    json cl = json::array();
    for (int i = 0; i < W.class_count(); ++i)
      cl.push_back({{"rep", W.element(W.class_rep(i)).word}, {"size", W.class_size(i)}, {"centralizer", W.centralizer_order(i)}});
    j["classes"] = cl;
  }
  emit(j, c.out);
  return kOk;
}

int cmd_sums(const RunConfig& c, const std::string& chr, const std::string& fam_key) {
  const Field field = field_of(c);
  const UCharSpec spec = UCharSpec::parse(chr, *field);
  const FamilySpec& fam = family(fam_key);
  const mpq_class ex = family_sum(spec, fam, field);
  const auto cf = closed_form_sum(spec, fam, field);
  json j{{"schema", "d4.sums/1"}, {"q", c.q}, {"char", spec.to_string()}, {"family", fam.key}, {"explicit", to_string(ex)}};
  j["closed_form"] = cf ? json(to_string(*cf)) : json(nullptr);
  j["equal"] = cf && *cf == ex;
  emit(j, c.out);
  return cf && *cf != ex ? kMismatch : kOk;
}

int cmd_decn(const RunConfig& c, bool latex, bool csv, bool check) {
  const EtaTable eta = eta_of(c);
  const QMatrix M = evaluate_matrix(eta, c.q);
  const auto& names = column_names();
  const PolyMatrix& printed = printed_projective_table();
  const mpq_class qq(mpz_class(std::to_string(c.q)));
  std::vector<std::string> diffs;
  for (int i = 0; i < kUnipotent; ++i)
    for (int j = 0; j < kColumns; ++j)
      if (M[i][j] != printed[i][j].eval(qq))
        diffs.push_back("chi" + std::to_string(i + 1) + " x " + names[j] + ": computed " + to_string(M[i][j]) + ", printed " +
                        printed[i][j].to_string() + " = " + to_string(printed[i][j].eval(qq)));
  const bool as_csv = csv || ends_with(c.out, ".csv");
  const bool as_tex = latex || ends_with(c.out, ".tex");
  std::ostringstream os;
  if (as_tex) {
    os << "% unipotent decomposition numbers, q = " << c.q << "\n\\begin{tabular}{l" << std::string(kColumns, 'r') << "}\n";
    for (const auto& n : names) {
      const bool prime = n.back() == '\'';
      os << " & $\\psi_{" << n.substr(3, n.size() - 3 - prime) << "}" << (prime ? "'" : "") << "$";
    }
    os << " \\\\\n\\hline\n";
    for (int i = 0; i < kUnipotent; ++i) {
      os << "$\\chi_{" << i + 1 << "}$";
      for (int j = 0; j < kColumns; ++j) os << " & " << (M[i][j] == 0 ? std::string(".") : to_string(M[i][j]));
      os << " \\\\\n";
    }
    os << "\\end{tabular}\n";
    emit_text(os.str(), c.out);
  } else if (as_csv) {
    os << "schema=d4.decn.csv/1,q=" << c.q << "\nchi";
    for (const auto& n : names) os << "," << n;
    os << "\n";
    for (int i = 0; i < kUnipotent; ++i) {
      os << "chi" << i + 1;
      for (int j = 0; j < kColumns; ++j) os << "," << to_string(M[i][j]);
      os << "\n";
    }
    emit_text(os.str(), c.out);
  } else {
    json rows = json::array();
    for (int i = 0; i < kUnipotent; ++i) {
      json r = json::array();
      for (int j = 0; j < kColumns; ++j) r.push_back(to_string(M[i][j]));
      rows.push_back(r);
    }
    emit({{"schema", "d4.decn/1"}, {"q", c.q}, {"columns", names}, {"rows", rows}, {"differences_from_print", diffs}}, c.out);
  }
  if (check) {
    for (const auto& d : diffs) std::cerr << "induce: projective table mismatch, " << d << "\n";
    if (!diffs.empty()) return kMismatch;
  }
  return kOk;
}

int cmd_weylchar(const RunConfig& c, const std::string& table) {
  const Parabolic& P = table == "W" ? whole_weyl() : table == "A3" ? parabolic({1, 2, 3}) : parabolic(parse_list(table));
  json cl = json::array();
  for (int i = 0; i < P.class_count(); ++i)
    cl.push_back({{"rep", weyl().element(P.class_rep(i)).word}, {"size", P.class_size(i)}});
  emit({{"schema", "d4.weylchar/1"}, {"J", P.J()}, {"order", P.order()}, {"classes", cl}, {"characters", P.characters()}}, c.out);
  return kOk;
}

int cmd_hc(const RunConfig& c, int eta, const std::string& levi) {
  if (eta < 1 || eta > kPartitions) throw InvalidInputError("--eta must be 1..5");
  const std::vector<int> J = parse_list(levi);
  const Calibration cal = calibration_of(c);
  const VirtualUnipotent v = hc_induce(a3_pims()[eta - 1], J, cal.dict);
  emit({{"schema", "d4.hc/1"}, {"eta", eta}, {"levi", J}, {"chi", vector_json(v)}, {"text", to_string(v)}}, c.out);
  return kOk;
}

int cmd_dl(const RunConfig& c, const std::string& w_text) {
  const int w = parse_weyl_element(w_text);
  const Calibration cal = calibration_of(c);
  const VirtualUnipotent v = r_w(w, cal);
  emit({{"schema", "d4.dl/1"},
        {"w", weyl_label(w)},
        {"word", weyl().element(w).word},
        {"chi", vector_json(v)},
        {"text", to_string(v)},
        {"torus_order", torus_order(w).to_string()}},
       c.out);
  return kOk;
}

int cmd_solve(const RunConfig& c) {
  if (c.ell == 0) throw InvalidInputError("solve needs --ell");
  const std::string path = c.eta_path.empty() ? EtaTable::default_path() : c.eta_path;
  SolverContext ctx = std::ifstream(path) ? make_context(EtaTable::load(path), c.q, c.ell)
                                          : make_context(corrected_projective_table(), c.q, c.ell);
  ctx.dict = calibration_of(c).dict;
  const SolveResult res = solve(ctx);
  if (ends_with(c.out, ".tex")) {
    std::ostringstream os;
    os << "% unipotent principal-block decomposition matrix, q = " << c.q << ", ell = " << c.ell << "\n";
    os << "\\begin{tabular}{l" << std::string(kUnipotent, 'c') << "}\n";
    for (int j = 1; j <= kUnipotent; ++j) os << " & $\\Psi_{" << j << "}$";
    os << " \\\\\n\\hline\n";
    for (int i = 0; i < kUnipotent; ++i) {
      os << "$\\chi_{" << i + 1 << "}$";
      for (int j = 0; j < kUnipotent; ++j) {
        const auto& e = res.state.d[i][j];
        os << " & " << (e.is_zero() ? std::string(".") : "$" + latex_sym(e.to_string()) + "$");
      }
      os << " \\\\\n";
    }
    os << "\\end{tabular}\n";
    emit_text(os.str(), c.out);
    return kOk;
  }
  json rows = json::array();
  for (int i = 0; i < kUnipotent; ++i) {
    json r = json::array();
    for (int j = 0; j < kUnipotent; ++j) r.push_back(sym_json(res.state.d[i][j]));
    rows.push_back(r);
  }
  json fixed = json::object();
  for (const auto& [s, e] : res.state.fixed) fixed[symbol_name(s)] = sym_json(e);
  json cons = json::array(), bounds = json::array(), log = json::array();
  for (const auto& k : res.state.constraints) cons.push_back(k.to_string());
  for (const auto& k : res.bounds) bounds.push_back(k.to_string());
  for (const auto& e : res.log.entries) log.push_back(e.to_string());
  json out{{"schema", "d4.solve/1"}, {"q", c.q},          {"ell", c.ell},   {"entries", rows},
           {"fixed", fixed},         {"constraints", cons}, {"bounds", bounds}, {"log", log}};
  if (const auto it = res.state.fixed.find(Symbol::Delta); it != res.state.fixed.end()) out["delta"] = to_string(it->second.constant());
  emit(out, c.out);
  return kOk;
}

int cmd_eta(const RunConfig& c, bool reconstruct, bool validate) {
  if (reconstruct) {
    std::vector<int> fs;
    for (int f = 2; f <= 16; ++f) fs.push_back(f);
    const EtaTable eta = reconstruct_eta(corrected_projective_table(), fs);
    const EtaValidation v = validate_eta(eta, {4, 8, 16});
    for (const auto& d : v.diffs) std::cerr << "induce: " << d << "\n";
    if (!v.ok()) return kData;
    const std::string out = c.out.empty() ? EtaTable::default_path() : c.out;
    eta.save(out,
             "solved from the inner products of the projective columns with the chi13 row corrected at psi7 and psi8, "
             "q = 2^2..2^16, interpolated and confirmed at the last two points; checked against the Deligne-Lusztig "
             "degrees and the Green identity at q = 4, 8, 16");
    std::cout << json{{"schema", "d4.eta.result/1"}, {"written", out}}.dump() << "\n";
    return kOk;
  }
  const EtaTable eta = eta_of(c);
  const EtaValidation v = validate_eta(eta, {4, 8, 16, 32, 64});
  json j{{"schema", "d4.eta.validation/1"}, {"degrees", v.degrees}, {"green", v.green}, {"integral", v.integral}, {"diffs", v.diffs}};
  emit(j, c.out);
  (void)validate;
  return v.ok() ? kOk : kData;
}

int cmd_verify_all(const RunConfig& c, int samples) {
  AcceptanceOptions o;
  o.eta_path = c.eta_path;
  o.samples = samples;
  json arr = json::array();
  bool ok = true;
  for (int id = 1; id <= 7; ++id) {
    const auto r = run_acceptance(o, {id}).front();
    std::cerr << format_line(r) << "\n";
    for (const auto& d : r.details) std::cerr << "    " << d << "\n";
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"degraded", r.degraded}, {"seconds", r.seconds},
                   {"summary", r.summary}, {"details", r.details}});
    ok &= r.pass;
  }
  emit({{"schema", "d4.verify/1"}, {"criteria", arr}, {"pass", ok}}, c.out);
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unipotent decomposition numbers of SO8+(q) in characteristic l"};
  app.set_config("--config", "", "configuration file (INI or TOML)");
  app.require_subcommand(1);
  RunConfig c;
  auto common = [&](CLI::App* s, bool with_q = true, bool with_eta = true) {
    if (with_q) s->add_option("--q", c.q, "field size 2^f");
    s->add_option("--modulus", c.modulus, "irreducible polynomial defining F_q (integer, 0x.. accepted)");
    if (with_eta) s->add_option("--eta", c.eta_path, "eta table (JSON)");
    s->add_option("--fourier", c.fourier_path, "Fourier matrix of the chi6..chi9 family (JSON)");
    s->add_option("--out", c.out, "output file");
    s->add_option("--threads", c.threads, "accepted for compatibility; all work runs on one thread");
    s->add_flag("--force", c.force, "allow brute force beyond q = 4");
  };

  auto* fuse = app.add_subcommand("fuse", "catalogue audit and witness chains");
  common(fuse);
  bool audit = false;
  std::string fam_only;
  fuse->add_flag("--audit", audit, "check the catalogue against the U-class partition (q = 4)");
  fuse->add_option("--family", fam_only, "print one family");

  auto* cent = app.add_subcommand("centralizers", "class representatives and centralizer orders");
  common(cent);
  int klass = 0;
  cent->add_option("--class", klass, "class index 1..14")->check(CLI::Range(1, kClasses));

  std::string a_hex, b_hex;
  auto* mul = app.add_subcommand("mul", "product of two elements of U (hex coordinates)");
  common(mul);
  mul->add_option("a", a_hex)->required();
  mul->add_option("b", b_hex)->required();
  auto* conj = app.add_subcommand("conj", "b^-1 a b for a, b in U (hex coordinates)");
  common(conj);
  conj->add_option("a", a_hex)->required();
  conj->add_option("b", b_hex)->required();

  auto* weylc = app.add_subcommand("weyl", "Weyl group data");
  common(weylc, false);
  std::string orbits;
  bool classes = false;
  weylc->add_option("--orbits", orbits, "root tuple, e.g. 1,2");
  weylc->add_flag("--classes", classes, "conjugacy classes");

  auto* sums = app.add_subcommand("sums", "character sums over a family");
  common(sums);
  std::string chr, fam_key;
  sums->add_option("--char", chr, "linear:b1,b2,b3,b4 | q3half:s,t | chi567:d")->required();
  sums->add_option("--family", fam_key, "family key")->required();

  auto* decn = app.add_subcommand("decn", "inner products of the projective characters with the unipotent characters");
  common(decn);
  bool latex = false, csv = false, check = false;
  decn->add_flag("--latex", latex);
  decn->add_flag("--csv", csv);
  decn->add_flag("--check", check, "exit 4 when an entry differs from print");

  auto* wchar = app.add_subcommand("weylchar", "character table of W or a parabolic subgroup");
  common(wchar, false);
  std::string table = "W";
  wchar->add_option("--table", table, "W, A3 or a list of simple reflections");

  auto* hc = app.add_subcommand("hc", "Harish-Chandra induction of a projective of the A3 Hecke algebra");
  common(hc, false, false);
  int eta_index = 0;
  std::string levi;
  hc->add_option("--eta", eta_index, "eta index 1..5")->required();
  hc->add_option("--levi", levi, "simple reflections, e.g. 1,3,4")->required();

  auto* dl = app.add_subcommand("dl", "Deligne-Lusztig character R_w");
  common(dl, false);
  std::string w_text;
  dl->add_option("--w", w_text, "w0 | coxeter | word:1,2,3")->required();

  auto* solvec = app.add_subcommand("solve", "principal-block decomposition matrix");
  common(solvec);
  solvec->add_option("--ell", c.ell, "odd prime dividing q+1");

  auto* eta = app.add_subcommand("eta", "eta table maintenance");
  common(eta, false);
  bool reconstruct = false, validate = false;
  eta->add_flag("--reconstruct", reconstruct, "rebuild the table and write it");
  eta->add_flag("--validate", validate, "check degrees, the Green identity and integrality");

  auto* verify = app.add_subcommand("verify-all", "run the acceptance criteria");
  common(verify);
  int samples = 100;
  verify->add_option("--samples", samples, "random tuples per family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? kOk : kConfig;
  }

  try {
    if (c.threads < 1) throw InvalidInputError("--threads must be positive");
    if (c.ell < 0 || (c.ell && c.ell % 2 == 0)) throw InvalidInputError("ell must be odd");
    if (*fuse) return cmd_fuse(c, audit, fam_only);
    if (*cent) return cmd_centralizers(c, klass);
    if (*mul) return cmd_mul_conj(c, false, a_hex, b_hex);
    if (*conj) return cmd_mul_conj(c, true, a_hex, b_hex);
    if (*weylc) return cmd_weyl(c, orbits, classes);
    if (*sums) return cmd_sums(c, chr, fam_key);
    if (*decn) return cmd_decn(c, latex, csv, check);
    if (*wchar) return cmd_weylchar(c, table);
    if (*hc) return cmd_hc(c, eta_index, levi);
    if (*dl) return cmd_dl(c, w_text);
    if (*solvec) return cmd_solve(c);
    if (*eta) return cmd_eta(c, reconstruct, validate);
    if (*verify) return cmd_verify_all(c, samples);
  } catch (const InvalidInputError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kConfig;
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data: " << e.what() << "\n";
    return kData;
  } catch (const Error& e) {
    std::cerr << "mismatch: " << e.what() << "\n";
    return kMismatch;
  }
  return kOk;
}
