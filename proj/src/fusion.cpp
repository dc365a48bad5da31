#include "d4/fusion.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace d4 {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::vector<int> parse_roots(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) out.push_back(std::stoi(t));
  return out;
}

// Image of x under the diagram automorphism applied `power` times.
UnipotentElement triality_image(const UnipotentElement& x, int power) {
  const auto& rs = root_system();
  Word w;
  for (auto [r, t] : x.word()) {
    int s = r;
    for (int i = 0; i < ((power % 3) + 3) % 3; ++i) s = rs.triality(s);
    w.emplace_back(s, t);
  }
  return UnipotentElement::from_word(x.field(), w);
}

Elem need(const UnipotentElement& x, int r) {
  const Elem v = x.coord(r);
  if (v == 0) throw RuleInapplicableError("coordinate " + std::to_string(r) + " vanishes");
  return v;
}

// Coordinate k of x^{x_s(c)} as a polynomial of degree <= 2 in c; returns c with value target.
Elem solve_coordinate(const UnipotentElement& x, int k, int s, Elem target) {
  const FieldSpec& F = *x.field();
  auto value = [&](Elem c) {
    return raw::conj_root(F, x.coords(), s, c)[k];
  };
  const Elem f0 = value(0);
  if (f0 == target) return 0;
  const Elem f1 = value(1);
  const Elem g = 2;  // outside {0, 1} since q >= 4
  const Elem fg = value(g);
  // f(c) = f0 + l c + m c^2:  f1 - f0 = l + m,  fg - f0 = l g + m g^2.
  const Elem d1 = f1 ^ f0, dg = fg ^ f0;
  const Elem m = F.div(dg ^ F.mul(g, d1), F.mul(g, g ^ 1));
  const Elem l = d1 ^ m;
  const Elem rhs = f0 ^ target;  // need l c + m c^2 = rhs
  std::optional<Elem> c;
  if (m == 0) {
    if (l == 0) throw RuleInapplicableError("coordinate " + std::to_string(k) + " does not depend on x_" +
                                            std::to_string(s));
    c = F.div(rhs, l);
  } else if (l == 0) {
    c = F.sqrt(F.div(rhs, m));
  } else {
    c = F.artin_schreier(m, l, rhs);
  }
  if (!c || value(*c) != target)
    throw RuleInapplicableError("cannot set coordinate " + std::to_string(k) + " by conjugating with x_" +
                                std::to_string(s));
  return *c;
}

int first_w(const std::vector<int>& support, const std::vector<int>& target) {
  const auto c = weyl().carriers(support, target);
  if (c.empty()) {
    std::string s;
    for (int r : support) s += std::to_string(r) + " ";
    throw RuleInapplicableError("no Weyl element sends the support [" + s + "] to the requested tuple");
  }
  return c.front();
}

// Least w mapping the support set onto the target set.
int first_w_set(const std::vector<int>& support, std::vector<int> target) {
  std::sort(target.begin(), target.end());
  if (support.size() == target.size())
    for (int w = 0; w < weyl().order(); ++w) {
      std::vector<int> img;
      for (int r : support) img.push_back(weyl().element(w).apply(r));
      std::sort(img.begin(), img.end());
      if (img == target) return w;
    }
  throw RuleInapplicableError("no Weyl element sends the support onto the requested set");
}

}  // namespace

std::vector<UnipotentClass> class_reps(const Field& field) {
  const Elem mu = field->fix_mu();
  struct Row {
    Word word;
    const char* cg;
    const char* text;
  };
  const std::vector<Row> rows = {
      {{}, "q^12(q^2-1)(q^4-1)^2(q^6-1)", "1"},
      {{{1, 1}}, "q^12(q^2-1)^3", "x1(1)"},
      {{{1, 1}, {2, 1}}, "q^10(q^2-1)(q^4-1)", "x1(1)x2(1)"},
      {{{1, 1}, {4, 1}}, "q^10(q^2-1)(q^4-1)", "x1(1)x4(1)"},
      {{{2, 1}, {4, 1}}, "q^10(q^2-1)(q^4-1)", "x2(1)x4(1)"},
      {{{1, 1}, {2, 1}, {4, 1}}, "q^10(q^2-1)", "x1(1)x2(1)x4(1)"},
      {{{3, 1}, {1, 1}}, "2q^8(q-1)^2", "x3(1)x1(1)"},
      {{{1, 1}, {2, 1}, {4, 1}, {10, 1}, {12, mu}}, "2q^8(q+1)^2", "x1(1)x2(1)x4(1)x10(1)x12(mu)"},
      {{{3, 1}, {1, 1}, {2, 1}}, "q^6(q^2-1)", "x3(1)x1(1)x2(1)"},
      {{{3, 1}, {1, 1}, {4, 1}}, "q^6(q^2-1)", "x3(1)x1(1)x4(1)"},
      {{{3, 1}, {2, 1}, {4, 1}}, "q^6(q^2-1)", "x3(1)x2(1)x4(1)"},
      {{{3, 1}, {1, 1}, {2, 1}, {10, 1}}, "q^6", "x3(1)x1(1)x2(1)x10(1)"},
      {{{3, 1}, {1, 1}, {2, 1}, {4, 1}}, "2q^4", "x3(1)x1(1)x2(1)x4(1)"},
      {{{3, 1}, {1, 1}, {2, 1}, {4, 1}, {10, mu}}, "2q^4", "x3(1)x1(1)x2(1)x4(1)x10(mu)"},
  };
  std::vector<UnipotentClass> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.push_back({static_cast<int>(i) + 1, UnipotentElement::from_word(field, rows[i].word),
                   QPoly::parse(rows[i].cg), rows[i].text});
  return out;
}

QPoly group_order() { return QPoly::parse("q^12(q^2-1)(q^4-1)^2(q^6-1)"); }

QPoly class_count_poly() { return QPoly::parse("2q^5+8q^4-16q^3+14q^2-10q+3"); }

UnipotentElement apply_move(const Move& m, const UnipotentElement& x) {
  switch (m.kind) {
    case Move::Weyl:
      return conj_weyl(x, m.w);
    case Move::Torus:
      return conj_torus(x, m.h);
    case Move::Unip:
      return conj_unip(x, UnipotentElement::from_word(x.field(), m.u));
  }
  return x;
}

bool replay(const Witness& w) {
  UnipotentElement x = w.start;
  for (const auto& m : w.moves) x = apply_move(m, x);
  return x == w.end && x == class_reps(x.field())[w.k - 1].rep;
}

TorusElement torus_witness(int k, const UnipotentElement& x) {
  const FieldSpec& F = *x.field();
  auto om = [&](int r) { return F.sqrt(need(x, r)); };
  auto a = [&](int r) { return need(x, r); };
  auto make = [&](Elem t1, Elem t2, Elem t3, Elem t4) { return TorusElement::make(F, {t1, t2, t3, t4}); };
  switch (k) {
    case 2:
      return make(om(1), 1, 1, 1);
    case 3:
      return make(om(1), om(2), 1, 1);
    case 6:
      return make(om(1), om(2), 1, om(4));
    case 7:
      return make(om(1), F.inv(a(3)), 1, F.inv(om(1)));
    case 8: {
      const Elem t1 = F.div(F.mul(a(1), a(10)), F.mul(om(2), om(4)));
      const Elem t2 = F.div(F.mul(a(10), om(1)), om(4));
      const Elem t3 = F.div(F.mul(a(1), F.sqr(a(10))), F.mul(a(2), a(4)));
      const Elem t4 = F.div(F.mul(a(10), om(1)), om(2));
      return make(t1, t2, t3, t4);
    }
    case 9:
      return make(om(1), om(2), 1, F.inv(F.mul(F.mul(om(1), om(2)), a(3))));
    case 12: {
      const Elem t1 = F.mul(F.mul(a(1), om(3)), om(10));
      const Elem t2 = F.mul(F.mul(om(1), om(2)), F.mul(om(3), om(10)));
      const Elem t3 = F.mul(F.mul(a(1), a(3)), a(10));
      const Elem t4 = F.div(F.mul(a(10), om(1)), om(2));
      return make(t1, t2, t3, t4);
    }
    case 13:
    case 14: {
      const Elem t1 = F.mul(F.mul(a(1), om(2)), F.mul(a(3), om(4)));
      const Elem t2 = F.mul(F.mul(om(1), a(2)), F.mul(a(3), om(4)));
      const Elem t3 = F.mul(F.mul(a(1), a(2)), F.mul(F.sqr(a(3)), a(4)));
      const Elem t4 = F.mul(F.mul(om(1), om(2)), F.mul(a(3), a(4)));
      return make(t1, t2, t3, t4);
    }
    case 4:
    case 5:
    case 10:
    case 11: {
      // Pull back along the diagram automorphism, solve there, push the torus element forward.
      const int power = (k == 4 || k == 10) ? 1 : 2;
      const int base = k <= 5 ? 3 : 9;
      const TorusElement h = torus_witness(base, triality_image(x, 3 - power));
      TorusElement g;
      const auto& rs = root_system();
      for (int i = 1; i <= kRank; ++i) {
        int j = i;
        for (int p = 0; p < power; ++p) j = rs.triality(j);
        g.t[j - 1] = h.t[i - 1];
      }
      return g;
    }
    default:
      throw InvalidInputError("no torus normalization for class " + std::to_string(k));
  }
}

Word explicit_conjugator(const std::string& name, const UnipotentElement& x) {
  const FieldSpec& F = *x.field();
  auto a = [&](int r) { return need(x, r); };
  auto mul = [&](std::initializer_list<Elem> v) {
    Elem p = 1;
    for (Elem e : v) p = F.mul(p, e);
    return p;
  };
  if (name == "k6") {
    const Elem w = F.sqrt(F.div(mul({a(1), a(12)}), mul({a(2), a(4)})));
    return {{5, w},
            {6, F.div(mul({a(2), w}), a(1))},
            {7, F.div(mul({a(4), w}), a(1))},
            {10, F.div(mul({a(2), a(4), w}), a(1))}};
  }
  if (name == "k7a") return {{6, F.div(a(8), a(1))}};
  if (name == "k7d") return {{9, F.div(mul({a(1), a(12)}), mul({a(2), a(5)}))}, {10, F.div(a(12), a(5))}};
  if (name == "k7e") return {{1, F.div(a(11), a(10))}, {2, F.div(mul({a(6), a(11)}), mul({a(5), a(10)}))}};
  if (name == "as0" || name == "asmu") {
    const Elem a5 = a(5), a6 = a(6), a7 = a(7), a10 = a(10), c = x.coord(11);
    const Elem target = name == "as0" ? 0 : F.div(mul({a5, a10, a10, F.fix_mu()}), mul({a6, a7}));
    const auto t = F.artin_schreier(mul({a5, a6, a7}), mul({a5, a10}), c ^ target);
    if (!t) throw RuleInapplicableError("Artin-Schreier equation has no root (trace 1)");
    return {{1, mul({a5, *t})}, {2, mul({a6, *t})}, {4, mul({a7, *t})}, {8, mul({a5, a6, *t})}};
  }
  if (name == "k9") return {{8, F.div(a(12), a(7))}};
  if (name == "k11") {
    const Elem s = F.div(a(6), a(2));
    return {{3, s}, {4, a(4)}, {6, mul({a(2), s})}, {10, mul({a(2), a(4), s})}};
  }
  if (name == "k12") return {{3, F.div(a(6), a(2))}};
  if (name == "k12b") return {{3, F.div(a(7), a(4))}};
  throw InvalidInputError("unknown conjugator '" + name + "'");
}

Witness run_recipe(const std::string& recipe, int target_k, const UnipotentElement& x) {
  Witness wit;
  wit.k = target_k;
  wit.start = x;
  UnipotentElement cur = x;
  const auto& rs = root_system();
  auto push_unip = [&](const std::string& step, Word u) {
    Move m;
    m.kind = Move::Unip;
    m.step = step;
    m.u = std::move(u);
    cur = apply_move(m, cur);
    wit.moves.push_back(std::move(m));
  };
  for (const auto& tok : split(recipe, ' ')) {
    const std::string arg = tok.size() > 2 ? tok.substr(2) : "";
    if (tok[0] == 'W' || tok[0] == 'S') {
      Move m;
      m.kind = Move::Weyl;
      m.step = tok;
      m.w = tok[0] == 'W' ? first_w(cur.support(), parse_roots(arg)) : first_w_set(cur.support(), parse_roots(arg));
      cur = apply_move(m, cur);
      wit.moves.push_back(std::move(m));
    } else if (tok[0] == 'K') {
      const auto at = arg.find('@');
      const int k = std::stoi(arg.substr(0, at)), s = std::stoi(arg.substr(at + 1));
      push_unip(tok, {{s, solve_coordinate(cur, k, s, 0)}});
    } else if (tok[0] == 'N') {
      const auto keep = parse_roots(arg);
      for (int guard = 0;; ++guard) {
        if (guard > 24) throw RuleInapplicableError("normalization to [" + arg + "] does not terminate");
        int k = 0;
        for (int h = 1; h <= 5 && !k; ++h)
          for (int r : RootSystemD4::canonical_order())
            if (cur.coord(r) && rs.root(r).height() == h && std::find(keep.begin(), keep.end(), r) == keep.end()) {
              k = r;
              break;
            }
        if (!k) break;
        bool done = false;
        for (int i : keep) {
          if (!cur.coord(i)) continue;
          Coeffs c = rs.root(k).coeffs;
          for (int t = 0; t < kRank; ++t) c[t] -= rs.root(i).coeffs[t];
          const int s = rs.find(c);
          if (!RootSystemD4::positive(s)) continue;
          try {
            push_unip(tok, {{s, solve_coordinate(cur, k, s, 0)}});
            done = true;
            break;
          } catch (const RuleInapplicableError&) {
          }
        }
        if (!done) throw RuleInapplicableError("no pivot kills coordinate " + std::to_string(k));
      }
    } else if (tok[0] == 'U') {
      push_unip(tok, explicit_conjugator(arg, cur));
    } else if (tok == "T") {
      Move m;
      m.kind = Move::Torus;
      m.step = tok;
      m.h = torus_witness(target_k, cur);
      cur = apply_move(m, cur);
      wit.moves.push_back(std::move(m));
    } else {
      throw InvalidInputError("bad recipe token '" + tok + "'");
    }
  }
  wit.end = cur;
  return wit;
}

Witness canonicalize(const FamilySpec& fam, const UnipotentElement& x) {
  Witness wit = run_recipe(fam.recipe, fam.target_k, x);
  const UnipotentElement& cur = wit.end;
  const auto& target = class_reps(x.field())[fam.target_k - 1].rep;
  if (cur != target)
    throw FusionMismatchError(fam.key + ": chain ends at " + cur.to_string() + " instead of u_" +
                              std::to_string(fam.target_k) + " = " + target.to_string());
  return wit;
}

std::vector<UnipotentElement> instances(const FamilySpec& fam, const Field& field) {
  std::vector<UnipotentElement> out;
  const std::size_t n = fam.params.size();
  const Elem r = field->q() - 1;
  std::vector<Elem> p(n, 1);
  for (;;) {
    if (auto w = fam.word(*field, p)) out.push_back(UnipotentElement::from_word(field, *w));
    std::size_t i = 0;
    while (i < n && p[i] == r) p[i++] = 1;
    if (i == n) break;
    ++p[i];
  }
  return out;
}

UnipotentElement random_instance(const FamilySpec& fam, const Field& field, std::mt19937_64& rng) {
  std::uniform_int_distribution<Elem> d(1, field->q() - 1);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Elem> p(fam.params.size());
    for (auto& v : p) v = d(rng);
    if (auto w = fam.word(*field, p)) return UnipotentElement::from_word(field, *w);
  }
  throw DataError("no admissible parameters found for " + fam.key);
}

std::uint32_t UPartition::index(const UnipotentElement& x) {
  if (x.field()->q() != 4) throw RefusalError("the U partition is tabulated at q = 4 only");
  std::uint32_t idx = 0;
  for (int r = kPositiveRoots; r >= 1; --r) idx = (idx << 2) | x.coord(r);
  return idx;
}

UPartition partition_U_q4() {
  const Field field = make_field(2);
  const FieldSpec& F = *field;
  constexpr std::uint32_t N = 1u << 24;
  constexpr std::uint16_t kUnset = 0xffff;
  UPartition P;
  P.class_of.assign(N, kUnset);
  std::vector<std::uint32_t> queue;
  auto decode = [](std::uint32_t idx) {
    Coords c{};
    for (int r = 1; r <= kPositiveRoots; ++r, idx >>= 2) c[r] = idx & 3;
    return c;
  };
  auto encode = [](const Coords& c) {
    std::uint32_t idx = 0;
    for (int r = kPositiveRoots; r >= 1; --r) idx = (idx << 2) | c[r];
    return idx;
  };
  for (std::uint32_t s = 0; s < N; ++s) {
    if (P.class_of[s] != kUnset) continue;
    const auto id = static_cast<std::uint16_t>(P.classes++);
    if (P.classes >= kUnset) throw DataError("too many classes for the partition table");
    P.class_of[s] = id;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Coords c = decode(queue[h]);
      // x_i(1), x_i(w) for the simple roots generate U.
      for (int i = 1; i <= kRank; ++i)
        for (Elem t : {Elem(1), Elem(2)}) {
          const std::uint32_t j = encode(raw::conj_root(F, c, i, t));
          if (P.class_of[j] == kUnset) {
            P.class_of[j] = id;
            queue.push_back(j);
          }
        }
    }
    P.size.push_back(static_cast<std::uint32_t>(queue.size()));
  }
  return P;
}

FusionReport fusion_table(const Field& field, const UPartition* partition) {
  FusionReport rep;
  rep.q = static_cast<int>(field->q());
  const mpq_class qq = field->q();
  rep.expected_classes = class_count_poly().eval(qq).get_num().get_ui();
  std::vector<std::uint8_t> hits;
  const bool audit = partition && field->q() == 4;
  if (audit) hits.assign(partition->classes, 0);
  const std::uint64_t order_u = std::uint64_t(1) << (field->degree() * kPositiveRoots);
  for (const auto& fam : catalogue()) {
    FamilyAudit fa;
    fa.key = fam.key;
    fa.target_k = fam.target_k;
    fa.expected_count = fam.count.eval(qq).get_num().get_ui();
    fa.cu_presumed = fam.cu.eval(qq).get_num().get_ui();
    bool cu_consistent = true;
    for (const auto& x : instances(fam, field)) {
      ++fa.count;
      try {
        canonicalize(fam, x);
      } catch (const Error& e) {
        if (fa.witnesses_ok) fa.first_failure = x.to_string() + ": " + e.what();
        fa.witnesses_ok = false;
      }
      if (audit) {
        const auto id = partition->class_of[UPartition::index(x)];
        if (hits[id]++) ++rep.classes_hit_twice;
        const std::uint64_t cu = order_u / partition->size[id];
        if (fa.count == 1)
          fa.cu_observed = cu;
        else if (fa.cu_observed != cu)
          cu_consistent = false;
      }
    }
    if (!cu_consistent) fa.cu_observed = 0;
    rep.total_instances += fa.count;
    if (fa.count != fa.expected_count)
      rep.discrepancies.push_back(fam.key + ": " + std::to_string(fa.count) + " members, count polynomial gives " +
                                  std::to_string(fa.expected_count));
    if (!fa.witnesses_ok) rep.discrepancies.push_back(fam.key + ": witness failure " + fa.first_failure);
    if (audit && fa.cu_observed != fa.cu_presumed)
      rep.discrepancies.push_back(fam.key + ": |C_U| observed " + std::to_string(fa.cu_observed) + ", presumed " +
                                  std::to_string(fa.cu_presumed));
    rep.families.push_back(std::move(fa));
  }
  if (rep.total_instances != rep.expected_classes)
    rep.discrepancies.push_back("total members " + std::to_string(rep.total_instances) + " differ from " +
                                std::to_string(rep.expected_classes) + " classes");
  if (audit) {
    rep.partition_checked = true;
    for (int c = 0; c < partition->classes; ++c)
      if (hits[c]) {
        ++rep.classes_hit;
        rep.size_sum += partition->size[c];
      }
    if (rep.classes_hit != static_cast<std::uint64_t>(partition->classes))
      rep.discrepancies.push_back(std::to_string(partition->classes - rep.classes_hit) + " U-classes not represented");
    if (rep.classes_hit_twice) rep.discrepancies.push_back(std::to_string(rep.classes_hit_twice) + " duplicate hits");
    rep.partition_ok = rep.classes_hit == static_cast<std::uint64_t>(partition->classes) && !rep.classes_hit_twice &&
                       rep.size_sum == order_u;
  }
  return rep;
}

}  // namespace d4
