#include <doctest.h>

#include <optional>

#include "lbox/check.hpp"
#include "lbox/parse.hpp"
#include "lbox/rewrite.hpp"
#include "support/corpus.hpp"

using namespace lbox;

namespace {

template <class F>
std::optional<ErrKind> thrown(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind;
  }
  return std::nullopt;
}

// every (name, level) pair of a base occurrence in the judgment's types,
// including binder annotations
void collect_bases(const TypeP& t, std::vector<std::pair<std::string, int>>& out) {
  if (auto* b = std::get_if<TBase>(&t->v)) {
    out.push_back({b->name, b->level});
    return;
  }
  if (auto* a = std::get_if<TArrow>(&t->v)) {
    collect_bases(a->dom, out);
    collect_bases(a->cod, out);
    return;
  }
  if (auto* p = std::get_if<TProd>(&t->v)) {
    collect_bases(p->fst, out);
    collect_bases(p->snd, out);
    return;
  }
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    for (const auto& h : c->hyps) collect_bases(h, out);
    collect_bases(c->body, out);
    return;
  }
  if (auto* d = std::get_if<TDBox>(&t->v)) collect_bases(d->body, out);
}

// context and subject types only: binder annotations are stamped during
// checking, so their level violations surface through check instead
bool bases_in_signature(const Judgment& j, const Signature& sig) {
  std::vector<std::pair<std::string, int>> occ;
  for (const auto& f : j.stack.frames)
    for (const auto& h : f) collect_bases(h.type, occ);
  collect_bases(j.type, occ);
  for (const auto& [nm, lv] : occ) {
    auto it = sig.find(nm);
    if (it == sig.end() || !it->second.count(lv)) return false;
  }
  return true;
}

bool checks(SystemMode m, const Judgment& j) {
  try {
    check(m, j);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

TEST_SUITE("checker") {

TEST_CASE("distribution axiom checks at level 1") {
  Judgment j = parse_judgment(
      ". |- \\x.\\y. quo ((unq x)(unq y)) : [](A -> B) -> []A -> []B @ 1");
  DerivP d = check(SystemMode::fitch, j);
  REQUIRE(d != nullptr);
  CHECK(d->rule == RuleName::Abs);
  CHECK(judgment_alpha_eq(d->conclusion, j));
}

TEST_CASE("variables resolve in the rightmost frame only") {
  Judgment ok = parse_judgment("x:A |- x : A @ 0");
  DerivP d = check(SystemMode::fitch, ok);
  CHECK(d->rule == RuleName::Var);

  Judgment high = parse_judgment("x:A ; . |- x : A @ 0");
  CHECK(thrown([&] { check(SystemMode::fitch, high); }) ==
        ErrKind::VariableNotInScope);
}

TEST_CASE("hypothesis-binding quotation is a direct rule instance") {
  Judgment j = parse_judgment(". |- quo [x:A] x : [A]A @ 1");
  DerivP d = check(SystemMode::fitch, j);
  CHECK(d->rule == RuleName::CQuo);
  REQUIRE(d->premises.size() == 1);
  // the premise is exactly the variable judgment one level down
  CHECK(judgment_alpha_eq(d->premises[0]->conclusion,
                          parse_judgment("x:A |- x : A @ 0")));
}

TEST_CASE("level inference picks the minimal level") {
  Signature sig{{"A", {0}}, {"B", {0}}};
  Judgment j = parse_judgment(
      ". |- \\x.\\y. quo ((unq x)(unq y)) : [](A -> B) -> []A -> []B");
  auto [leveled, d] = infer_levels(j, sig);
  CHECK(leveled.level == 1);
  CHECK(judgment_alpha_eq(
      leveled,
      parse_judgment(
          ". |- \\x.\\y. quo ((unq x)(unq y)) : [](A -> B) -> []A -> []B @ 1")));
  // erasing recovers the input
  CHECK(judgment_alpha_eq(erase_levels(leveled), j));
  CHECK(d != nullptr);
}

TEST_CASE("level inference follows a single signature anchor") {
  Signature sig{{"A", {3}}};
  auto [leveled, d] = infer_levels(parse_judgment("x:A |- x : A"), sig);
  CHECK(leveled.level == 3);
  CHECK(d->rule == RuleName::Var);
}

TEST_CASE("conflicting anchors are unsatisfiable") {
  // the hypothesis pins the root at 2 while the doubly boxed component
  // needs its base two levels down, also at 2
  Judgment j = parse_judgment("y:A |- quo (quo (\\x:A. x)) : [][](A -> A)");
  Signature sig{{"A", {2}}};
  CHECK(thrown([&] { infer_levels(j, sig); }) == ErrKind::Unsatisfiable);

  // brute-force oracle: no level up to 6 both checks and stays inside the
  // signature
  for (int l = 0; l <= 6; ++l) {
    Judgment st = stamp_judgment(j, l);
    if (!well_formed(st)) continue;
    CHECK_FALSE((checks(SystemMode::fitch, st) && bases_in_signature(st, sig)));
  }

  // widening the signature makes level 2 admissible
  Signature wide{{"A", {0, 2}}};
  auto [leveled, d] = infer_levels(j, wide);
  CHECK(leveled.level == 2);
  CHECK(bases_in_signature(leveled, wide));
}

TEST_CASE("a base missing from the signature is unsatisfiable") {
  Signature sig{{"A", {0}}};
  CHECK(thrown([&] { infer_levels(parse_judgment("x:C |- x : C"), sig); }) ==
        ErrKind::Unsatisfiable);
}

TEST_CASE("level inference round trips over a corpus") {
  Signature sig = corpus::wide_signature();
  for (const auto& j : corpus::gen_typed_corpus(31, 120)) {
    Judgment er = erase_judgment(j);
    auto [st, d] = infer_levels(er, sig);
    CHECK(judgment_alpha_eq(erase_judgment(st), er));
    CHECK(d != nullptr);
    // minimality: one level lower breaks well-formedness, checking, or the
    // signature
    if (st.level >= 1) {
      Judgment lower = stamp_judgment(er, st.level - 1);
      CHECK_FALSE((well_formed(lower) && checks(SystemMode::fitch, lower) &&
                   bases_in_signature(lower, sig)));
    }
  }
}

TEST_CASE("weakening inserts a hypothesis and keeps the term") {
  DerivP d = check(SystemMode::fitch, parse_judgment("x:A |- x : A @ 0"));
  StructData s;
  s.frame = 0;
  s.pos = 1;
  s.hyp = Hyp{"y", t_base("B", 0)};
  DerivP w = derive_structural(StructRule::weaken, d, s);
  CHECK(judgment_alpha_eq(w->conclusion,
                          parse_judgment("x:A, y:B |- x : A @ 0")));
  CHECK(checks(SystemMode::fitch, w->conclusion));
}

TEST_CASE("exchange swaps two hypotheses") {
  DerivP d =
      check(SystemMode::fitch, parse_judgment("u:A, v:B |- (u, v) : A * B @ 0"));
  StructData s;
  s.frame = 0;
  s.pos = 0;
  s.pos2 = 1;
  DerivP e = derive_structural(StructRule::exchange, d, s);
  CHECK(judgment_alpha_eq(e->conclusion,
                          parse_judgment("v:B, u:A |- (u, v) : A * B @ 0")));
  CHECK(checks(SystemMode::fitch, e->conclusion));
}

TEST_CASE("contraction merges duplicate hypotheses and renames uses") {
  DerivP d =
      check(SystemMode::fitch, parse_judgment("u:A, v:A |- (u, v) : A * A @ 0"));
  StructData s;
  s.frame = 0;
  s.pos = 0;
  s.pos2 = 1;
  DerivP c = derive_structural(StructRule::contract, d, s);
  CHECK(judgment_alpha_eq(c->conclusion,
                          parse_judgment("u:A |- (u, u) : A * A @ 0")));
  CHECK(checks(SystemMode::fitch, c->conclusion));
}

TEST_CASE("substitution into a higher frame checks the argument one level up") {
  // the substituted hypothesis sits one frame above the subject, so its
  // replacement must be a level-1 term of the boxed type
  DerivP d = check(SystemMode::fitch,
                   parse_judgment("x:[]Unit ; . |- unq x : Unit @ 0"));
  StructData s;
  s.frame = 1;
  s.substVar = "x";
  s.substArg = parse_term("quo ()");
  DerivP r = derive_structural(StructRule::subst, d, s);
  CHECK(judgment_alpha_eq(r->conclusion,
                          parse_judgment(". ; . |- unq (quo ()) : Unit @ 0")));
  CHECK(alpha_eq(normalize(r->conclusion.term), star()));

  // an argument of the wrong type is rejected
  StructData bad = s;
  bad.substArg = parse_term("()");
  CHECK(thrown([&] { derive_structural(StructRule::subst, d, bad); }).has_value());
}

TEST_CASE("substitution may use hypotheses left of the replaced one") {
  DerivP d = check(SystemMode::fitch,
                   parse_judgment("a:A, y:B, x:A |- (x, y) : A * B @ 0"));
  StructData s;
  s.frame = 0;
  s.substVar = "x";
  s.substArg = v_("a");
  DerivP r = derive_structural(StructRule::subst, d, s);
  CHECK(judgment_alpha_eq(r->conclusion,
                          parse_judgment("a:A, y:B |- (a, y) : A * B @ 0")));
}

TEST_CASE("structural transformations reject bad frame indices") {
  DerivP d = check(SystemMode::fitch, parse_judgment("x:A |- x : A @ 0"));
  StructData s;
  s.frame = 3;
  CHECK(thrown([&] { derive_structural(StructRule::weaken, d, s); }) ==
        ErrKind::FrameIndexOutOfRange);
}

TEST_CASE("a closed box at the next level yields a splice one level down") {
  DerivP d = check(SystemMode::fitch,
                   parse_judgment(". |- quo (\\x. x) : [](A -> A) @ 1"));
  DerivP dn = denecessitate(d);
  CHECK(judgment_alpha_eq(
      dn->conclusion,
      parse_judgment(". ; . |- unq (quo (\\x. x)) : A -> A @ 0")));
  CHECK(checks(SystemMode::fitch, dn->conclusion));
  CHECK(alpha_eq(normalize(dn->conclusion.term),
                 parse_term("\\x. x")));
}

TEST_CASE("denecessitation needs a closed plain box") {
  DerivP open = check(SystemMode::fitch, parse_judgment("m:[]A |- m : []A @ 1"));
  CHECK(thrown([&] { denecessitate(open); }) == ErrKind::NotClosedBox);

  DerivP nonBox =
      check(SystemMode::fitch, parse_judgment(". |- \\x:A. x : A -> A @ 1"));
  CHECK(thrown([&] { denecessitate(nonBox); }) == ErrKind::NotClosedBox);
}

TEST_CASE("structural rules are inhabited for the contextual box") {
  auto out = structural_inhabitants({t_base("A"), t_base("B")}, t_base("A"));
  REQUIRE(out.size() == 4);

  CHECK(type_eq(out[0].second, parse_type("[A]A -> [A,B]A")));
  CHECK(type_eq(out[1].second, parse_type("[A,B,B]A -> [A,B]A")));
  CHECK(type_eq(out[2].second, parse_type("[A,B]A -> [B,A]A")));
  CHECK(type_eq(out[3].second, parse_type("[A]B -> [A,B]A -> [A]A")));

  // weakening discards the extra binder before splicing
  TermP weak = lam("m", quo({Binder{"x1", std::nullopt}, Binder{"y", std::nullopt}},
                            unq(v_("m"), {v_("x1")})));
  CHECK(alpha_eq(out[0].first, weak));

  for (const auto& [tm, ty] : out) {
    Judgment j{ContextStack{{Frame{}}}, 1, tm, stamp_type(ty, 1)};
    CHECK(checks(SystemMode::fitch, j));
  }
}

TEST_CASE("structural inhabitants check for assorted contexts and levels") {
  std::vector<std::vector<TypeP>> ctxs = {
      {t_base("B")},
      {t_base("A"), t_base("B")},
      {t_prod(t_base("A"), t_base("B")), t_unit(), t_base("B")},
  };
  for (const auto& ctx : ctxs) {
    auto out = structural_inhabitants(ctx, t_base("A"));
    REQUIRE(out.size() == 4);
    for (int level : {1, 2})
      for (const auto& [tm, ty] : out) {
        Judgment j{ContextStack{{Frame{}}}, level, tm, stamp_type(ty, level)};
        CHECK(checks(SystemMode::fitch, j));
      }
  }
  CHECK(thrown([&] { structural_inhabitants({}, t_base("A")); }) ==
        ErrKind::BadInput);
}

TEST_CASE("single-frame unleveled judgments check without levels") {
  Judgment j = parse_judgment("x:A |- x : A");
  DerivP d = check(SystemMode::gentzen, j);
  CHECK(d->rule == RuleName::Var);

  // the mixed box rule: arguments are boxes, the body lives in a fresh
  // frame of their contents
  Judgment k = parse_judgment(
      "x:[](A -> B), y:[]A |- gbox [u = x, v = y] in (u v) : []B");
  DerivP dk = check(SystemMode::gentzen, k);
  CHECK(dk->rule == RuleName::GBox);
  REQUIRE(dk->premises.size() == 3);
}

TEST_CASE("single-frame mode rejects what it cannot say") {
  CHECK(thrown([&] {
          check(SystemMode::gentzen, parse_judgment("x:A |- x : A @ 0"));
        }) == ErrKind::ModeViolation);
  CHECK(thrown([&] {
          check(SystemMode::gentzen, parse_judgment("x:A ; . |- x : A"));
        }) == ErrKind::ModeViolation);
  CHECK(thrown([&] {
          check(SystemMode::gentzen, parse_judgment(". |- quo () : []Unit"));
        }) == ErrKind::ModeViolation);
  CHECK(thrown([&] {
          check(SystemMode::gentzen, parse_judgment("m:[A]A |- m : [A]A"));
        }) == ErrKind::ModeViolation);
}

TEST_CASE("two-zone mode introduces its box against the modal frame") {
  Judgment j = parse_judgment("u:A ; v:B |- dbox u : dbox A @ 0");
  DerivP d = check(SystemMode::dual, j);
  CHECK(d->rule == RuleName::DBoxI);
  REQUIRE(d->premises.size() == 1);
  // the premise moves the modal frame into subject position one level up
  CHECK(judgment_alpha_eq(d->premises[0]->conclusion,
                          parse_judgment(". ; u:A |- u : A @ 1")));

  Judgment e = parse_judgment(
      ". ; m:dbox A |- dlet x = m in dbox x : dbox A @ 0");
  DerivP de = check(SystemMode::dual, e);
  CHECK(de->rule == RuleName::DBoxE);
  REQUIRE(de->premises.size() == 2);

  CHECK(thrown([&] {
          check(SystemMode::dual, parse_judgment("x:A |- x : A @ 0"));
        }) == ErrKind::ModeViolation);
  CHECK(thrown([&] {
          check(SystemMode::dual,
                parse_judgment(". ; . |- quo () : []Unit @ 1"));
        }) == ErrKind::ModeViolation);
}

TEST_CASE("stacked mode pops a frame to introduce its box") {
  Judgment j = parse_judgment(". ; x:A ; . |- dbox x : dbox A @ 0");
  DerivP d = check(SystemMode::multi, j);
  CHECK(d->rule == RuleName::MBoxI);
  CHECK(judgment_alpha_eq(d->premises[0]->conclusion,
                          parse_judgment(". ; x:A |- x : A @ 1")));

  // the eliminator binds one frame up, so the bound code is only reachable
  // by boxing again
  Judgment e = parse_judgment(
      ". ; . ; m:dbox A |- dlet x = m in dbox x : dbox A @ 0");
  DerivP de = check(SystemMode::multi, e);
  CHECK(de->rule == RuleName::MBoxE);
  REQUIRE(de->premises.size() == 2);
  CHECK(de->premises[1]->conclusion.stack.frames[1].size() == 1);
  CHECK(de->premises[1]->conclusion.stack.frames[1][0].name == "x");
}

TEST_CASE("combined mode accepts both box families at once") {
  Judgment j = parse_judgment(
      ". ; . |- (quo (), dbox ()) : []Unit * dbox Unit @ 1");
  DerivP d = check(SystemMode::benton, j);
  CHECK(d->rule == RuleName::Pair);

  CHECK(thrown([&] { check(SystemMode::fitch, j); }) == ErrKind::ModeViolation);
  CHECK(thrown([&] { check(SystemMode::multi, j); }) == ErrKind::ModeViolation);
}

TEST_CASE("generated judgments all check and re-check") {
  for (const auto& j : corpus::gen_typed_corpus(32, 150)) {
    DerivP d;
    REQUIRE_NOTHROW(d = check(SystemMode::fitch, j));
    CHECK(judgment_alpha_eq(d->conclusion, j));
  }
}

} // TEST_SUITE
