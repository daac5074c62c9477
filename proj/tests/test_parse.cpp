#include <doctest.h>

#include "lbox/parse.hpp"
#include "support/corpus.hpp"

using namespace lbox;

TEST_SUITE("parse") {

TEST_CASE("distribution axiom definition parses") {
  FileDecls f = parse_file(
      "def k : [](A -> B) -> []A -> []B = \\x.\\y. quo ((unq x)(unq y))\n");
  REQUIRE(f.defs.size() == 1);
  const DefDecl& d = f.defs[0];
  CHECK(d.name == "k");
  CHECK_FALSE(d.level.has_value());
  TermP want = lam("x", lam("y", quo(app(unq(v_("x")), unq(v_("y"))))));
  CHECK(alpha_eq(d.term, want));
  TypeP wantTy = t_arrow(t_cbox({}, t_arrow(t_base("A"), t_base("B"))),
                         t_arrow(t_cbox({}, t_base("A")), t_cbox({}, t_base("B"))));
  CHECK(type_eq(d.type, wantTy));
}

TEST_CASE("base declarations carry a level") {
  FileDecls f = parse_file("base A @ 0\nbase A @ 2\nbase B @ 1\n");
  REQUIRE(f.bases.size() == 3);
  CHECK(f.bases[0].name == "A");
  CHECK(f.bases[0].level == 0);
  CHECK(f.bases[1].level == 2);
  auto sig = f.signature();
  CHECK(sig["A"] == std::set<int>{0, 2});
  CHECK(sig["B"] == std::set<int>{1});
}

TEST_CASE("judgment lines parse frames right to left") {
  FileDecls f = parse_file("jdg . ; x:A, y:B |- x : A @ 0\n");
  REQUIRE(f.jdgs.size() == 1);
  const Judgment& j = f.jdgs[0].j;
  CHECK(j.stack.height() == 2);
  CHECK(j.stack.frames[0].empty());
  REQUIRE(j.stack.frames[1].size() == 2);
  CHECK(j.stack.frames[1][0].name == "x");
  CHECK(j.level == 0);
  // "@ 0" stamps every type in the judgment
  CHECK(type_level(j.stack.frames[1][1].type) == 0);
  CHECK(type_level(j.type) == 0);

  FileDecls g = parse_file("jdg x:A |- x : A\n");
  CHECK(g.jdgs[0].j.level == kUnleveled);
  CHECK(type_unleveled(g.jdgs[0].j.type));
}

TEST_CASE("type grammar: arrows right associate, products bind tighter") {
  CHECK(type_eq(parse_type("A -> B -> A"),
                t_arrow(t_base("A"), t_arrow(t_base("B"), t_base("A")))));
  CHECK(type_eq(parse_type("A * B -> A"),
                t_arrow(t_prod(t_base("A"), t_base("B")), t_base("A"))));
  CHECK(type_eq(parse_type("[A,B] A"),
                t_cbox({t_base("A"), t_base("B")}, t_base("A"))));
  CHECK(type_eq(parse_type("[] Unit"), t_cbox({}, t_unit())));
}

TEST_CASE("contextual term forms parse") {
  TermP q = parse_term("quo [x:A,y:B] (x, y)");
  const auto* qq = std::get_if<Quo>(&q->v);
  REQUIRE(qq != nullptr);
  REQUIRE(qq->binders.size() == 2);
  CHECK(qq->binders[0].name == "x");
  REQUIRE(qq->binders[0].ann.has_value());
  CHECK(type_eq(*qq->binders[0].ann, t_base("A")));

  TermP u = parse_term("unq m with [a, b]");
  const auto* uu = std::get_if<Unq>(&u->v);
  REQUIRE(uu != nullptr);
  CHECK(uu->args.size() == 2);

  CHECK(alpha_eq(parse_term("proj1 (a, b)"), proj1(pair_(v_("a"), v_("b")))));
  CHECK(alpha_eq(parse_term("()"), star()));
}

TEST_CASE("equation and model declarations parse") {
  FileDecls f = parse_file(
      "eq unq (quo (\\x.x)) = \\x.x @ 0\n"
      "eq (\\x:A.x) y = y : A @ 0\n"
      "model z2 2 A=2 B@1=1\n");
  REQUIRE(f.eqs.size() == 2);
  CHECK_FALSE(f.eqs[0].type.has_value());
  CHECK(f.eqs[0].level == 0);
  REQUIRE(f.eqs[1].type.has_value());
  REQUIRE(f.models.size() == 1);
  const ModelDecl& m = f.models[0];
  CHECK(m.monoid == "z2");
  CHECK(m.depth == 2);
  REQUIRE(m.vals.size() == 2);
  CHECK(m.vals[0].name == "A");
  CHECK_FALSE(m.vals[0].level.has_value());
  CHECK(m.vals[0].size == 2);
  CHECK(m.vals[1].level == 1);
}

TEST_CASE("comments and blank lines are skipped; errors carry the line") {
  FileDecls f = parse_file("# a comment\n\nbase A @ 0 # trailing\n");
  CHECK(f.bases.size() == 1);
  try {
    parse_file("base A @ 0\njdg x:A |- x :\n");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::SyntaxError);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("printed terms reparse alpha-equal") {
  // surface types carry no level stamps, so the reparse matches the
  // erased term
  for (const auto& j : corpus::gen_typed_corpus(21, 120)) {
    TermP printed = parse_term(show_term(j.term));
    CHECK(alpha_eq(printed, erase_term_levels(j.term)));
  }
}

TEST_CASE("printed judgments reparse exactly") {
  for (const auto& j : corpus::gen_typed_corpus(22, 80)) {
    Judgment back = parse_judgment(show_judgment(j));
    CHECK(judgment_alpha_eq(back, j));
  }
  corpus::GenOpts small;
  small.smallTypes = true;
  small.maxLevel = 1;
  for (const auto& j : corpus::gen_typed_corpus(23, 40, small)) {
    Judgment back = parse_judgment(show_judgment(j));
    CHECK(judgment_alpha_eq(back, j));
  }
}

} // TEST_SUITE
