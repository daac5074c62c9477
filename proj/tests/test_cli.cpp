#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lbox/driver.hpp"
#include "lbox/parse.hpp"

using namespace lbox;

namespace {

std::string write_theory(const std::string& name, const std::string& body) {
  std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("lbox_cli_" + name);
  std::ofstream f(p);
  f << body;
  return p.string();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

// the goal output format is "LABEL: judgment"; return the judgment part
std::string after_label(const std::string& out, const std::string& label) {
  for (const auto& l : lines_of(out))
    if (l.rfind(label + ": ", 0) == 0) return l.substr(label.size() + 2);
  return "";
}

const char* kGoals =
    "base A @ 0\n"
    "base B @ 0\n"
    "def k : [](A -> B) -> []A -> []B = \\f. \\a. quo ((unq f) (unq a))\n"
    "def w : [A]A = quo [x:A] x\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check accepts a theory file and reports each goal") {
  std::string file = write_theory("goals.thy", kGoals);
  std::ostringstream out, err;
  CHECK(cmd_check(file, "fitch", false, out, err) == 0);
  CHECK(out.str().find("ok k: ") != std::string::npos);
  CHECK(out.str().find("ok w: ") != std::string::npos);
  CHECK(err.str().empty());
}

TEST_CASE("check failures exit nonzero and name the error") {
  std::string file = write_theory("badgoal.thy", "jdg . |- x : A @ 0\n");
  std::ostringstream out, err;
  CHECK(cmd_check(file, "fitch", false, out, err) == 1);
  CHECK(err.str().find("jdg#1") != std::string::npos);
  CHECK(err.str().find("VariableNotInScope") != std::string::npos);
}

TEST_CASE("check routes modes") {
  std::string file =
      write_theory("dual.thy", "jdg u:A ; v:B |- dbox u : dbox A @ 0\n");
  std::ostringstream out, err;
  CHECK(cmd_check(file, "dual", false, out, err) == 0);
  std::ostringstream out2, err2;
  CHECK(cmd_check(file, "fitch", false, out2, err2) == 1);
  CHECK(err2.str().find("ModeViolation") != std::string::npos);
}

TEST_CASE("check emits derivations as JSON") {
  std::string file = write_theory("goals.thy", kGoals);
  std::ostringstream out, err;
  CHECK(cmd_check(file, "fitch", true, out, err) == 0);
  nlohmann::json arr = nlohmann::json::parse(out.str());
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 2);
  CHECK(arr[0]["rule"] == "Abs");
  CHECK(arr[1]["rule"] == "CQuo");
  std::function<void(const nlohmann::json&)> visit = [&](const nlohmann::json& n) {
    REQUIRE(n.contains("rule"));
    REQUIRE(n.contains("conclusion"));
    REQUIRE(n.contains("premises"));
    CHECK_NOTHROW(parse_judgment(n["conclusion"].get<std::string>()));
    for (const auto& p : n["premises"]) visit(p);
  };
  for (const auto& n : arr) visit(n);
}

TEST_CASE("levels prints the inferred level per goal") {
  std::string file = write_theory("goals.thy", kGoals);
  std::ostringstream out, err;
  CHECK(cmd_levels(file, out, err) == 0);
  CHECK(out.str().find("k: level 1: ") != std::string::npos);
  CHECK(out.str().find("w: level 1: ") != std::string::npos);

  // one base pinned to a level the term cannot satisfy
  std::string bad = write_theory(
      "badlevels.thy",
      "base A @ 2\nbase B @ 2\njdg y:A |- quo (quo (\\x:A. x)) : [][](A -> A)\n");
  std::ostringstream out2, err2;
  CHECK(cmd_levels(bad, out2, err2) == 1);
  CHECK(err2.str().find("Unsatisfiable") != std::string::npos);
}

TEST_CASE("normalize prints a normal form and respects the budget") {
  std::ostringstream out, err;
  CHECK(cmd_normalize("unq (quo (\\x:A. x))", 10000, out, err) == 0);
  CHECK(alpha_eq(parse_term(out.str()), parse_term("\\x:A. x")));

  std::ostringstream out2, err2;
  CHECK(cmd_normalize("(\\x. x x) (\\x. x x)", 50, out2, err2) == 1);
  CHECK(err2.str().find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("eq decides equation goals") {
  std::string file = write_theory(
      "eqs.thy",
      "base A @ 0\n"
      "eq unq (quo (\\x:A. x)) = \\x:A. x @ 0\n"
      "eq proj1 ((\\x:A. x), ()) = \\x:A. x\n"
      "eq \\f:A -> A. f = \\f:A -> A. \\x. f x : (A -> A) -> A -> A @ 0\n");
  std::ostringstream out, err;
  CHECK(cmd_eq(file, out, err) == 0);
  CHECK(out.str().find("pass eq#1") != std::string::npos);
  CHECK(out.str().find("pass eq#2") != std::string::npos);
  CHECK(out.str().find("pass eq#3") != std::string::npos);
}

TEST_CASE("eq separates distinct terms and flags undecidable goals") {
  std::string file = write_theory(
      "eqbad.thy",
      "base A @ 0\n"
      "eq \\x:A. \\y:A. x = \\x:A. \\y:A. y : A -> A -> A @ 0\n");
  std::ostringstream out, err;
  CHECK(cmd_eq(file, out, err) == 1);
  CHECK(out.str().find("fail eq#1") != std::string::npos);

  std::string und = write_theory(
      "equn.thy", "base A @ 0\neq \\x:A. x = \\y:A. quo (unq y)\n");
  std::ostringstream out2, err2;
  CHECK(cmd_eq(und, out2, err2) == 1);
  CHECK(err2.str().find("MissingAnnotation") != std::string::npos);
}

TEST_CASE("translate targets both other systems") {
  std::string file = write_theory("goals.thy", kGoals);

  std::ostringstream out, err;
  CHECK(cmd_translate(file, "gentzen", out, err) == 0);
  Judgment gk = parse_judgment(after_label(out.str(), "k"));
  CHECK(gk.level == kUnleveled);
  CHECK(type_eq(gk.type, parse_type("[](A -> B) -> []A -> []B")));
  CHECK_NOTHROW(check(SystemMode::gentzen, gk));
  Judgment gw = parse_judgment(after_label(out.str(), "w"));
  CHECK(type_eq(gw.type, parse_type("[](A -> A)")));
  CHECK_NOTHROW(check(SystemMode::gentzen, gw));

  std::ostringstream out2, err2;
  CHECK(cmd_translate(file, "lambda-box", out2, err2) == 0);
  Judgment dw = parse_judgment(after_label(out2.str(), "w"));
  CHECK(type_eq(dw.type, stamp_type(parse_type("[](A -> A)"), 1)));
  CHECK_NOTHROW(check(SystemMode::fitch, dw));

  std::ostringstream out3, err3;
  CHECK(cmd_translate(file, "prolog", out3, err3) == 1);
  CHECK(err3.str().find("BadInput") != std::string::npos);
}

TEST_CASE("translate refuses depth-zero splices") {
  std::string file =
      write_theory("untrans.thy", "jdg x:[]A ; . |- unq x : A @ 0\n");
  std::ostringstream out, err;
  CHECK(cmd_translate(file, "gentzen", out, err) == 1);
  CHECK(err.str().find("UnsupportedConstruct") != std::string::npos);
}

TEST_CASE("model sweeps judgments and equations in a finite tower") {
  std::string csv =
      (std::filesystem::temp_directory_path() / "lbox_cli_model.csv").string();
  std::string file = write_theory(
      "model.thy",
      "base A @ 0\n"
      "base A @ 1\n"
      "model z2 1 A=2\n"
      "jdg x:A |- x : A @ 0\n"
      "eq \\x:A. proj1 (x, ()) = \\x:A. x : A -> A @ 0\n"
      "eq \\x:A. x = \\x:A. x\n");
  ModelOverrides ov;
  ov.csv = csv;
  std::ostringstream out, err;
  CHECK(cmd_model(file, ov, out, err) == 0);
  CHECK(out.str().find("model: monoid z2, depth 1, 2 base carriers") !=
        std::string::npos);
  CHECK(out.str().find("den jdg#1: category level 0, 4 inputs -> 2 possible outputs") !=
        std::string::npos);
  CHECK(out.str().find("pass eq#1") != std::string::npos);
  CHECK(err.str().find("eq#2: skipped") != std::string::npos);

  std::ifstream cf(csv);
  REQUIRE(cf.good());
  std::ostringstream cs;
  cs << cf.rdbuf();
  CHECK(cs.str().rfind("input,output\n", 0) == 0);
  CHECK(lines_of(cs.str()).size() == 5);
}

TEST_CASE("model equations that differ fail the sweep") {
  std::string file = write_theory(
      "modelbad.thy",
      "base A @ 0\n"
      "model z2 1 A=2\n"
      "eq \\p:A * A. proj1 p = \\p:A * A. proj2 p : A * A -> A @ 0\n");
  ModelOverrides ov;
  std::ostringstream out, err;
  CHECK(cmd_model(file, ov, out, err) == 1);
  CHECK(out.str().find("fail eq#1") != std::string::npos);
}

TEST_CASE("flag overrides replace the model line") {
  std::string file = write_theory("noval.thy",
                                  "base A @ 0\njdg x:A |- x : A @ 0\n");
  ModelOverrides ov;
  ov.monoid = "trivial";
  ov.depth = 0;
  ov.vals = {"A=3"};
  std::ostringstream out, err;
  CHECK(cmd_model(file, ov, out, err) == 0);
  CHECK(out.str().find("model: monoid trivial, depth 0, 1 base carriers") !=
        std::string::npos);
  CHECK(out.str().find("den jdg#1: category level 0, 3 inputs -> 3 possible outputs") !=
        std::string::npos);
}

TEST_CASE("laws command runs the checker stack") {
  std::ostringstream out, err;
  CHECK(cmd_laws("z2", 2, out, err) == 0);
  CHECK(out.str().find("all laws pass") != std::string::npos);
  CHECK(out.str().find("co-Kleisli") != std::string::npos);

  std::ostringstream out2, err2;
  CHECK(cmd_laws("/no/such/table.txt", 2, out2, err2) == 2);
  CHECK(err2.str().find("BadInput") != std::string::npos);
}

TEST_CASE("monoid tables load from files") {
  std::string good = write_theory("z2.tbl", "e g\ne g\ng e\n");
  FinMonoid m = load_monoid_table(good);
  CHECK(m.carrier.size() == 2);
  CHECK(atom_eq(m.unit, a_name("e")));
  CHECK(atom_eq(mo_mult(m, a_name("g"), a_name("g")), a_name("e")));

  std::string bad = write_theory("nounit.tbl", "a b\nb b\nb b\n");
  CHECK_THROWS_AS(load_monoid_table(bad), Error);
}

TEST_CASE("the argument parser routes subcommands and error codes") {
  std::string file = write_theory("goals.thy", kGoals);
  {
    const char* argv[] = {"lbox", "check", file.c_str()};
    CHECK(run_cli(3, argv) == 0);
  }
  {
    const char* argv[] = {"lbox", "check", "/no/such/file.thy"};
    CHECK(run_cli(3, argv) == 2);
  }
  {
    const char* argv[] = {"lbox", "check", file.c_str(), "--mode", "weird"};
    CHECK(run_cli(5, argv) == 2);
  }
  {
    const char* argv[] = {"lbox", "frobnicate"};
    CHECK(run_cli(2, argv) != 0);
  }
}

} // TEST_SUITE
