#include "lbox/driver.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lbox/parse.hpp"
#include "lbox/rewrite.hpp"
#include "lbox/semantics.hpp"
#include "lbox/translate.hpp"

namespace lbox {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrKind::BadInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Judgment closed_judgment(const TermP& term, const TypeP& type, int level) {
  Judgment j;
  j.stack.frames.push_back({});
  j.level = level;
  j.term = term;
  j.type = type;
  return j;
}

// A named check goal: defs become closed judgments, jdg declarations are
// taken as written. Unleveled goals run level inference (fitch only).
struct Goal {
  std::string label;
  Judgment j; // possibly unleveled
};

std::vector<Goal> collect_goals(const FileDecls& f) {
  std::vector<Goal> gs;
  for (const auto& d : f.defs) {
    Judgment j = closed_judgment(
        d.term, d.level ? stamp_type(d.type, *d.level) : d.type,
        d.level ? *d.level : kUnleveled);
    gs.push_back({d.name, j});
  }
  for (size_t i = 0; i < f.jdgs.size(); ++i)
    gs.push_back({"jdg#" + std::to_string(i + 1), f.jdgs[i].j});
  return gs;
}

// Check one goal in the requested mode; unleveled goals are inferred in
// fitch-compatible modes and erased in gentzen.
std::pair<Judgment, DerivP> check_goal(const Goal& g, SystemMode mode,
                                       const Signature& sig) {
  if (mode == SystemMode::gentzen) {
    Judgment j = erase_judgment(g.j);
    return {j, check(mode, j)};
  }
  if (g.j.level == kUnleveled) {
    auto [j, d] = infer_levels(erase_judgment(g.j), sig);
    if (mode != SystemMode::fitch) return {j, check(mode, j)};
    return {j, d};
  }
  return {g.j, check(mode, g.j)};
}

void report_error(std::ostream& err, const std::string& label, const Error& e) {
  err << label << ": " << errkind_name(e.kind) << ": " << e.what() << "\n";
}

nlohmann::json deriv_json(const DerivP& d) {
  nlohmann::json j;
  j["rule"] = rule_name(d->rule);
  j["conclusion"] = show_judgment(d->conclusion);
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d->premises) j["premises"].push_back(deriv_json(p));
  return j;
}

} // namespace

std::string json_of_derivation(const DerivP& d) { return deriv_json(d).dump(2); }

FinMonoid load_monoid_table(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> elems;
  std::vector<std::vector<std::string>> table;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (first) {
      elems = toks;
      first = false;
    } else {
      table.push_back(toks);
    }
  }
  if (elems.empty()) fail(ErrKind::BadInput, "monoid table: no carrier line");
  // Detect the unit before delegating to the table constructor.
  auto entry = [&](size_t i, size_t j) -> const std::string& {
    if (i >= table.size() || j >= table[i].size())
      fail(ErrKind::BadInput, "monoid table: missing row or column");
    return table[i][j];
  };
  for (size_t u = 0; u < elems.size(); ++u) {
    bool unit = true;
    for (size_t i = 0; i < elems.size() && unit; ++i)
      unit = entry(u, i) == elems[i] && entry(i, u) == elems[i];
    if (unit) return monoid_from_table(elems, table, elems[u]);
  }
  fail(ErrKind::BadInput, "monoid table: no unit element");
}

FinMonoid monoid_by_name(const std::string& name) {
  if (name == "trivial") return monoid_trivial();
  if (name == "z2") return monoid_z2();
  return load_monoid_table(name);
}

int cmd_check(const std::string& file, const std::string& mode, bool json,
              std::ostream& out, std::ostream& err) {
  FileDecls f = parse_file(read_file(file));
  SystemMode m = mode_from_name(mode);
  Signature sig = f.signature();
  nlohmann::json arr = nlohmann::json::array();
  int rc = 0;
  for (const auto& g : collect_goals(f)) {
    try {
      auto [j, d] = check_goal(g, m, sig);
      if (json)
        arr.push_back(deriv_json(d));
      else
        out << "ok " << g.label << ": " << show_judgment(j) << "\n";
    } catch (const Error& e) {
      report_error(err, g.label, e);
      rc = 1;
    }
  }
  if (json) out << arr.dump(2) << "\n";
  return rc;
}

int cmd_levels(const std::string& file, std::ostream& out, std::ostream& err) {
  FileDecls f = parse_file(read_file(file));
  Signature sig = f.signature();
  int rc = 0;
  for (const auto& g : collect_goals(f)) {
    try {
      auto [j, d] = infer_levels(erase_judgment(g.j), sig);
      (void)d;
      out << g.label << ": level " << j.level << ": " << show_judgment(j) << "\n";
    } catch (const Error& e) {
      report_error(err, g.label, e);
      rc = 1;
    }
  }
  return rc;
}

int cmd_normalize(const std::string& expr, int budget, std::ostream& out,
                  std::ostream& err) {
  try {
    TermP t = parse_term(expr);
    out << show_term(normalize(t, budget)) << "\n";
    return 0;
  } catch (const Error& e) {
    report_error(err, "normalize", e);
    return 1;
  }
}

int cmd_eq(const std::string& file, std::ostream& out, std::ostream& err) {
  FileDecls f = parse_file(read_file(file));
  Signature sig = f.signature();
  int rc = 0;
  for (size_t i = 0; i < f.eqs.size(); ++i) {
    const EqDecl& e = f.eqs[i];
    std::string label = "eq#" + std::to_string(i + 1);
    try {
      bool equal;
      if (e.type) {
        Judgment j;
        if (e.level) {
          j = closed_judgment(e.lhs, stamp_type(*e.type, *e.level), *e.level);
        } else {
          auto [ij, id] = infer_levels(closed_judgment(e.lhs, *e.type, kUnleveled), sig);
          (void)id;
          j = ij;
        }
        equal = equal_theory(e.lhs, e.rhs, j);
      } else {
        // Without a type only the beta fragment is decidable; report
        // inequality as "needs an annotation" rather than guessing.
        equal = alpha_eq(normalize(e.lhs), normalize(e.rhs));
        if (!equal)
          fail(ErrKind::MissingAnnotation,
               "normal forms differ; deciding eta equality needs a type annotation");
      }
      if (equal) {
        out << "pass " << label << ": " << show_term(e.lhs) << " = " << show_term(e.rhs)
            << "\n";
      } else {
        out << "fail " << label << ": " << show_term(e.lhs) << " /= " << show_term(e.rhs)
            << "\n";
        rc = 1;
      }
    } catch (const Error& ex) {
      report_error(err, label, ex);
      rc = 1;
    }
  }
  return rc;
}

int cmd_translate(const std::string& file, const std::string& to, std::ostream& out,
                  std::ostream& err) {
  FileDecls f = parse_file(read_file(file));
  Signature sig = f.signature();
  int rc = 0;
  for (const auto& g : collect_goals(f)) {
    try {
      auto [j, d] = check_goal(g, SystemMode::fitch, sig);
      if (to == "lambda-box") {
        Judgment dj = desugar_judgment(j);
        check(SystemMode::fitch, dj); // translation must preserve typing
        out << g.label << ": " << show_judgment(dj) << "\n";
      } else if (to == "gentzen") {
        Judgment pj = desugar_judgment(j);
        DerivP pd = check(SystemMode::fitch, pj);
        if (!gentzen_translatable(pj.term))
          fail(ErrKind::UnsupportedConstruct,
               "term has a splice at quotation depth 0; no image in the gbox system");
        Judgment gj = to_gentzen(pd);
        check(SystemMode::gentzen, gj);
        out << g.label << ": " << show_judgment(gj) << "\n";
      } else {
        fail(ErrKind::BadInput, "unknown translation target " + to);
      }
    } catch (const Error& e) {
      report_error(err, g.label, e);
      rc = 1;
    }
  }
  return rc;
}

namespace {

struct ParsedVal {
  std::string name;
  std::optional<int> level;
  int size = 0;
};

ParsedVal parse_val(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos) fail(ErrKind::BadInput, "--val wants NAME=SIZE: " + s);
  ParsedVal v;
  std::string key = s.substr(0, eq);
  v.size = std::stoi(s.substr(eq + 1));
  auto at = key.find('@');
  if (at == std::string::npos) {
    v.name = key;
  } else {
    v.name = key.substr(0, at);
    v.level = std::stoi(key.substr(at + 1));
  }
  if (v.name.empty() || v.size <= 0) fail(ErrKind::BadInput, "bad --val: " + s);
  return v;
}

} // namespace

int cmd_model(const std::string& file, const ModelOverrides& ov, std::ostream& out,
              std::ostream& err) {
  FileDecls f = parse_file(read_file(file));
  Signature sig = f.signature();
  std::string monoidName = ov.monoid;
  int depth = ov.depth;
  std::vector<ParsedVal> vals;
  if (!f.models.empty()) {
    const ModelDecl& md = f.models.front();
    if (monoidName.empty()) monoidName = md.monoid;
    if (depth < 0) depth = md.depth;
    for (const auto& vs : md.vals) vals.push_back({vs.name, vs.level, vs.size});
  }
  for (const auto& s : ov.vals) vals.push_back(parse_val(s));
  if (monoidName.empty() || depth < 0)
    fail(ErrKind::BadInput, "no model configuration: give --monoid and --depth or a model line");
  FinMonoid monoid = monoid_by_name(monoidName);
  std::map<std::pair<std::string, int>, FinSet> valuation;
  for (const auto& v : vals) {
    std::vector<int> levels;
    if (v.level) {
      levels.push_back(*v.level);
    } else if (sig.count(v.name)) {
      for (int l : sig.at(v.name)) levels.push_back(l);
    } else {
      for (int l = 0; l <= depth; ++l) levels.push_back(l);
    }
    for (int l : levels)
      valuation[{v.name, l}] =
          fs_points(v.name + "l" + std::to_string(l) + "_", v.size);
  }
  Model model = build_model(monoid, depth, valuation);
  out << "model: monoid " << monoid.name << ", depth " << depth << ", "
      << valuation.size() << " base carriers\n";
  int rc = 0;
  bool wroteCsv = false;
  for (size_t i = 0; i < f.jdgs.size(); ++i) {
    std::string label = "jdg#" + std::to_string(i + 1);
    try {
      Judgment j = f.jdgs[i].j;
      DerivP d;
      if (j.level == kUnleveled) {
        auto [ij, id] = infer_levels(j, sig);
        j = ij;
        d = id;
      } else {
        d = check(SystemMode::fitch, j);
      }
      Den den = interp_derivation(model, d);
      out << "den " << label << ": category level " << den.level << ", "
          << den.morphism.dom.size() << " inputs -> " << den.morphism.cod.size()
          << " possible outputs\n";
      if (!ov.csv.empty() && !wroteCsv) {
        std::ofstream cf(ov.csv);
        if (!cf) fail(ErrKind::BadInput, "cannot write " + ov.csv);
        cf << den_to_csv(den);
        wroteCsv = true;
        out << "csv " << label << " -> " << ov.csv << "\n";
      }
    } catch (const Error& e) {
      report_error(err, label, e);
      rc = 1;
    }
  }
  for (size_t i = 0; i < f.eqs.size(); ++i) {
    const EqDecl& e = f.eqs[i];
    std::string label = "eq#" + std::to_string(i + 1);
    if (!e.type) {
      err << label << ": skipped in the model sweep (no type annotation)\n";
      continue;
    }
    try {
      Judgment j;
      if (e.level) {
        j = closed_judgment(e.lhs, stamp_type(*e.type, *e.level), *e.level);
      } else {
        auto [ij, id] = infer_levels(closed_judgment(e.lhs, *e.type, kUnleveled), sig);
        (void)id;
        j = ij;
      }
      DerivP dl = check(SystemMode::fitch, j);
      Judgment jr = j;
      jr.term = e.rhs;
      DerivP dr = check(SystemMode::fitch, jr);
      std::string witness;
      bool same = check_soundness(model, dl, dr, &witness);
      if (same) {
        out << "pass " << label << ": tables agree\n";
      } else {
        out << "fail " << label << ": tables differ " << witness << "\n";
        rc = 1;
      }
    } catch (const Error& ex) {
      report_error(err, label, ex);
      rc = 1;
    }
  }
  return rc;
}

int cmd_laws(const std::string& monoidName, int maxSize, std::ostream& out,
             std::ostream& err) {
  try {
    FinMonoid monoid = monoid_by_name(monoidName);
    if (maxSize < 1) fail(ErrKind::BadInput, "--max-size must be positive");
    std::vector<FinSet> objects, smallObjs;
    for (int s = 1; s <= std::min(maxSize, 3); ++s)
      objects.push_back(fs_points(std::string(1, static_cast<char>('a' + s - 1)), s));
    for (int s = 1; s <= std::min(maxSize, 2); ++s)
      smallObjs.push_back(fs_points(std::string(1, static_cast<char>('a' + s - 1)), s));
    int failures = 0;
    auto section = [&](const std::string& name, const LawReport& rep) {
      out << "== " << name << " ==\n" << rep.summary();
      for (const auto& r : rep.results)
        if (!r.pass) ++failures;
    };
    ComonadData power = power_comonad(monoid, objects);
    section("comonad axioms, distributive law, coalgebra: " + power.name,
            check_comonad_axioms(power));
    section("base category laws", check_ccc_laws(fin_v(), objects));
    Cat ck = cokleisli(power);
    section("co-Kleisli category laws: " + ck.name, check_ccc_laws(ck, objects));
    ComonadData powerSmall = power_comonad(monoid, smallObjs);
    ComonadData lift = lift_comonad(powerSmall);
    section("lifted comonad axioms: " + lift.name, check_comonad_axioms(lift));
    section("lift vs composite identification", check_lift_identification(powerSmall));
    LawReport fr;
    MonFunctorData u = normal_underlying_functor(powerSmall);
    NormalityReport nu = comparison_is_normal(u, smallObjs);
    fr.add("comparison-normal " + u.name, nu.normal, nu.witness);
    FFReport f1 = check_ff_equivalence(u, smallObjs);
    fr.add("ff-biconditional " + u.name, f1.biconditional, f1.detail);
    MonFunctorData pe = power_endofunctor(monoid);
    NormalityReport np = comparison_is_normal(pe, smallObjs);
    out << "analysis: " << pe.name << " normality: " << (np.normal ? "yes" : "no")
        << " (" << np.witness << ")\n";
    FFReport f2 = check_ff_equivalence(pe, smallObjs);
    fr.add("ff-biconditional " + pe.name, f2.biconditional, f2.detail);
    MonFunctorData idf = identity_functor(fin_v());
    FFReport f3 = check_ff_equivalence(idf, smallObjs);
    fr.add("ff-biconditional " + idf.name, f3.biconditional, f3.detail);
    section("functor analysis", fr);
    FinEnrichedCat en = self_enrich(fin_v(), smallObjs);
    section("self-enrichment laws", check_enriched_laws(en));
    LawReport cb;
    try {
      FinEnrichedCat moved = change_of_base(pe, en);
      cb.add("change-of-base " + moved.name, true);
    } catch (const Error& e) {
      cb.add("change-of-base", false, e.what());
    }
    section("change of base", cb);
    if (failures == 0) {
      out << "all laws pass\n";
      return 0;
    }
    out << failures << " law failures\n";
    return 1;
  } catch (const Error& e) {
    report_error(err, "laws", e);
    return 2;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Leveled modal lambda calculus toolkit"};
  app.require_subcommand(1);

  std::string file, mode = "fitch", expr, to = "gentzen", monoid = "z2";
  bool json = false;
  int budget = 10000, maxSize = 2;
  ModelOverrides ov;

  auto* cCheck = app.add_subcommand("check", "type-check the goals in a theory file");
  cCheck->add_option("file", file)->required();
  cCheck->add_option("--mode", mode, "fitch|gentzen|dual|multi|benton");
  cCheck->add_flag("--json", json, "print derivations as JSON");

  auto* cLevels = app.add_subcommand("levels", "infer levels for the goals in a file");
  cLevels->add_option("file", file)->required();

  auto* cNorm = app.add_subcommand("normalize", "normalize an expression");
  cNorm->add_option("-e,--expr", expr)->required();
  cNorm->add_option("--budget", budget, "maximum reduction steps");

  auto* cEq = app.add_subcommand("eq", "decide the equation goals in a file");
  cEq->add_option("file", file)->required();

  auto* cTrans = app.add_subcommand("translate", "translate goals to another system");
  cTrans->add_option("file", file)->required();
  cTrans->add_option("--to", to, "gentzen|lambda-box");

  auto* cModel = app.add_subcommand("model", "interpret goals in a finite model");
  cModel->add_option("file", file)->required();
  cModel->add_option("--monoid", ov.monoid, "trivial|z2|table file");
  cModel->add_option("--depth", ov.depth, "tower depth");
  cModel->add_option("--val", ov.vals, "NAME=SIZE or NAME@L=SIZE carrier sizes");
  cModel->add_option("--csv", ov.csv, "write the first judgment's table as CSV");

  auto* cLaws = app.add_subcommand("laws", "run the categorical law checkers");
  cLaws->add_option("--monoid", monoid, "trivial|z2|table file");
  cLaws->add_option("--max-size", maxSize, "largest object size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cCheck->parsed()) return cmd_check(file, mode, json, std::cout, std::cerr);
    if (cLevels->parsed()) return cmd_levels(file, std::cout, std::cerr);
    if (cNorm->parsed()) return cmd_normalize(expr, budget, std::cout, std::cerr);
    if (cEq->parsed()) return cmd_eq(file, std::cout, std::cerr);
    if (cTrans->parsed()) return cmd_translate(file, to, std::cout, std::cerr);
    if (cModel->parsed()) return cmd_model(file, ov, std::cout, std::cerr);
    if (cLaws->parsed()) return cmd_laws(monoid, maxSize, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << errkind_name(e.kind) << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}

} // namespace lbox
