#include "lbox/semantics.hpp"

#include <sstream>

namespace lbox {

Model build_model(const FinMonoid& monoid, int depth,
                  const std::map<std::pair<std::string, int>, FinSet>& valuation) {
  check_monoid_laws(monoid);
  if (depth < 0) fail(ErrKind::BadInput, "model depth must be nonnegative");
  return Model{monoid, depth, valuation};
}

FinSet interp_type(const Model& mo, const TypeP& t, int level) {
  if (level < 0 || level > mo.depth)
    fail(ErrKind::LevelExceedsDepth,
         "no category at level " + std::to_string(level) + " in a depth-" +
             std::to_string(mo.depth) + " tower");
  if (const auto* b = std::get_if<TBase>(&t->v)) {
    int bl = b->level == kUnleveled ? level : b->level;
    auto it = mo.valuation.find({b->name, bl});
    if (it == mo.valuation.end())
      fail(ErrKind::UnvaluedBase, "no carrier for " + b->name + " at level " + std::to_string(bl));
    return it->second;
  }
  if (const auto* a = std::get_if<TArrow>(&t->v)) {
    FinSet d = interp_type(mo, a->dom, level);
    FinSet c = interp_type(mo, a->cod, level);
    return fs_exp(pw_obj_n(mo.monoid, mo.depth - level, d), c);
  }
  if (const auto* p = std::get_if<TProd>(&t->v))
    return fs_prod(interp_type(mo, p->fst, level), interp_type(mo, p->snd, level));
  if (std::get_if<TUnit>(&t->v)) return fs_unit();
  if (const auto* cb = std::get_if<TCBox>(&t->v)) {
    if (level < 1)
      fail(ErrKind::LevelExceedsDepth, "box type below the bottom of the tower");
    int inner = level - 1;
    FinSet ctx = fs_unit();
    for (auto it = cb->hyps.rbegin(); it != cb->hyps.rend(); ++it)
      ctx = fs_prod(interp_type(mo, *it, inner), ctx);
    return fs_exp(pw_obj_n(mo.monoid, mo.depth - inner, ctx),
                  interp_type(mo, cb->body, inner));
  }
  fail(ErrKind::UnsupportedConstruct, "type has no carrier in this semantics: " + show_type(t));
}

FinSet interp_frame(const Model& mo, const Frame& f, int level) {
  FinSet ctx = fs_unit();
  for (auto it = f.rbegin(); it != f.rend(); ++it)
    ctx = fs_prod(interp_type(mo, it->type, level), ctx);
  return ctx;
}

namespace {

// pi_p = fst . snd^p on a right-nested context tuple.
AtomP proj_elem(AtomP g, int p) {
  for (int i = 0; i < p; ++i) g = at_snd(g);
  return at_fst(g);
}

// Insert the second component before the terminal unit of the first.
AtomP rho_insert(const AtomP& pr) {
  AtomP g = at_fst(pr), a = at_snd(pr);
  if (g->v.index() == 1) return a_pair(a, a_unit()); // unit tail reached
  return a_pair(at_fst(g), rho_insert(a_pair(at_snd(g), a)));
}

// The depth-n comultiplication slice: q |-> zeta(p * q), pointwise products.
AtomP delta_slice(const FinMonoid& m, int n, const AtomP& zeta,
                  const std::vector<AtomP>& p) {
  return at_build(m, n, [&](const std::vector<AtomP>& q) {
    std::vector<AtomP> prod;
    prod.reserve(n);
    for (int i = 0; i < n; ++i) prod.push_back(mo_mult(m, p[i], q[i]));
    return at_apply_path(zeta, prod);
  });
}

struct Interp {
  const Model& mo;

  int frame_level(const Judgment& j, int i) const {
    return j.level + (j.stack.height() - 1 - i);
  }

  FinSet layer_dom(const Judgment& j, int i) const {
    int li = frame_level(j, i);
    return pw_obj_n(mo.monoid, mo.depth - li, interp_frame(mo, j.stack.frames[i], li));
  }

  // Nested constant spines over frames 0..k-2 around an innermost atom.
  AtomP wrap_const(const Judgment& j, AtomP inner) const {
    int k = j.stack.height();
    for (int i = k - 2; i >= 0; --i) {
      FinSet d = layer_dom(j, i);
      std::vector<AtomRow> rows;
      rows.reserve(d.size());
      for (const auto& e : d.elems) rows.emplace_back(e, inner);
      inner = a_table(std::move(rows));
    }
    return inner;
  }

  AtomP den_atom(const DerivP& d) const {
    const Judgment& j = d->conclusion;
    int k = j.stack.height();
    int l = j.level;
    if (k < 1) fail(ErrKind::StackUnderflow, "judgment with no frames");
    if (l < 0 || l + k - 1 > mo.depth)
      fail(ErrKind::LevelExceedsDepth,
           "judgment spans levels " + std::to_string(l) + ".." +
               std::to_string(l + k - 1) + " in a depth-" + std::to_string(mo.depth) +
               " tower");
    int m = mo.depth - l;
    const FinMonoid& mon = mo.monoid;
    switch (d->rule) {
      case RuleName::Var: {
        const auto* v = std::get_if<Var>(&j.term->v);
        if (!v) fail(ErrKind::BadInput, "variable rule on a non-variable");
        const Frame& fr = j.stack.frames[k - 1];
        int p = -1;
        for (int i = static_cast<int>(fr.size()) - 1; i >= 0; --i)
          if (fr[i].name == v->name) { p = i; break; }
        if (p < 0) fail(ErrKind::VariableNotInScope, v->name);
        FinSet innerDom = layer_dom(j, k - 1);
        FinSet cod = interp_type(mo, j.type, l);
        std::vector<AtomRow> rows;
        rows.reserve(innerDom.size());
        for (const auto& z : innerDom.elems)
          rows.emplace_back(z, proj_elem(at_eps_n(mon, m, z), p));
        (void)cod;
        return wrap_const(j, a_table(std::move(rows)));
      }
      case RuleName::Star: {
        FinSet innerDom = layer_dom(j, k - 1);
        std::vector<AtomRow> rows;
        rows.reserve(innerDom.size());
        for (const auto& z : innerDom.elems) rows.emplace_back(z, a_unit());
        return wrap_const(j, a_table(std::move(rows)));
      }
      case RuleName::Abs: {
        AtomP prem = den_atom(d->premises[0]);
        const auto* ar = std::get_if<TArrow>(&j.type->v);
        if (!ar) fail(ErrKind::TypeMismatch, "abstraction at a non-arrow type");
        FinSet argDom = pw_obj_n(mon, m, interp_type(mo, ar->dom, l));
        FinSet innerDom = layer_dom(j, k - 1);
        auto curryInner = [&](const AtomP& g) {
          std::vector<AtomRow> rows;
          rows.reserve(innerDom.size());
          for (const auto& z : innerDom.elems) {
            std::vector<AtomRow> fn;
            fn.reserve(argDom.size());
            for (const auto& x : argDom.elems) {
              AtomP zipped = at_zip_under(
                  m, [](const std::vector<AtomP>& as) { return a_pair(as[0], as[1]); },
                  {z, x});
              fn.emplace_back(x, at_apply(g, at_map_under(m, rho_insert, zipped)));
            }
            rows.emplace_back(z, a_table(std::move(fn)));
          }
          return a_table(std::move(rows));
        };
        return at_map_under(k - 1, curryInner, prem);
      }
      case RuleName::App: {
        AtomP pf = den_atom(d->premises[0]);
        AtomP pa = den_atom(d->premises[1]);
        FinSet innerDom = layer_dom(j, k - 1);
        auto apply = [&](const std::vector<AtomP>& vs) {
          const AtomP& g = vs[0];
          const AtomP& h = vs[1];
          std::vector<AtomRow> rows;
          rows.reserve(innerDom.size());
          for (const auto& z : innerDom.elems) {
            AtomP arg = at_build(mon, m, [&](const std::vector<AtomP>& p) {
              return at_apply(h, delta_slice(mon, m, z, p));
            });
            rows.emplace_back(z, at_apply(at_apply(g, z), arg));
          }
          return a_table(std::move(rows));
        };
        return at_zip_under(k - 1, apply, {pf, pa});
      }
      case RuleName::Pair: {
        AtomP p0 = den_atom(d->premises[0]);
        AtomP p1 = den_atom(d->premises[1]);
        return at_zip_under(
            k, [](const std::vector<AtomP>& as) { return a_pair(as[0], as[1]); }, {p0, p1});
      }
      case RuleName::Proj1:
        return at_map_under(k, at_fst, den_atom(d->premises[0]));
      case RuleName::Proj2:
        return at_map_under(k, at_snd, den_atom(d->premises[0]));
      case RuleName::Quo:
      case RuleName::CQuo:
        // The premise's denotation, one frame deeper, has byte for byte the
        // carrier the box type denotes. Quoting is the identity on tables.
        return den_atom(d->premises[0]);
      case RuleName::Unq:
      case RuleName::CUnq: {
        std::vector<AtomP> atoms;
        atoms.push_back(den_atom(d->premises[0]));
        for (size_t i = 1; i < d->premises.size(); ++i)
          atoms.push_back(den_atom(d->premises[i]));
        FinSet innerDom = layer_dom(j, k - 1);
        size_t nArgs = atoms.size() - 1;
        auto splice = [&](const std::vector<AtomP>& vs) {
          const AtomP& code = vs[0];
          std::vector<AtomRow> rows;
          rows.reserve(innerDom.size());
          for (const auto& z : innerDom.elems) {
            AtomP tup = at_build(mon, m, [&](const std::vector<AtomP>& p) {
              AtomP t = a_unit();
              for (size_t a = nArgs; a > 0; --a)
                t = a_pair(at_apply(vs[a], delta_slice(mon, m, z, p)), t);
              return t;
            });
            rows.emplace_back(z, at_apply(code, tup));
          }
          return a_table(std::move(rows));
        };
        return at_zip_under(k - 1, splice, atoms);
      }
      default:
        fail(ErrKind::UnsupportedConstruct,
             "no denotation for this rule in the power-comonad tower");
    }
  }
};

} // namespace

Den interp_derivation(const Model& mo, const DerivP& d) {
  const Judgment& j = d->conclusion;
  int k = j.stack.height();
  if (k < 1) fail(ErrKind::StackUnderflow, "judgment with no frames");
  int l = j.level;
  int l0 = l + k - 1;
  Interp in{mo};
  AtomP a = in.den_atom(d);
  FinSet ctx0 = interp_frame(mo, j.stack.frames[0], l0);
  FinSet dom = pw_obj_n(mo.monoid, mo.depth - l0, ctx0);
  FinSet cod = interp_type(mo, j.type, l);
  for (int i = k - 1; i >= 1; --i) {
    int li = l + (k - 1 - i);
    cod = fs_exp(pw_obj_n(mo.monoid, mo.depth - li, interp_frame(mo, j.stack.frames[i], li)),
                 cod);
  }
  Den den;
  den.judgment = j;
  den.morphism = retag(atom_to_map(a, dom, cod), ctx0);
  den.level = l0;
  den.typeLevel = l;
  return den;
}

Den interp_term(const Model& mo, const Judgment& j, SystemMode mode) {
  return interp_derivation(mo, check(mode, j));
}

Den interp_contextual(const Model& mo, const DerivP& d) { return interp_derivation(mo, d); }

bool check_soundness(const Model& mo, const DerivP& a, const DerivP& b,
                     std::string* witness) {
  const Judgment& ja = a->conclusion;
  const Judgment& jb = b->conclusion;
  if (!stack_eq(ja.stack, jb.stack) || ja.level != jb.level || !type_eq(ja.type, jb.type))
    fail(ErrKind::ShapeMismatch, "judgments differ in stack, level, or type");
  Den da = interp_derivation(mo, a);
  Den db = interp_derivation(mo, b);
  if (fm_eq(da.morphism, db.morphism)) return true;
  if (witness) {
    for (size_t i = 0; i < da.morphism.out.size(); ++i)
      if (da.morphism.out[i] != db.morphism.out[i]) {
        *witness = "at " + show_atom(da.morphism.dom.elems[i]) + ": " +
                   show_atom(da.morphism.cod.elems[da.morphism.out[i]]) + " vs " +
                   show_atom(db.morphism.cod.elems[db.morphism.out[i]]);
        break;
      }
  }
  return false;
}

std::string den_to_csv(const Den& d) {
  std::ostringstream os;
  os << "input,output\n";
  for (size_t i = 0; i < d.morphism.out.size(); ++i)
    os << '"' << show_atom(d.morphism.dom.elems[i]) << "\",\""
       << show_atom(d.morphism.cod.elems[d.morphism.out[i]]) << "\"\n";
  return os.str();
}

} // namespace lbox
