#include "lbox/check.hpp"

#include <algorithm>

#include "lbox/rewrite.hpp"

namespace lbox {

const char* mode_name(SystemMode m) {
  switch (m) {
    case SystemMode::fitch: return "fitch";
    case SystemMode::gentzen: return "gentzen";
    case SystemMode::dual: return "dual";
    case SystemMode::multi: return "multi";
    case SystemMode::benton: return "benton";
  }
  return "?";
}

SystemMode mode_from_name(const std::string& s) {
  if (s == "fitch") return SystemMode::fitch;
  if (s == "gentzen") return SystemMode::gentzen;
  if (s == "dual") return SystemMode::dual;
  if (s == "multi") return SystemMode::multi;
  if (s == "benton") return SystemMode::benton;
  fail(ErrKind::BadInput, "unknown system mode: " + s);
}

const char* rule_name(RuleName r) {
  switch (r) {
    case RuleName::Var: return "Var";
    case RuleName::Abs: return "Abs";
    case RuleName::App: return "App";
    case RuleName::Pair: return "Pair";
    case RuleName::Proj1: return "Proj1";
    case RuleName::Proj2: return "Proj2";
    case RuleName::Star: return "Star";
    case RuleName::Quo: return "Quo";
    case RuleName::Unq: return "Unq";
    case RuleName::CQuo: return "CQuo";
    case RuleName::CUnq: return "CUnq";
    case RuleName::GBox: return "GBox";
    case RuleName::DBoxI: return "DBoxI";
    case RuleName::DBoxE: return "DBoxE";
    case RuleName::MBoxI: return "MBoxI";
    case RuleName::MBoxE: return "MBoxE";
  }
  return "?";
}

DerivP mk_deriv(RuleName r, Judgment c, std::vector<DerivP> ps) {
  return std::make_shared<const Derivation>(
      Derivation{r, std::move(c), std::move(ps)});
}

namespace {

struct Fresh {
  std::set<std::string> used;
  std::string fresh(const std::string& base) {
    for (int i = 1;; ++i) {
      std::string cand = base + "'" + std::to_string(i);
      if (used.insert(cand).second) return cand;
    }
  }
};

bool frame_has(const Frame& f, const std::string& x) {
  for (const auto& h : f)
    if (h.name == x) return true;
  return false;
}

// Stamp t at level l if it is unleveled, otherwise insist it already sits
// at l. l == kUnleveled insists on an unleveled t instead.
TypeP coerce_level(const TypeP& t, int l, const std::string& what) {
  if (l == kUnleveled) {
    if (!type_unleveled(t))
      fail(ErrKind::LevelMismatch, what + ": leveled type in an unleveled judgment");
    return t;
  }
  if (type_unleveled(t)) {
    TypeP s = stamp_type(t, l);
    if (auto lv = try_type_level(s); !lv || *lv != l)
      fail(ErrKind::LevelMismatch,
           what + " does not fit level " + std::to_string(l) + ": " + show_type(t));
    return s;
  }
  if (auto lv = try_type_level(t); !lv || *lv != l)
    fail(ErrKind::LevelMismatch,
         what + " is not at level " + std::to_string(l) + ": " + show_type(t));
  return t;
}

struct Checker {
  SystemMode mode;
  bool leveled;
  Fresh gen;

  bool boxes_fitch() const {
    return mode == SystemMode::fitch || mode == SystemMode::benton;
  }
  bool boxes_dual() const {
    return mode == SystemMode::dual || mode == SystemMode::multi ||
           mode == SystemMode::benton;
  }

  void gate_type(const TypeP& t) {
    if (auto* a = std::get_if<TArrow>(&t->v)) {
      gate_type(a->dom);
      gate_type(a->cod);
      return;
    }
    if (auto* p = std::get_if<TProd>(&t->v)) {
      gate_type(p->fst);
      gate_type(p->snd);
      return;
    }
    if (auto* c = std::get_if<TCBox>(&t->v)) {
      if (!boxes_fitch() && mode != SystemMode::gentzen)
        fail(ErrKind::ModeViolation, "code types do not exist in this system");
      if (mode == SystemMode::gentzen && !c->hyps.empty())
        fail(ErrKind::ModeViolation,
             "hypothesis-binding boxes do not exist in this system");
      for (const auto& h : c->hyps) gate_type(h);
      gate_type(c->body);
      return;
    }
    if (auto* d = std::get_if<TDBox>(&t->v)) {
      if (!boxes_dual())
        fail(ErrKind::ModeViolation, "dual box types do not exist in this system");
      gate_type(d->body);
      return;
    }
  }

  void gate_term(const TermP& t) {
    if (auto* l = std::get_if<Lam>(&t->v)) {
      if (l->b.ann) gate_type(*l->b.ann);
      gate_term(l->body);
      return;
    }
    if (auto* a = std::get_if<App>(&t->v)) {
      gate_term(a->fun);
      gate_term(a->arg);
      return;
    }
    if (auto* p = std::get_if<Pair>(&t->v)) {
      gate_term(p->fst);
      gate_term(p->snd);
      return;
    }
    if (auto* p = std::get_if<Proj>(&t->v)) {
      gate_term(p->body);
      return;
    }
    if (auto* q = std::get_if<Quo>(&t->v)) {
      for (const auto& b : q->binders)
        if (b.ann) gate_type(*b.ann);
      gate_term(q->body);
      return;
    }
    if (auto* u = std::get_if<Unq>(&t->v)) {
      gate_term(u->code);
      for (const auto& a : u->args) gate_term(a);
      return;
    }
    if (auto* g = std::get_if<GBox>(&t->v)) {
      for (const auto& b : g->binders)
        if (b.ann) gate_type(*b.ann);
      for (const auto& a : g->args) gate_term(a);
      gate_term(g->body);
      return;
    }
    if (auto* d = std::get_if<DBox>(&t->v)) {
      gate_term(d->body);
      return;
    }
    if (auto* d = std::get_if<DLet>(&t->v)) {
      gate_term(d->box);
      gate_term(d->body);
      return;
    }
  }

  TypeP at_level(const TypeP& t, int l, const std::string& what) {
    return coerce_level(t, leveled ? l : kUnleveled, what);
  }

  Judgment mkJ(const std::vector<Frame>& fs, int l, TermP t, TypeP ty) const {
    return Judgment{ContextStack{fs}, l, std::move(t), std::move(ty)};
  }

  // Rename the binder when its name already lives in the target frame.
  // off is the binder's level relative to the body root.
  std::pair<std::string, TermP> pushable(const Frame& target,
                                         const std::string& x,
                                         const TermP& body, int off) {
    if (!frame_has(target, x)) return {x, body};
    std::string x2 = gen.fresh(x);
    return {x2, rename_at(body, x, x2, off)};
  }

  // gbox argument premises: one per binder, each a plain box; yields the
  // single body frame and the argument derivations.
  std::pair<Frame, std::vector<DerivP>> gbox_args(
      const std::vector<Frame>& fs, int l, const GBox& g) {
    if (g.binders.size() != g.args.size())
      fail(ErrKind::BadInput, "gbox binder/argument count mismatch");
    Frame nf;
    std::vector<DerivP> ps;
    for (size_t i = 0; i < g.binders.size(); ++i) {
      auto [at, da] = infer(fs, l, g.args[i]);
      auto* bx = std::get_if<TCBox>(&at->v);
      if (!bx || !bx->hyps.empty())
        fail(ErrKind::TypeMismatch,
             "gbox argument is not a plain box: " + show_type(at));
      const auto& b = g.binders[i];
      if (b.ann) {
        TypeP a = at_level(*b.ann, l, "gbox binder");
        if (!type_eq(a, bx->body))
          fail(ErrKind::TypeMismatch, "gbox binder annotation does not match "
                                      "its argument: " + b.name);
      }
      if (frame_has(nf, b.name))
        fail(ErrKind::DuplicateBinding, "repeated gbox binder: " + b.name);
      nf.push_back(Hyp{b.name, bx->body});
      ps.push_back(da);
    }
    return {nf, ps};
  }

  std::pair<TypeP, DerivP> infer(const std::vector<Frame>& fs, int l,
                                 const TermP& t) {
    if (auto* x = std::get_if<Var>(&t->v)) {
      const Frame& f = fs.back();
      for (auto it = f.rbegin(); it != f.rend(); ++it)
        if (it->name == x->name)
          return {it->type, mk_deriv(RuleName::Var, mkJ(fs, l, t, it->type))};
      fail(ErrKind::VariableNotInScope,
           x->name + " is not in the innermost frame");
    }
    if (auto* a = std::get_if<App>(&t->v)) {
      auto [tf, df] = infer(fs, l, a->fun);
      auto* ar = std::get_if<TArrow>(&tf->v);
      if (!ar)
        fail(ErrKind::TypeMismatch,
             "applied term is not a function: " + show_type(tf));
      auto da = checkAgainst(fs, l, a->arg, ar->dom);
      return {ar->cod, mk_deriv(RuleName::App, mkJ(fs, l, t, ar->cod), {df, da})};
    }
    if (auto* p = std::get_if<Pair>(&t->v)) {
      auto [ta, da] = infer(fs, l, p->fst);
      auto [tb, db] = infer(fs, l, p->snd);
      TypeP ty = t_prod(ta, tb);
      return {ty, mk_deriv(RuleName::Pair, mkJ(fs, l, t, ty), {da, db})};
    }
    if (auto* p = std::get_if<Proj>(&t->v)) {
      auto [tb, db] = infer(fs, l, p->body);
      auto* pr = std::get_if<TProd>(&tb->v);
      if (!pr)
        fail(ErrKind::TypeMismatch,
             "projection from a non-product: " + show_type(tb));
      TypeP ty = p->idx == 1 ? pr->fst : pr->snd;
      RuleName r = p->idx == 1 ? RuleName::Proj1 : RuleName::Proj2;
      return {ty, mk_deriv(r, mkJ(fs, l, t, ty), {db})};
    }
    if (std::holds_alternative<Star>(t->v)) {
      TypeP ty = t_unit(leveled ? l : kUnleveled);
      return {ty, mk_deriv(RuleName::Star, mkJ(fs, l, t, ty))};
    }
    if (auto* lm = std::get_if<Lam>(&t->v)) {
      if (!lm->b.ann)
        fail(ErrKind::MissingAnnotation,
             "cannot infer a lambda without a binder annotation");
      TypeP dom = at_level(*lm->b.ann, l, "binder annotation");
      auto [nm, body] = pushable(fs.back(), lm->b.name, lm->body, 0);
      auto fs2 = fs;
      fs2.back().push_back(Hyp{nm, dom});
      auto [cod, db] = infer(fs2, l, body);
      TypeP ty = t_arrow(dom, cod);
      return {ty, mk_deriv(RuleName::Abs, mkJ(fs, l, t, ty), {db})};
    }
    if (auto* q = std::get_if<Quo>(&t->v)) {
      if (!boxes_fitch())
        fail(ErrKind::ModeViolation, "quotation is not a term of this system");
      if (l < 1)
        fail(ErrKind::LevelMismatch, "a code value cannot live at level 0");
      Frame nf;
      std::vector<TypeP> hyps;
      for (const auto& b : q->binders) {
        if (!b.ann)
          fail(ErrKind::MissingAnnotation,
               "cannot infer a quotation without binder annotations");
        if (frame_has(nf, b.name))
          fail(ErrKind::DuplicateBinding, "repeated quotation binder: " + b.name);
        TypeP a = at_level(*b.ann, l - 1, "quotation binder");
        nf.push_back(Hyp{b.name, a});
        hyps.push_back(a);
      }
      auto fs2 = fs;
      fs2.push_back(nf);
      auto [bt, db] = infer(fs2, l - 1, q->body);
      TypeP ty = t_cbox(hyps, bt);
      RuleName r = q->binders.empty() ? RuleName::Quo : RuleName::CQuo;
      return {ty, mk_deriv(r, mkJ(fs, l, t, ty), {db})};
    }
    if (auto* u = std::get_if<Unq>(&t->v)) {
      if (!boxes_fitch())
        fail(ErrKind::ModeViolation, "splice is not a term of this system");
      if (fs.size() < 2)
        fail(ErrKind::StackUnderflow, "splice needs an enclosing quotation frame");
      auto fs2 = fs;
      fs2.pop_back();
      auto [ct, dc] = infer(fs2, l + 1, u->code);
      auto* bx = std::get_if<TCBox>(&ct->v);
      if (!bx)
        fail(ErrKind::TypeMismatch, "spliced term is not code: " + show_type(ct));
      if (bx->hyps.size() != u->args.size())
        fail(ErrKind::TypeMismatch, "splice argument count mismatch");
      std::vector<DerivP> ps = {dc};
      for (size_t i = 0; i < u->args.size(); ++i)
        ps.push_back(checkAgainst(fs, l, u->args[i], bx->hyps[i]));
      RuleName r = u->args.empty() ? RuleName::Unq : RuleName::CUnq;
      return {bx->body, mk_deriv(r, mkJ(fs, l, t, bx->body), std::move(ps))};
    }
    if (auto* g = std::get_if<GBox>(&t->v)) {
      if (mode != SystemMode::gentzen)
        fail(ErrKind::ModeViolation, "gbox is not a term of this system");
      auto [nf, ps] = gbox_args(fs, l, *g);
      std::vector<Frame> bfs = {nf};
      auto [bt, db] = infer(bfs, l, g->body);
      ps.push_back(db);
      TypeP ty = t_box(bt);
      return {ty, mk_deriv(RuleName::GBox, mkJ(fs, l, t, ty), std::move(ps))};
    }
    if (auto* d = std::get_if<DBox>(&t->v)) {
      if (!boxes_dual())
        fail(ErrKind::ModeViolation, "dual box is not a term of this system");
      if (mode == SystemMode::dual) {
        std::vector<Frame> fs2 = {Frame{}, fs[0]};
        auto [bt, dp] = infer(fs2, l + 1, d->body);
        TypeP ty = t_dbox(bt);
        return {ty, mk_deriv(RuleName::DBoxI, mkJ(fs, l, t, ty), {dp})};
      }
      if (fs.size() < 2)
        fail(ErrKind::StackUnderflow, "dual box needs a frame to pop");
      auto fs2 = fs;
      fs2.pop_back();
      auto [bt, dp] = infer(fs2, l + 1, d->body);
      TypeP ty = t_dbox(bt);
      return {ty, mk_deriv(RuleName::MBoxI, mkJ(fs, l, t, ty), {dp})};
    }
    if (auto* d = std::get_if<DLet>(&t->v)) {
      if (!boxes_dual())
        fail(ErrKind::ModeViolation, "dlet is not a term of this system");
      if (fs.size() < 2)
        fail(ErrKind::StackUnderflow, "dlet binds one frame up");
      auto [mt, dm] = infer(fs, l, d->box);
      auto* bx = std::get_if<TDBox>(&mt->v);
      if (!bx)
        fail(ErrKind::TypeMismatch,
             "dlet subject is not a dual box: " + show_type(mt));
      int tgt = (int)fs.size() - 2;
      auto [nm, body] = pushable(fs[tgt], d->name, d->body, 1);
      auto fs2 = fs;
      fs2[tgt].push_back(Hyp{nm, bx->body});
      auto [ct, db2] = infer(fs2, l, body);
      RuleName r = mode == SystemMode::dual ? RuleName::DBoxE : RuleName::MBoxE;
      return {ct, mk_deriv(r, mkJ(fs, l, t, ct), {dm, db2})};
    }
    fail(ErrKind::BadInput, "unknown term node");
  }

  DerivP checkAgainst(const std::vector<Frame>& fs, int l, const TermP& t,
                      const TypeP& T) {
    if (auto* lm = std::get_if<Lam>(&t->v)) {
      auto* ar = std::get_if<TArrow>(&T->v);
      if (!ar)
        fail(ErrKind::TypeMismatch,
             "lambda against a non-function type: " + show_type(T));
      if (lm->b.ann) {
        TypeP dom = at_level(*lm->b.ann, l, "binder annotation");
        if (!type_eq(dom, ar->dom))
          fail(ErrKind::TypeMismatch, "binder annotation " + show_type(dom) +
                                          " does not match " + show_type(ar->dom));
      }
      auto [nm, body] = pushable(fs.back(), lm->b.name, lm->body, 0);
      auto fs2 = fs;
      fs2.back().push_back(Hyp{nm, ar->dom});
      auto db = checkAgainst(fs2, l, body, ar->cod);
      return mk_deriv(RuleName::Abs, mkJ(fs, l, t, T), {db});
    }
    if (auto* p = std::get_if<Pair>(&t->v)) {
      auto* pr = std::get_if<TProd>(&T->v);
      if (!pr)
        fail(ErrKind::TypeMismatch,
             "pair against a non-product type: " + show_type(T));
      auto da = checkAgainst(fs, l, p->fst, pr->fst);
      auto db = checkAgainst(fs, l, p->snd, pr->snd);
      return mk_deriv(RuleName::Pair, mkJ(fs, l, t, T), {da, db});
    }
    if (std::holds_alternative<Star>(t->v)) {
      if (!std::holds_alternative<TUnit>(T->v))
        fail(ErrKind::TypeMismatch,
             "unit value against a non-unit type: " + show_type(T));
      return mk_deriv(RuleName::Star, mkJ(fs, l, t, T));
    }
    if (auto* q = std::get_if<Quo>(&t->v)) {
      if (!boxes_fitch())
        fail(ErrKind::ModeViolation, "quotation is not a term of this system");
      auto* bx = std::get_if<TCBox>(&T->v);
      if (!bx)
        fail(ErrKind::TypeMismatch,
             "quotation against a non-code type: " + show_type(T));
      if (bx->hyps.size() != q->binders.size())
        fail(ErrKind::TypeMismatch,
             "quotation binder count does not match the code type");
      Frame nf;
      for (size_t i = 0; i < q->binders.size(); ++i) {
        const auto& b = q->binders[i];
        if (frame_has(nf, b.name))
          fail(ErrKind::DuplicateBinding, "repeated quotation binder: " + b.name);
        if (b.ann) {
          TypeP a = at_level(*b.ann, l - 1, "quotation binder");
          if (!type_eq(a, bx->hyps[i]))
            fail(ErrKind::TypeMismatch,
                 "quotation binder annotation does not match the code type");
        }
        nf.push_back(Hyp{b.name, bx->hyps[i]});
      }
      auto fs2 = fs;
      fs2.push_back(nf);
      auto db = checkAgainst(fs2, l - 1, q->body, bx->body);
      RuleName r = q->binders.empty() ? RuleName::Quo : RuleName::CQuo;
      return mk_deriv(r, mkJ(fs, l, t, T), {db});
    }
    if (auto* g = std::get_if<GBox>(&t->v)) {
      if (mode != SystemMode::gentzen)
        fail(ErrKind::ModeViolation, "gbox is not a term of this system");
      auto* bx = std::get_if<TCBox>(&T->v);
      if (!bx || !bx->hyps.empty())
        fail(ErrKind::TypeMismatch,
             "gbox against a non-box type: " + show_type(T));
      auto [nf, ps] = gbox_args(fs, l, *g);
      std::vector<Frame> bfs = {nf};
      auto db = checkAgainst(bfs, l, g->body, bx->body);
      ps.push_back(db);
      return mk_deriv(RuleName::GBox, mkJ(fs, l, t, T), std::move(ps));
    }
    if (auto* d = std::get_if<DBox>(&t->v)) {
      if (!boxes_dual())
        fail(ErrKind::ModeViolation, "dual box is not a term of this system");
      auto* bx = std::get_if<TDBox>(&T->v);
      if (!bx)
        fail(ErrKind::TypeMismatch,
             "dual box against a non-dual-box type: " + show_type(T));
      if (mode == SystemMode::dual) {
        std::vector<Frame> fs2 = {Frame{}, fs[0]};
        auto dp = checkAgainst(fs2, l + 1, d->body, bx->body);
        return mk_deriv(RuleName::DBoxI, mkJ(fs, l, t, T), {dp});
      }
      if (fs.size() < 2)
        fail(ErrKind::StackUnderflow, "dual box needs a frame to pop");
      auto fs2 = fs;
      fs2.pop_back();
      auto dp = checkAgainst(fs2, l + 1, d->body, bx->body);
      return mk_deriv(RuleName::MBoxI, mkJ(fs, l, t, T), {dp});
    }
    if (auto* d = std::get_if<DLet>(&t->v)) {
      if (!boxes_dual())
        fail(ErrKind::ModeViolation, "dlet is not a term of this system");
      if (fs.size() < 2)
        fail(ErrKind::StackUnderflow, "dlet binds one frame up");
      auto [mt, dm] = infer(fs, l, d->box);
      auto* bx = std::get_if<TDBox>(&mt->v);
      if (!bx)
        fail(ErrKind::TypeMismatch,
             "dlet subject is not a dual box: " + show_type(mt));
      int tgt = (int)fs.size() - 2;
      auto [nm, body] = pushable(fs[tgt], d->name, d->body, 1);
      auto fs2 = fs;
      fs2[tgt].push_back(Hyp{nm, bx->body});
      auto db2 = checkAgainst(fs2, l, body, T);
      RuleName r = mode == SystemMode::dual ? RuleName::DBoxE : RuleName::MBoxE;
      return mk_deriv(r, mkJ(fs, l, t, T), {dm, db2});
    }
    auto [ti, d] = infer(fs, l, t);
    if (!type_eq(ti, T))
      fail(ErrKind::TypeMismatch,
           "expected " + show_type(T) + ", found " + show_type(ti));
    return d;
  }
};

}  // namespace

DerivP check(SystemMode mode, const Judgment& j) {
  if (!j.term || !j.type) fail(ErrKind::BadInput, "judgment needs a term and a type");
  if (j.stack.height() < 1)
    fail(ErrKind::StackUnderflow, "a judgment needs at least one frame");
  if (mode == SystemMode::gentzen) {
    if (j.level != kUnleveled)
      fail(ErrKind::ModeViolation, "this system's judgments carry no levels");
    if (j.stack.height() != 1)
      fail(ErrKind::ModeViolation, "this system's contexts are a single frame");
  } else {
    if (j.level == kUnleveled)
      fail(ErrKind::BadInput,
           "this system needs a leveled judgment; run level inference first");
    if (mode == SystemMode::dual && j.stack.height() != 2)
      fail(ErrKind::ModeViolation,
           "dual contexts are a modal frame and an ordinary frame");
  }
  if (!well_formed(j))
    fail(ErrKind::BadInput, "ill-formed judgment: " + show_judgment(j));

  Checker ck{mode, mode != SystemMode::gentzen, {}};
  for (const auto& f : j.stack.frames)
    for (const auto& h : f) {
      ck.gate_type(h.type);
      ck.gen.used.insert(h.name);
    }
  ck.gate_type(j.type);
  ck.gate_term(j.term);
  for (const auto& nm : all_names(j.term)) ck.gen.used.insert(nm);
  return ck.checkAgainst(j.stack.frames, j.level, j.term, j.type);
}

// ---------------------------------------------------------------------------
// Level inference.
//
// A derivable unleveled judgment is derivable at any root level that keeps
// every type position nonnegative and every base occurrence inside its
// signature levels, so inference reduces to one unknown: walk all type
// positions, record each position's offset from the root level, intersect
// the per-occurrence admissible sets, and take the smallest solution.

namespace {

struct LevelScan {
  const Signature* sig;
  std::optional<std::set<int>> allowed;
  int minOff = 0;

  void constrain(const std::string& base, int off) {
    auto it = sig->find(base);
    std::set<int> here;
    if (it != sig->end())
      for (int s : it->second) here.insert(s - off);
    if (here.empty())
      fail(ErrKind::Unsatisfiable,
           "base " + base + " has no admissible level in the signature");
    if (!allowed) {
      allowed = std::move(here);
      return;
    }
    std::set<int> inter;
    std::set_intersection(allowed->begin(), allowed->end(), here.begin(),
                          here.end(), std::inserter(inter, inter.begin()));
    allowed = std::move(inter);
  }

  void type_at(const TypeP& t, int off) {
    minOff = std::min(minOff, off);
    if (!type_unleveled(t))
      fail(ErrKind::BadInput, "level inference needs a fully unleveled judgment");
    if (auto* b = std::get_if<TBase>(&t->v)) {
      constrain(b->name, off);
      return;
    }
    if (auto* a = std::get_if<TArrow>(&t->v)) {
      type_at(a->dom, off);
      type_at(a->cod, off);
      return;
    }
    if (auto* p = std::get_if<TProd>(&t->v)) {
      type_at(p->fst, off);
      type_at(p->snd, off);
      return;
    }
    if (auto* c = std::get_if<TCBox>(&t->v)) {
      for (const auto& h : c->hyps) type_at(h, off - 1);
      type_at(c->body, off - 1);
      return;
    }
    if (auto* d = std::get_if<TDBox>(&t->v)) {
      type_at(d->body, off + 1);
      return;
    }
  }

  void term_at(const TermP& t, int off) {
    if (auto* l = std::get_if<Lam>(&t->v)) {
      if (l->b.ann) type_at(*l->b.ann, off);
      term_at(l->body, off);
      return;
    }
    if (auto* a = std::get_if<App>(&t->v)) {
      term_at(a->fun, off);
      term_at(a->arg, off);
      return;
    }
    if (auto* p = std::get_if<Pair>(&t->v)) {
      term_at(p->fst, off);
      term_at(p->snd, off);
      return;
    }
    if (auto* p = std::get_if<Proj>(&t->v)) {
      term_at(p->body, off);
      return;
    }
    if (auto* q = std::get_if<Quo>(&t->v)) {
      for (const auto& b : q->binders)
        if (b.ann) type_at(*b.ann, off - 1);
      term_at(q->body, off - 1);
      return;
    }
    if (auto* u = std::get_if<Unq>(&t->v)) {
      term_at(u->code, off + 1);
      for (const auto& a : u->args) term_at(a, off);
      return;
    }
    if (auto* g = std::get_if<GBox>(&t->v)) {
      for (const auto& b : g->binders)
        if (b.ann) type_at(*b.ann, off - 1);
      for (const auto& a : g->args) term_at(a, off);
      term_at(g->body, off - 1);
      return;
    }
    if (auto* d = std::get_if<DBox>(&t->v)) {
      term_at(d->body, off + 1);
      return;
    }
    if (auto* d = std::get_if<DLet>(&t->v)) {
      term_at(d->box, off);
      term_at(d->body, off);
      return;
    }
  }
};

}  // namespace

std::pair<Judgment, DerivP> infer_levels(const Judgment& j,
                                         const Signature& sig) {
  if (!j.term || !j.type) fail(ErrKind::BadInput, "judgment needs a term and a type");
  if (j.level != kUnleveled)
    fail(ErrKind::BadInput, "level inference needs an unleveled judgment");
  if (j.stack.height() < 1)
    fail(ErrKind::StackUnderflow, "a judgment needs at least one frame");

  LevelScan scan{&sig, std::nullopt, 0};
  int h = j.stack.height();
  for (int i = 0; i < h; ++i) {
    int dist = h - 1 - i;
    for (const auto& hyp : j.stack.frames[i]) scan.type_at(hyp.type, dist);
  }
  scan.type_at(j.type, 0);
  scan.term_at(j.term, 0);

  int lo = std::max(0, -scan.minOff);
  int level;
  if (scan.allowed) {
    auto it = scan.allowed->lower_bound(lo);
    if (it == scan.allowed->end())
      fail(ErrKind::Unsatisfiable,
           "no level satisfies the signature constraints");
    level = *it;
  } else {
    level = lo;
  }
  Judgment stamped = stamp_judgment(j, level);
  DerivP d = check(SystemMode::fitch, stamped);
  return {stamped, d};
}

// ---------------------------------------------------------------------------
// Structural transformations: surgery on the conclusion judgment followed
// by a full re-check, which rebuilds the derivation in the adjusted
// context. Works for leveled stacks and for unleveled single-frame ones.

DerivP derive_structural(StructRule r, const DerivP& d, const StructData& s) {
  if (!d) fail(ErrKind::BadInput, "missing derivation");
  Judgment j = d->conclusion;
  int h = j.stack.height();
  if (s.frame < 0 || s.frame >= h)
    fail(ErrKind::FrameIndexOutOfRange,
         "no frame at distance " + std::to_string(s.frame));
  int fi = h - 1 - s.frame;
  auto frames = j.stack.frames;
  Frame& f = frames[fi];
  int flv = j.level == kUnleveled ? kUnleveled : j.level + s.frame;
  SystemMode mode =
      j.level == kUnleveled ? SystemMode::gentzen : SystemMode::fitch;

  auto posOk = [&](int p, int hi) {
    if (p < 0 || p >= hi)
      fail(ErrKind::FrameIndexOutOfRange,
           "no hypothesis at position " + std::to_string(p));
  };

  switch (r) {
    case StructRule::weaken: {
      if (!s.hyp || !s.hyp->type)
        fail(ErrKind::BadInput, "weakening needs a hypothesis to insert");
      if (s.pos < 0 || s.pos > (int)f.size())
        fail(ErrKind::FrameIndexOutOfRange,
             "no insertion point at position " + std::to_string(s.pos));
      if (frame_has(f, s.hyp->name))
        fail(ErrKind::DuplicateName,
             s.hyp->name + " already names a hypothesis in that frame");
      Hyp hh{s.hyp->name, coerce_level(s.hyp->type, flv, "weakening hypothesis")};
      f.insert(f.begin() + s.pos, hh);
      return check(mode, Judgment{ContextStack{frames}, j.level, j.term, j.type});
    }
    case StructRule::exchange: {
      posOk(s.pos, (int)f.size());
      posOk(s.pos2, (int)f.size());
      std::swap(f[s.pos], f[s.pos2]);
      return check(mode, Judgment{ContextStack{frames}, j.level, j.term, j.type});
    }
    case StructRule::contract: {
      posOk(s.pos, (int)f.size());
      posOk(s.pos2, (int)f.size());
      if (s.pos == s.pos2)
        fail(ErrKind::BadInput, "contraction needs two distinct hypotheses");
      const Hyp keep = f[s.pos];
      const Hyp drop = f[s.pos2];
      if (!type_eq(keep.type, drop.type))
        fail(ErrKind::TypeMismatch,
             "contracted hypotheses have different types");
      TermP t2 = rename_at(j.term, drop.name, keep.name, s.frame);
      f.erase(f.begin() + s.pos2);
      return check(mode, Judgment{ContextStack{frames}, j.level, t2, j.type});
    }
    case StructRule::subst: {
      if (!s.substArg) fail(ErrKind::BadInput, "substitution needs a term");
      int idx = -1;
      for (int i = 0; i < (int)f.size(); ++i)
        if (f[i].name == s.substVar) idx = i;
      if (idx < 0)
        fail(ErrKind::VariableNotInScope,
             s.substVar + " is not a hypothesis of that frame");
      TypeP A = f[idx].type;
      std::vector<Frame> pfx(frames.begin(), frames.begin() + fi + 1);
      pfx.back() = Frame(f.begin(), f.begin() + idx);
      check(mode, Judgment{ContextStack{pfx}, flv, s.substArg, A});
      TermP t2 = subst_at(s.substArg, s.substVar, j.term, s.frame);
      f.erase(f.begin() + idx);
      return check(mode, Judgment{ContextStack{frames}, j.level, t2, j.type});
    }
  }
  fail(ErrKind::BadInput, "unknown structural rule");
}

DerivP denecessitate(const DerivP& d) {
  if (!d) fail(ErrKind::BadInput, "missing derivation");
  const Judgment& j = d->conclusion;
  if (j.level == kUnleveled)
    fail(ErrKind::NotClosedBox, "needs a leveled derivation of a closed box");
  if (j.stack.height() != 1 || !j.stack.frames[0].empty())
    fail(ErrKind::NotClosedBox, "the context must be a single empty frame");
  auto* bx = std::get_if<TCBox>(&j.type->v);
  if (!bx || !bx->hyps.empty())
    fail(ErrKind::NotClosedBox,
         "the subject type must be a plain box, got " + show_type(j.type));
  Judgment nj{ContextStack{{Frame{}, Frame{}}}, j.level - 1, unq(j.term),
              bx->body};
  return mk_deriv(RuleName::Unq, nj, {d});
}

std::vector<std::pair<TermP, TypeP>> structural_inhabitants(
    const std::vector<TypeP>& ctxTypes, const TypeP& goal) {
  if (ctxTypes.empty())
    fail(ErrKind::BadInput, "the context must hold the distinguished hypothesis");
  if (!goal) fail(ErrKind::BadInput, "missing goal type");
  for (const auto& t : ctxTypes)
    if (!t) fail(ErrKind::BadInput, "missing context type");

  size_t n = ctxTypes.size();
  std::vector<TypeP> gamma(ctxTypes.begin(), ctxTypes.end() - 1);
  TypeP B = ctxTypes.back();
  TypeP A = goal;

  std::vector<Binder> xs;
  std::vector<TermP> xVars;
  for (size_t i = 0; i + 1 < n; ++i) {
    std::string nm = "x" + std::to_string(i + 1);
    xs.push_back(Binder{nm, std::nullopt});
    xVars.push_back(v_(nm));
  }

  auto snoc = [](std::vector<TypeP> ts, const TypeP& t) {
    ts.push_back(t);
    return ts;
  };

  std::vector<std::pair<TermP, TypeP>> out;

  {  // weakening: [Gamma]A -> [Gamma,B]A
    auto bs = xs;
    bs.push_back(Binder{"y", std::nullopt});
    TermP tm = lam("m", quo(bs, unq(v_("m"), xVars)));
    TypeP ty = t_arrow(t_cbox(gamma, A), t_cbox(snoc(gamma, B), A));
    out.push_back({tm, ty});
  }
  {  // contraction: [Gamma,B,B]A -> [Gamma,B]A
    auto bs = xs;
    bs.push_back(Binder{"y", std::nullopt});
    auto args = xVars;
    args.push_back(v_("y"));
    args.push_back(v_("y"));
    TermP tm = lam("m", quo(bs, unq(v_("m"), args)));
    TypeP ty = t_arrow(t_cbox(snoc(snoc(gamma, B), B), A),
                       t_cbox(snoc(gamma, B), A));
    out.push_back({tm, ty});
  }
  {  // exchange: [Gamma0,U,V]A -> [Gamma0,V,U]A (swaps the last two)
    std::vector<TypeP> gamma0 =
        n >= 2 ? std::vector<TypeP>(ctxTypes.begin(), ctxTypes.end() - 2)
               : std::vector<TypeP>{};
    TypeP U = n >= 2 ? ctxTypes[n - 2] : B;
    TypeP V = B;
    std::vector<Binder> bs;
    std::vector<TermP> args0;
    for (size_t i = 0; i < gamma0.size(); ++i) {
      std::string nm = "x" + std::to_string(i + 1);
      bs.push_back(Binder{nm, std::nullopt});
      args0.push_back(v_(nm));
    }
    bs.push_back(Binder{"u", std::nullopt});  // u : V
    bs.push_back(Binder{"v", std::nullopt});  // v : U
    auto args = args0;
    args.push_back(v_("v"));
    args.push_back(v_("u"));
    TermP tm = lam("m", quo(bs, unq(v_("m"), args)));
    TypeP ty = t_arrow(t_cbox(snoc(snoc(gamma0, U), V), A),
                       t_cbox(snoc(snoc(gamma0, V), U), A));
    out.push_back({tm, ty});
  }
  {  // cut: [Gamma]B -> [Gamma,B]A -> [Gamma]A
    TermP inner = unq(v_("m"), xVars);
    auto args = xVars;
    args.push_back(inner);
    TermP tm = lam("m", lam("n", quo(xs, unq(v_("n"), args))));
    TypeP ty = t_arrow(t_cbox(gamma, B),
                       t_arrow(t_cbox(snoc(gamma, B), A), t_cbox(gamma, A)));
    out.push_back({tm, ty});
  }
  return out;
}

}  // namespace lbox
