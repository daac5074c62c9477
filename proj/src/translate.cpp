#include "lbox/translate.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace lbox {

// ---------------------------------------------------------------------------
// Desugaring.

TypeP desugar_type(const TypeP& t) {
  if (!t) fail(ErrKind::BadInput, "missing type");
  if (auto* a = std::get_if<TArrow>(&t->v))
    return t_arrow(desugar_type(a->dom), desugar_type(a->cod));
  if (auto* p = std::get_if<TProd>(&t->v))
    return t_prod(desugar_type(p->fst), desugar_type(p->snd));
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    TypeP cur = desugar_type(c->body);
    for (auto it = c->hyps.rbegin(); it != c->hyps.rend(); ++it)
      cur = t_arrow(desugar_type(*it), cur);
    return t_box(cur);
  }
  if (auto* d = std::get_if<TDBox>(&t->v)) return t_dbox(desugar_type(d->body));
  return t;  // base, unit
}

namespace {

Binder desugar_binder(const Binder& b) {
  if (!b.ann) return b;
  return Binder{b.name, desugar_type(*b.ann)};
}

}  // namespace

TermP desugar_term(const TermP& t) {
  if (!t) fail(ErrKind::BadInput, "missing term");
  if (std::holds_alternative<Var>(t->v) || std::holds_alternative<Star>(t->v))
    return t;
  if (auto* l = std::get_if<Lam>(&t->v)) {
    Binder b = desugar_binder(l->b);
    TermP body = desugar_term(l->body);
    return b.ann ? lam(b.name, *b.ann, body) : lam(b.name, body);
  }
  if (auto* a = std::get_if<App>(&t->v))
    return app(desugar_term(a->fun), desugar_term(a->arg));
  if (auto* p = std::get_if<Pair>(&t->v))
    return pair_(desugar_term(p->fst), desugar_term(p->snd));
  if (auto* p = std::get_if<Proj>(&t->v)) {
    TermP b = desugar_term(p->body);
    return p->idx == 1 ? proj1(b) : proj2(b);
  }
  if (auto* q = std::get_if<Quo>(&t->v)) {
    TermP body = desugar_term(q->body);
    for (auto it = q->binders.rbegin(); it != q->binders.rend(); ++it) {
      Binder b = desugar_binder(*it);
      body = b.ann ? lam(b.name, *b.ann, body) : lam(b.name, body);
    }
    return quo(body);
  }
  if (auto* u = std::get_if<Unq>(&t->v)) {
    TermP cur = unq(desugar_term(u->code));
    for (const auto& a : u->args) cur = app(cur, desugar_term(a));
    return cur;
  }
  if (auto* g = std::get_if<GBox>(&t->v)) {
    std::vector<Binder> bs;
    for (const auto& b : g->binders) bs.push_back(desugar_binder(b));
    std::vector<TermP> args;
    for (const auto& a : g->args) args.push_back(desugar_term(a));
    return gbox(bs, args, desugar_term(g->body));
  }
  if (auto* d = std::get_if<DBox>(&t->v)) return dbox(desugar_term(d->body));
  if (auto* d = std::get_if<DLet>(&t->v))
    return dlet(d->name, desugar_term(d->box), desugar_term(d->body));
  fail(ErrKind::BadInput, "unknown term node");
}

Judgment desugar_judgment(const Judgment& j) {
  Judgment out = j;
  for (auto& f : out.stack.frames)
    for (auto& h : f) h.type = desugar_type(h.type);
  if (j.term) out.term = desugar_term(j.term);
  if (j.type) out.type = desugar_type(j.type);
  return out;
}

// ---------------------------------------------------------------------------
// Translatability.

namespace {

bool translatable_at(const TermP& t, int depth) {
  if (auto* l = std::get_if<Lam>(&t->v)) return translatable_at(l->body, depth);
  if (auto* a = std::get_if<App>(&t->v))
    return translatable_at(a->fun, depth) && translatable_at(a->arg, depth);
  if (auto* p = std::get_if<Pair>(&t->v))
    return translatable_at(p->fst, depth) && translatable_at(p->snd, depth);
  if (auto* p = std::get_if<Proj>(&t->v))
    return translatable_at(p->body, depth);
  if (auto* q = std::get_if<Quo>(&t->v))
    return translatable_at(q->body, depth + 1);
  if (auto* u = std::get_if<Unq>(&t->v)) {
    if (depth < 1) return false;
    if (!translatable_at(u->code, depth - 1)) return false;
    for (const auto& a : u->args)
      if (!translatable_at(a, depth)) return false;
    return true;
  }
  if (auto* g = std::get_if<GBox>(&t->v)) {
    for (const auto& a : g->args)
      if (!translatable_at(a, depth)) return false;
    return translatable_at(g->body, depth - 1);
  }
  if (auto* d = std::get_if<DBox>(&t->v))
    return translatable_at(d->body, depth + 1);
  if (auto* d = std::get_if<DLet>(&t->v))
    return translatable_at(d->box, depth) && translatable_at(d->body, depth);
  return true;  // Var, Star
}

}  // namespace

bool gentzen_translatable(const TermP& t) {
  if (!t) fail(ErrKind::BadInput, "missing term");
  return translatable_at(t, 0);
}

// ---------------------------------------------------------------------------
// Derivation translation.

namespace {

struct GFresh {
  std::set<std::string> used;
  std::string pick(const std::string& base) {
    if (used.insert(base).second) return base;
    for (int i = 1;; ++i) {
      std::string cand = base + "'" + std::to_string(i);
      if (used.insert(cand).second) return cand;
    }
  }
};

TypeP g_type(const TypeP& t) {
  if (auto* b = std::get_if<TBase>(&t->v)) return t_base(b->name);
  if (auto* a = std::get_if<TArrow>(&t->v))
    return t_arrow(g_type(a->dom), g_type(a->cod));
  if (auto* p = std::get_if<TProd>(&t->v))
    return t_prod(g_type(p->fst), g_type(p->snd));
  if (std::holds_alternative<TUnit>(t->v)) return t_unit();
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    if (!c->hyps.empty())
      fail(ErrKind::UnsupportedConstruct,
           "hypothesis-binding box types have no image here; desugar first");
    return t_box(g_type(c->body));
  }
  fail(ErrKind::UnsupportedConstruct,
       "dual box types have no image in the gbox system");
}

struct GTranslator {
  GFresh gen;
  // One renaming per stack frame of the node being translated.
  std::vector<std::map<std::string, std::string>> env;
  // One binding collector per enclosing quotation, outermost first.
  struct Binding {
    std::string name;
    TermP code;
  };
  std::vector<std::vector<Binding>> collectors;

  TermP go(const DerivP& d) {
    const Judgment& j = d->conclusion;
    switch (d->rule) {
      case RuleName::Var: {
        const auto& x = std::get<Var>(j.term->v);
        auto it = env.back().find(x.name);
        if (it == env.back().end())
          fail(ErrKind::VariableNotInScope, "translation lost " + x.name);
        return v_(it->second);
      }
      case RuleName::Abs: {
        // The checker may have renamed the binder inside the premise;
        // the premise's rightmost hypothesis carries the effective name.
        const auto& ar = std::get<TArrow>(j.type->v);
        const DerivP& p = d->premises.at(0);
        const std::string& pname =
            p->conclusion.stack.frames.back().back().name;
        std::string gname = gen.pick(pname);
        env.back()[pname] = gname;
        TermP body = go(p);
        env.back().erase(pname);
        return lam(gname, g_type(ar.dom), body);
      }
      case RuleName::App:
        return app(go(d->premises.at(0)), go(d->premises.at(1)));
      case RuleName::Pair:
        return pair_(go(d->premises.at(0)), go(d->premises.at(1)));
      case RuleName::Proj1:
        return proj1(go(d->premises.at(0)));
      case RuleName::Proj2:
        return proj2(go(d->premises.at(0)));
      case RuleName::Star:
        return star();
      case RuleName::Quo: {
        collectors.push_back({});
        env.push_back({});
        TermP body = go(d->premises.at(0));
        env.pop_back();
        auto bound = collectors.back();
        collectors.pop_back();
        std::vector<Binder> bs;
        std::vector<TermP> args;
        for (const auto& b : bound) {
          bs.push_back(Binder{b.name, std::nullopt});
          args.push_back(b.code);
        }
        return gbox(bs, args, body);
      }
      case RuleName::Unq: {
        if (collectors.empty())
          fail(ErrKind::UnsupportedConstruct,
               "a splice at quotation depth 0 has no image in the gbox system");
        auto saved = collectors.back();
        collectors.pop_back();
        auto savedEnv = env.back();
        env.pop_back();
        TermP code = go(d->premises.at(0));
        env.push_back(savedEnv);
        collectors.push_back(saved);
        std::string z = gen.pick("z");
        collectors.back().push_back(Binding{z, code});
        return v_(z);
      }
      case RuleName::CQuo:
      case RuleName::CUnq:
        fail(ErrKind::UnsupportedConstruct,
             "hypothesis-binding quotations have no direct image; desugar first");
      default:
        fail(ErrKind::UnsupportedConstruct,
             std::string(rule_name(d->rule)) +
                 " has no image in the gbox system");
    }
  }
};

}  // namespace

Judgment to_gentzen(const DerivP& d) {
  if (!d) fail(ErrKind::BadInput, "missing derivation");
  const Judgment& j = d->conclusion;
  GTranslator tr;
  Frame out;
  int h = j.stack.height();
  tr.env.resize(h);
  for (int i = 0; i < h; ++i) {
    int dist = h - 1 - i;
    for (const auto& hyp : j.stack.frames[i]) {
      std::string gname = tr.gen.pick(hyp.name);
      tr.env[i][hyp.name] = gname;
      TypeP ty = g_type(hyp.type);
      for (int k = 0; k < dist; ++k) ty = t_box(ty);
      out.push_back(Hyp{gname, ty});
    }
  }
  TermP tm = tr.go(d);
  return Judgment{ContextStack{{out}}, kUnleveled, tm, g_type(j.type)};
}

}  // namespace lbox
