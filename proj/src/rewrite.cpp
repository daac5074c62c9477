#include "lbox/rewrite.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lbox/check.hpp"

namespace lbox {

const char* redex_kind_name(RedexKind k) {
  switch (k) {
    case RedexKind::beta_arrow: return "beta_arrow";
    case RedexKind::beta_box: return "beta_box";
    case RedexKind::beta_cbox: return "beta_cbox";
    case RedexKind::beta_prod1: return "beta_prod1";
    case RedexKind::beta_prod2: return "beta_prod2";
  }
  return "?";
}

namespace {

struct FreshGen {
  std::set<std::string> used;
  std::string fresh(const std::string& base) {
    for (int i = 1;; ++i) {
      std::string cand = base + "'" + std::to_string(i);
      if (used.insert(cand).second) return cand;
    }
  }
};

// Simultaneous substitution at level counter 0. Counter n is the binder
// level minus the current level: +1 under a quotation body, -1 under a
// splice or dual-box body (stop when already 0: that scope was popped).
struct SubstEngine {
  struct Bind {
    TermP val;
    std::set<std::pair<std::string, int>> fvs;
  };
  std::map<std::string, Bind> binds;
  FreshGen gen;

  bool captures(const std::string& y, int relLevel) const {
    for (const auto& [_, b] : binds)
      if (b.fvs.count({y, relLevel})) return true;
    return false;
  }

  // Rename binder y (binding at offset bindOff into body) when some live
  // replacement would be captured. Returns the name to use.
  std::string avoid(const std::string& y, int n, int deltaBind,
                    TermP& body, int bindOffIntoBody) {
    if (!captures(y, n - deltaBind)) return y;
    std::string y2 = gen.fresh(y);
    body = rename_at(body, y, y2, bindOffIntoBody);
    return y2;
  }

  TermP go(const TermP& t, int n) {
    if (binds.empty()) return t;
    if (auto* x = std::get_if<Var>(&t->v)) {
      if (n == 0) {
        auto it = binds.find(x->name);
        if (it != binds.end()) return it->second.val;
      }
      return t;
    }
    if (auto* l = std::get_if<Lam>(&t->v)) {
      Bind saved;
      bool shadow = n == 0 && binds.count(l->b.name);
      if (shadow) {
        saved = binds[l->b.name];
        binds.erase(l->b.name);
      }
      TermP body = l->body;
      std::string nm = avoid(l->b.name, n, 0, body, 0);
      TermP r = l->b.ann ? lam(nm, *l->b.ann, go(body, n))
                         : lam(nm, go(body, n));
      if (shadow) binds[l->b.name] = saved;
      return r;
    }
    if (auto* a = std::get_if<App>(&t->v))
      return app(go(a->fun, n), go(a->arg, n));
    if (auto* p = std::get_if<Pair>(&t->v))
      return pair_(go(p->fst, n), go(p->snd, n));
    if (auto* p = std::get_if<Proj>(&t->v)) {
      auto r = go(p->body, n);
      return p->idx == 1 ? proj1(r) : proj2(r);
    }
    if (std::holds_alternative<Star>(t->v)) return t;
    if (auto* q = std::get_if<Quo>(&t->v)) {
      // Binders live at the body level (counter n+1 there, never 0 for
      // n >= 0), so they cannot shadow; they can capture.
      TermP body = q->body;
      std::vector<Binder> bs;
      for (const auto& b : q->binders)
        bs.push_back(Binder{avoid(b.name, n, -1, body, 0), b.ann});
      return quo(bs, go(body, n + 1));
    }
    if (auto* u = std::get_if<Unq>(&t->v)) {
      TermP code = n == 0 ? u->code : go(u->code, n - 1);
      std::vector<TermP> args;
      for (const auto& a : u->args) args.push_back(go(a, n));
      return unq(code, args);
    }
    if (auto* g = std::get_if<GBox>(&t->v)) {
      std::vector<TermP> args;
      for (const auto& a : g->args) args.push_back(go(a, n));
      TermP body = g->body;
      std::vector<Binder> bs;
      for (const auto& b : g->binders)
        bs.push_back(Binder{avoid(b.name, n, -1, body, 0), b.ann});
      return gbox(bs, args, go(body, n + 1));
    }
    if (auto* d = std::get_if<DBox>(&t->v)) {
      if (n == 0) return t;
      return dbox(go(d->body, n - 1));
    }
    if (auto* d = std::get_if<DLet>(&t->v)) {
      TermP box = go(d->box, n);
      Bind saved;
      bool shadow = n == 1 && binds.count(d->name);
      if (shadow) {
        saved = binds[d->name];
        binds.erase(d->name);
      }
      TermP body = d->body;
      std::string nm = d->name;
      if (!shadow) nm = avoid(d->name, n, 1, body, 1);
      TermP r = dlet(nm, box, go(body, n));
      if (shadow) binds[d->name] = saved;
      return r;
    }
    fail(ErrKind::BadInput, "substitution: unknown term node");
  }
};

SubstEngine make_engine(const std::vector<std::pair<std::string, TermP>>& bs,
                        const TermP& M) {
  SubstEngine e;
  for (const auto& nm : all_names(M)) e.gen.used.insert(nm);
  for (const auto& [x, N] : bs) {
    if (e.binds.count(x))
      fail(ErrKind::DuplicateBinding, "repeated substitution name: " + x);
    for (const auto& nm : all_names(N)) e.gen.used.insert(nm);
    e.gen.used.insert(x);
    e.binds[x] = SubstEngine::Bind{N, free_vars(N)};
  }
  return e;
}

}  // namespace

TermP subst_leveled(const TermP& N, const std::string& x, const TermP& M) {
  auto e = make_engine({{x, N}}, M);
  return e.go(M, 0);
}

TermP subst_at(const TermP& N, const std::string& x, const TermP& M,
               int atLevel) {
  auto e = make_engine({{x, N}}, M);
  return e.go(M, atLevel);
}

TermP psubst(const std::vector<std::pair<std::string, TermP>>& binds,
             const TermP& M) {
  auto e = make_engine(binds, M);
  return e.go(M, 0);
}

TermP rename_at(const TermP& M, const std::string& x, const std::string& y,
                int atLevel) {
  auto e = make_engine({{x, v_(y)}}, M);
  e.gen.used.insert(y);
  return e.go(M, atLevel);
}

// ---------------------------------------------------------------------------
// Redexes and reduction.

namespace {

bool redex_kind_at(const TermP& t, RedexKind& out) {
  if (auto* a = std::get_if<App>(&t->v)) {
    if (std::holds_alternative<Lam>(a->fun->v)) {
      out = RedexKind::beta_arrow;
      return true;
    }
    return false;
  }
  if (auto* u = std::get_if<Unq>(&t->v)) {
    if (auto* q = std::get_if<Quo>(&u->code->v)) {
      if (q->binders.size() != u->args.size()) return false;
      out = u->args.empty() ? RedexKind::beta_box : RedexKind::beta_cbox;
      return true;
    }
    return false;
  }
  if (auto* p = std::get_if<Proj>(&t->v)) {
    if (std::holds_alternative<Pair>(p->body->v)) {
      out = p->idx == 1 ? RedexKind::beta_prod1 : RedexKind::beta_prod2;
      return true;
    }
    return false;
  }
  return false;
}

std::vector<TermP> children(const TermP& t) {
  if (auto* l = std::get_if<Lam>(&t->v)) return {l->body};
  if (auto* a = std::get_if<App>(&t->v)) return {a->fun, a->arg};
  if (auto* p = std::get_if<Pair>(&t->v)) return {p->fst, p->snd};
  if (auto* p = std::get_if<Proj>(&t->v)) return {p->body};
  if (auto* q = std::get_if<Quo>(&t->v)) return {q->body};
  if (auto* u = std::get_if<Unq>(&t->v)) {
    std::vector<TermP> cs = {u->code};
    cs.insert(cs.end(), u->args.begin(), u->args.end());
    return cs;
  }
  if (auto* g = std::get_if<GBox>(&t->v)) {
    std::vector<TermP> cs = g->args;
    cs.push_back(g->body);
    return cs;
  }
  if (auto* d = std::get_if<DBox>(&t->v)) return {d->body};
  if (auto* d = std::get_if<DLet>(&t->v)) return {d->box, d->body};
  return {};
}

TermP with_child(const TermP& t, int i, const TermP& c) {
  if (auto* l = std::get_if<Lam>(&t->v))
    return l->b.ann ? lam(l->b.name, *l->b.ann, c) : lam(l->b.name, c);
  if (auto* a = std::get_if<App>(&t->v))
    return i == 0 ? app(c, a->arg) : app(a->fun, c);
  if (auto* p = std::get_if<Pair>(&t->v))
    return i == 0 ? pair_(c, p->snd) : pair_(p->fst, c);
  if (auto* p = std::get_if<Proj>(&t->v))
    return p->idx == 1 ? proj1(c) : proj2(c);
  if (auto* q = std::get_if<Quo>(&t->v)) return quo(q->binders, c);
  if (auto* u = std::get_if<Unq>(&t->v)) {
    if (i == 0) return unq(c, u->args);
    auto args = u->args;
    args[i - 1] = c;
    return unq(u->code, args);
  }
  if (auto* g = std::get_if<GBox>(&t->v)) {
    if (i == (int)g->args.size()) return gbox(g->binders, g->args, c);
    auto args = g->args;
    args[i] = c;
    return gbox(g->binders, args, g->body);
  }
  if (auto* d = std::get_if<DBox>(&t->v)) return dbox(c);
  if (auto* d = std::get_if<DLet>(&t->v))
    return i == 0 ? dlet(d->name, c, d->body) : dlet(d->name, d->box, c);
  fail(ErrKind::InvalidSite, "node has no child " + std::to_string(i));
}

void scan(const TermP& t, std::vector<int>& path, std::vector<RedexSite>& out) {
  RedexKind k;
  if (redex_kind_at(t, k)) out.push_back(RedexSite{path, k});
  auto cs = children(t);
  for (int i = 0; i < (int)cs.size(); ++i) {
    path.push_back(i);
    scan(cs[i], path, out);
    path.pop_back();
  }
}

TermP contract(const TermP& t, RedexKind kind) {
  RedexKind actual;
  if (!redex_kind_at(t, actual) || actual != kind)
    fail(ErrKind::InvalidSite, "no " + std::string(redex_kind_name(kind)) +
                                   " redex at site");
  switch (kind) {
    case RedexKind::beta_arrow: {
      const auto& a = std::get<App>(t->v);
      const auto& l = std::get<Lam>(a.fun->v);
      return subst_leveled(a.arg, l.b.name, l.body);
    }
    case RedexKind::beta_box: {
      const auto& u = std::get<Unq>(t->v);
      return std::get<Quo>(u.code->v).body;
    }
    case RedexKind::beta_cbox: {
      const auto& u = std::get<Unq>(t->v);
      const auto& q = std::get<Quo>(u.code->v);
      std::vector<std::pair<std::string, TermP>> bs;
      for (size_t i = 0; i < q.binders.size(); ++i)
        bs.push_back({q.binders[i].name, u.args[i]});
      return psubst(bs, q.body);
    }
    case RedexKind::beta_prod1:
      return std::get<Pair>(std::get<Proj>(t->v).body->v).fst;
    case RedexKind::beta_prod2:
      return std::get<Pair>(std::get<Proj>(t->v).body->v).snd;
  }
  fail(ErrKind::InvalidSite, "bad redex kind");
}

TermP rebuild(const TermP& t, const std::vector<int>& path, size_t at,
              RedexKind kind) {
  if (at == path.size()) return contract(t, kind);
  auto cs = children(t);
  int i = path[at];
  if (i < 0 || i >= (int)cs.size())
    fail(ErrKind::InvalidSite, "path leaves the term");
  return with_child(t, i, rebuild(cs[i], path, at + 1, kind));
}

}  // namespace

std::vector<RedexSite> redexes(const TermP& M) {
  std::vector<RedexSite> out;
  std::vector<int> path;
  scan(M, path, out);
  return out;
}

TermP step(const TermP& M, const RedexSite& site) {
  return rebuild(M, site.path, 0, site.kind);
}

TermP normalize(const TermP& M, int budget) {
  TermP cur = M;
  for (int used = 0;; ++used) {
    auto sites = redexes(cur);
    if (sites.empty()) return cur;
    if (used >= budget)
      fail(ErrKind::BudgetExceeded,
           "normalization exceeded " + std::to_string(budget) + " steps");
    cur = step(cur, sites.front());
  }
}

// ---------------------------------------------------------------------------
// Eta-long forms.
//
// Expansion is type-directed. Neutral spines (variable heads under
// application, projection, splicing) have their argument positions
// expanded recursively; introduction forms descend under the matching
// type constructor. Unit collapses to the canonical point.

namespace {

struct EtaEnv {
  std::vector<Frame> frames;  // leftmost first, like ContextStack
  FreshGen* gen;
};

TypeP lookup_var(const EtaEnv& env, const std::string& x) {
  const Frame& f = env.frames.back();
  for (auto it = f.rbegin(); it != f.rend(); ++it)
    if (it->name == x) return it->type;
  fail(ErrKind::VariableNotInScope, "eta: unbound variable " + x);
}

TermP eta(const TermP& M, const TypeP& A, EtaEnv& env);

// Expanded spine plus its type.
std::pair<TermP, TypeP> neutralize(const TermP& M, EtaEnv& env) {
  if (auto* x = std::get_if<Var>(&M->v)) return {M, lookup_var(env, x->name)};
  if (auto* a = std::get_if<App>(&M->v)) {
    auto [h, ht] = neutralize(a->fun, env);
    auto* ar = std::get_if<TArrow>(&ht->v);
    if (!ar) fail(ErrKind::TypeMismatch, "eta: application of a non-function");
    return {app(h, eta(a->arg, ar->dom, env)), ar->cod};
  }
  if (auto* p = std::get_if<Proj>(&M->v)) {
    auto [b, bt] = neutralize(p->body, env);
    auto* pr = std::get_if<TProd>(&bt->v);
    if (!pr) fail(ErrKind::TypeMismatch, "eta: projection from a non-pair");
    return {p->idx == 1 ? proj1(b) : proj2(b), p->idx == 1 ? pr->fst : pr->snd};
  }
  if (auto* u = std::get_if<Unq>(&M->v)) {
    if (env.frames.size() < 2)
      fail(ErrKind::StackUnderflow, "eta: splice with no outer frame");
    Frame popped = env.frames.back();
    env.frames.pop_back();
    auto [c, ct] = neutralize(u->code, env);
    env.frames.push_back(popped);
    auto* bx = std::get_if<TCBox>(&ct->v);
    if (!bx || bx->hyps.size() != u->args.size())
      fail(ErrKind::TypeMismatch, "eta: splice of a non-code value");
    std::vector<TermP> args;
    for (size_t i = 0; i < u->args.size(); ++i)
      args.push_back(eta(u->args[i], bx->hyps[i], env));
    return {unq(c, args), bx->body};
  }
  fail(ErrKind::UnsupportedConstruct,
       "eta: unsupported neutral form: " + show_term(M));
}

// Wrap a neutral of type A into eta-long shape.
TermP expand_neutral(const TermP& M, const TypeP& A, EtaEnv& env) {
  if (auto* ar = std::get_if<TArrow>(&A->v)) {
    std::string z = env.gen->fresh("z");
    env.frames.back().push_back(Hyp{z, ar->dom});
    TermP body = eta(app(M, v_(z)), ar->cod, env);
    env.frames.back().pop_back();
    return lam(z, body);
  }
  if (auto* pr = std::get_if<TProd>(&A->v)) {
    return pair_(eta(proj1(M), pr->fst, env), eta(proj2(M), pr->snd, env));
  }
  if (std::holds_alternative<TUnit>(A->v)) return star();
  if (auto* bx = std::get_if<TCBox>(&A->v)) {
    std::vector<Binder> bs;
    Frame fresh;
    std::vector<TermP> argVars;
    for (const auto& h : bx->hyps) {
      std::string z = env.gen->fresh("z");
      bs.push_back(Binder{z, std::nullopt});
      fresh.push_back(Hyp{z, h});
      argVars.push_back(v_(z));
    }
    env.frames.push_back(fresh);
    std::vector<TermP> args;
    for (size_t i = 0; i < argVars.size(); ++i)
      args.push_back(eta(argVars[i], bx->hyps[i], env));
    TermP body = eta(unq(M, args), bx->body, env);
    env.frames.pop_back();
    return quo(bs, body);
  }
  return M;  // base or dual box: leave the neutral in place
}

TermP eta(const TermP& M, const TypeP& A, EtaEnv& env) {
  if (std::holds_alternative<TUnit>(A->v)) return star();
  if (auto* ar = std::get_if<TArrow>(&A->v)) {
    if (auto* l = std::get_if<Lam>(&M->v)) {
      std::string nm = l->b.name;
      TermP body = l->body;
      for (const auto& h : env.frames.back())
        if (h.name == nm) {
          std::string nm2 = env.gen->fresh(nm);
          body = rename_at(body, nm, nm2, 0);
          nm = nm2;
          break;
        }
      env.frames.back().push_back(Hyp{nm, ar->dom});
      TermP r = lam(nm, eta(body, ar->cod, env));
      env.frames.back().pop_back();
      return r;
    }
    auto [n, _] = neutralize(M, env);
    return expand_neutral(n, A, env);
  }
  if (auto* pr = std::get_if<TProd>(&A->v)) {
    if (auto* p = std::get_if<Pair>(&M->v))
      return pair_(eta(p->fst, pr->fst, env), eta(p->snd, pr->snd, env));
    auto [n, _] = neutralize(M, env);
    return expand_neutral(n, A, env);
  }
  if (auto* bx = std::get_if<TCBox>(&A->v)) {
    if (auto* q = std::get_if<Quo>(&M->v)) {
      if (q->binders.size() != bx->hyps.size())
        fail(ErrKind::TypeMismatch, "eta: code arity mismatch");
      Frame f;
      std::vector<Binder> bs;
      TermP body = q->body;
      for (size_t i = 0; i < q->binders.size(); ++i) {
        std::string nm = q->binders[i].name;
        f.push_back(Hyp{nm, bx->hyps[i]});
        bs.push_back(Binder{nm, std::nullopt});
      }
      env.frames.push_back(f);
      TermP r = quo(bs, eta(body, bx->body, env));
      env.frames.pop_back();
      return r;
    }
    auto [n, _] = neutralize(M, env);
    return expand_neutral(n, A, env);
  }
  // Base or dual box.
  if (std::holds_alternative<Var>(M->v) || std::holds_alternative<App>(M->v) ||
      std::holds_alternative<Proj>(M->v) || std::holds_alternative<Unq>(M->v)) {
    auto [n, _] = neutralize(M, env);
    return n;
  }
  return M;
}

}  // namespace

TermP eta_long(const TermP& M, const TypeP& A, const Judgment& j) {
  FreshGen gen;
  for (const auto& nm : all_names(M)) gen.used.insert(nm);
  for (const auto& f : j.stack.frames)
    for (const auto& h : f) gen.used.insert(h.name);
  EtaEnv env{j.stack.frames, &gen};
  if (env.frames.empty()) env.frames.push_back({});
  return eta(M, A, env);
}

bool equal_theory(const TermP& M, const TermP& N, const Judgment& j) {
  Judgment jm{j.stack, j.level, M, j.type};
  Judgment jn{j.stack, j.level, N, j.type};
  check(SystemMode::fitch, jm);
  check(SystemMode::fitch, jn);
  TermP m = eta_long(normalize(M), j.type, j);
  TermP n = eta_long(normalize(N), j.type, j);
  return alpha_eq(m, n);
}

}  // namespace lbox
