#include "lbox/syntax.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace lbox {

const char* errkind_name(ErrKind k) {
  switch (k) {
    case ErrKind::VariableNotInScope: return "VariableNotInScope";
    case ErrKind::LevelMismatch: return "LevelMismatch";
    case ErrKind::StackUnderflow: return "StackUnderflow";
    case ErrKind::ModeViolation: return "ModeViolation";
    case ErrKind::TypeMismatch: return "TypeMismatch";
    case ErrKind::Unsatisfiable: return "Unsatisfiable";
    case ErrKind::NotClosedBox: return "NotClosedBox";
    case ErrKind::FrameIndexOutOfRange: return "FrameIndexOutOfRange";
    case ErrKind::InvalidSite: return "InvalidSite";
    case ErrKind::BudgetExceeded: return "BudgetExceeded";
    case ErrKind::DuplicateBinding: return "DuplicateBinding";
    case ErrKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrKind::LevelExceedsDepth: return "LevelExceedsDepth";
    case ErrKind::UnvaluedBase: return "UnvaluedBase";
    case ErrKind::ShapeMismatch: return "ShapeMismatch";
    case ErrKind::DuplicateName: return "DuplicateName";
    case ErrKind::MissingAnnotation: return "MissingAnnotation";
    case ErrKind::MonoidLawViolation: return "MonoidLawViolation";
    case ErrKind::MonoidalLawViolation: return "MonoidalLawViolation";
    case ErrKind::LawFailure: return "LawFailure";
    case ErrKind::SyntaxError: return "SyntaxError";
    case ErrKind::BadInput: return "BadInput";
  }
  return "UnknownError";
}

Error::Error(ErrKind k, const std::string& msg)
    : std::runtime_error(std::string(errkind_name(k)) + ": " + msg), kind(k) {}

void fail(ErrKind k, const std::string& msg) { throw Error(k, msg); }

// ---------------------------------------------------------------- types

TypeP t_base(std::string name, int level) {
  return std::make_shared<const Type>(Type{TBase{std::move(name), level}});
}
TypeP t_arrow(TypeP dom, TypeP cod) {
  return std::make_shared<const Type>(Type{TArrow{std::move(dom), std::move(cod)}});
}
TypeP t_prod(TypeP fst, TypeP snd) {
  return std::make_shared<const Type>(Type{TProd{std::move(fst), std::move(snd)}});
}
TypeP t_unit(int level) {
  return std::make_shared<const Type>(Type{TUnit{level}});
}
TypeP t_box(TypeP body) { return t_cbox({}, std::move(body)); }
TypeP t_cbox(std::vector<TypeP> hyps, TypeP body) {
  return std::make_shared<const Type>(Type{TCBox{std::move(hyps), std::move(body)}});
}
TypeP t_dbox(TypeP body) {
  return std::make_shared<const Type>(Type{TDBox{std::move(body)}});
}

bool type_eq(const TypeP& a, const TypeP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->v.index() != b->v.index()) return false;
  if (auto* x = std::get_if<TBase>(&a->v)) {
    auto* y = std::get_if<TBase>(&b->v);
    return x->name == y->name && x->level == y->level;
  }
  if (auto* x = std::get_if<TArrow>(&a->v)) {
    auto* y = std::get_if<TArrow>(&b->v);
    return type_eq(x->dom, y->dom) && type_eq(x->cod, y->cod);
  }
  if (auto* x = std::get_if<TProd>(&a->v)) {
    auto* y = std::get_if<TProd>(&b->v);
    return type_eq(x->fst, y->fst) && type_eq(x->snd, y->snd);
  }
  if (auto* x = std::get_if<TUnit>(&a->v)) {
    auto* y = std::get_if<TUnit>(&b->v);
    return x->level == y->level;
  }
  if (auto* x = std::get_if<TCBox>(&a->v)) {
    auto* y = std::get_if<TCBox>(&b->v);
    if (x->hyps.size() != y->hyps.size()) return false;
    for (size_t i = 0; i < x->hyps.size(); ++i)
      if (!type_eq(x->hyps[i], y->hyps[i])) return false;
    return type_eq(x->body, y->body);
  }
  auto* x = std::get_if<TDBox>(&a->v);
  auto* y = std::get_if<TDBox>(&b->v);
  return type_eq(x->body, y->body);
}

bool type_unleveled(const TypeP& t) {
  if (!t) return false;
  if (auto* b = std::get_if<TBase>(&t->v)) return b->level == kUnleveled;
  if (auto* a = std::get_if<TArrow>(&t->v))
    return type_unleveled(a->dom) && type_unleveled(a->cod);
  if (auto* p = std::get_if<TProd>(&t->v))
    return type_unleveled(p->fst) && type_unleveled(p->snd);
  if (auto* u = std::get_if<TUnit>(&t->v)) return u->level == kUnleveled;
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    for (auto& h : c->hyps)
      if (!type_unleveled(h)) return false;
    return type_unleveled(c->body);
  }
  return type_unleveled(std::get<TDBox>(t->v).body);
}

namespace {
// Level of a node, or nullopt on any inconsistency or negative level below.
// kUnleveled is sticky: a fully unleveled subtree reports kUnleveled.
std::optional<int> lvl_rec(const TypeP& t) {
  if (!t) return std::nullopt;
  auto ok = [](int l) -> std::optional<int> {
    if (l != kUnleveled && l < 0) return std::nullopt;
    return l;
  };
  if (auto* b = std::get_if<TBase>(&t->v)) return ok(b->level);
  if (auto* u = std::get_if<TUnit>(&t->v)) return ok(u->level);
  if (auto* a = std::get_if<TArrow>(&t->v)) {
    auto x = lvl_rec(a->dom), y = lvl_rec(a->cod);
    if (!x || !y || *x != *y) return std::nullopt;
    return x;
  }
  if (auto* p = std::get_if<TProd>(&t->v)) {
    auto x = lvl_rec(p->fst), y = lvl_rec(p->snd);
    if (!x || !y || *x != *y) return std::nullopt;
    return x;
  }
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    auto x = lvl_rec(c->body);
    if (!x) return std::nullopt;
    for (auto& h : c->hyps) {
      auto y = lvl_rec(h);
      if (!y || *y != *x) return std::nullopt;
    }
    if (*x == kUnleveled) return kUnleveled;
    return ok(*x + 1);
  }
  auto x = lvl_rec(std::get<TDBox>(t->v).body);
  if (!x) return std::nullopt;
  if (*x == kUnleveled) return kUnleveled;
  return ok(*x - 1);
}
}  // namespace

std::optional<int> try_type_level(const TypeP& t) {
  auto l = lvl_rec(t);
  if (l && *l == kUnleveled) return std::nullopt;
  return l;
}

int type_level(const TypeP& t) {
  auto l = lvl_rec(t);
  if (!l) fail(ErrKind::LevelMismatch, "inconsistent levels in " + show_type(t));
  return *l;
}

TypeP erase_type(const TypeP& t) {
  if (auto* b = std::get_if<TBase>(&t->v)) return t_base(b->name);
  if (auto* a = std::get_if<TArrow>(&t->v))
    return t_arrow(erase_type(a->dom), erase_type(a->cod));
  if (auto* p = std::get_if<TProd>(&t->v))
    return t_prod(erase_type(p->fst), erase_type(p->snd));
  if (std::get_if<TUnit>(&t->v)) return t_unit();
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    std::vector<TypeP> hs;
    for (auto& h : c->hyps) hs.push_back(erase_type(h));
    return t_cbox(std::move(hs), erase_type(c->body));
  }
  return t_dbox(erase_type(std::get<TDBox>(t->v).body));
}

TypeP stamp_type(const TypeP& t, int l) {
  if (auto* b = std::get_if<TBase>(&t->v)) {
    if (b->level != kUnleveled)
      fail(ErrKind::BadInput, "stamping an already leveled type");
    return t_base(b->name, l);
  }
  if (auto* a = std::get_if<TArrow>(&t->v))
    return t_arrow(stamp_type(a->dom, l), stamp_type(a->cod, l));
  if (auto* p = std::get_if<TProd>(&t->v))
    return t_prod(stamp_type(p->fst, l), stamp_type(p->snd, l));
  if (auto* u = std::get_if<TUnit>(&t->v)) {
    if (u->level != kUnleveled)
      fail(ErrKind::BadInput, "stamping an already leveled type");
    return t_unit(l);
  }
  if (auto* c = std::get_if<TCBox>(&t->v)) {
    std::vector<TypeP> hs;
    for (auto& h : c->hyps) hs.push_back(stamp_type(h, l - 1));
    return t_cbox(std::move(hs), stamp_type(c->body, l - 1));
  }
  return t_dbox(stamp_type(std::get<TDBox>(t->v).body, l + 1));
}

namespace {
// Precedences: 0 arrow, 1 product, 2 prefix (boxes), 3 atom.
void show_type_rec(const TypeP& t, int minPrec, std::string& out) {
  auto wrap = [&](int prec, auto&& emit) {
    if (prec < minPrec) {
      out += "(";
      emit();
      out += ")";
    } else {
      emit();
    }
  };
  if (auto* b = std::get_if<TBase>(&t->v)) {
    out += b->name;
  } else if (std::get_if<TUnit>(&t->v)) {
    out += "Unit";
  } else if (auto* a = std::get_if<TArrow>(&t->v)) {
    wrap(0, [&] {
      show_type_rec(a->dom, 1, out);
      out += " -> ";
      show_type_rec(a->cod, 0, out);
    });
  } else if (auto* p = std::get_if<TProd>(&t->v)) {
    wrap(1, [&] {
      show_type_rec(p->fst, 1, out);
      out += " * ";
      show_type_rec(p->snd, 2, out);
    });
  } else if (auto* c = std::get_if<TCBox>(&t->v)) {
    wrap(2, [&] {
      out += "[";
      for (size_t i = 0; i < c->hyps.size(); ++i) {
        if (i) out += ",";
        show_type_rec(c->hyps[i], 0, out);
      }
      out += "]";
      show_type_rec(c->body, 3, out);
    });
  } else {
    auto* d = std::get_if<TDBox>(&t->v);
    wrap(2, [&] {
      out += "dbox ";
      show_type_rec(d->body, 3, out);
    });
  }
}

// Unambiguous serialization including levels; used by canon_term for
// annotations so alpha_eq respects them exactly.
void type_key(const TypeP& t, std::string& out) {
  auto lv = [&](int l) {
    out += "@";
    out += (l == kUnleveled) ? std::string("?") : std::to_string(l);
  };
  if (auto* b = std::get_if<TBase>(&t->v)) {
    out += "b!" + b->name;
    lv(b->level);
  } else if (auto* u = std::get_if<TUnit>(&t->v)) {
    out += "u";
    lv(u->level);
  } else if (auto* a = std::get_if<TArrow>(&t->v)) {
    out += "(a ";
    type_key(a->dom, out);
    out += " ";
    type_key(a->cod, out);
    out += ")";
  } else if (auto* p = std::get_if<TProd>(&t->v)) {
    out += "(p ";
    type_key(p->fst, out);
    out += " ";
    type_key(p->snd, out);
    out += ")";
  } else if (auto* c = std::get_if<TCBox>(&t->v)) {
    out += "(c [";
    for (size_t i = 0; i < c->hyps.size(); ++i) {
      if (i) out += " ";
      type_key(c->hyps[i], out);
    }
    out += "] ";
    type_key(c->body, out);
    out += ")";
  } else {
    out += "(d ";
    type_key(std::get<TDBox>(t->v).body, out);
    out += ")";
  }
}
}  // namespace

std::string show_type(const TypeP& t) {
  std::string out;
  show_type_rec(t, 0, out);
  return out;
}

// ---------------------------------------------------------------- terms

TermP v_(std::string name) {
  return std::make_shared<const Term>(Term{Var{std::move(name)}});
}
TermP lam(std::string name, TermP body) {
  return std::make_shared<const Term>(
      Term{Lam{Binder{std::move(name), std::nullopt}, std::move(body)}});
}
TermP lam(std::string name, TypeP ann, TermP body) {
  return std::make_shared<const Term>(
      Term{Lam{Binder{std::move(name), std::move(ann)}, std::move(body)}});
}
TermP app(TermP fun, TermP arg) {
  return std::make_shared<const Term>(Term{App{std::move(fun), std::move(arg)}});
}
TermP pair_(TermP fst, TermP snd) {
  return std::make_shared<const Term>(Term{Pair{std::move(fst), std::move(snd)}});
}
TermP proj1(TermP body) {
  return std::make_shared<const Term>(Term{Proj{1, std::move(body)}});
}
TermP proj2(TermP body) {
  return std::make_shared<const Term>(Term{Proj{2, std::move(body)}});
}
TermP star() { return std::make_shared<const Term>(Term{Star{}}); }
TermP quo(TermP body) { return quo({}, std::move(body)); }
TermP quo(std::vector<Binder> binders, TermP body) {
  return std::make_shared<const Term>(Term{Quo{std::move(binders), std::move(body)}});
}
TermP unq(TermP code) { return unq(std::move(code), {}); }
TermP unq(TermP code, std::vector<TermP> args) {
  return std::make_shared<const Term>(Term{Unq{std::move(code), std::move(args)}});
}
TermP gbox(std::vector<Binder> binders, std::vector<TermP> args, TermP body) {
  return std::make_shared<const Term>(
      Term{GBox{std::move(binders), std::move(args), std::move(body)}});
}
TermP dbox(TermP body) {
  return std::make_shared<const Term>(Term{DBox{std::move(body)}});
}
TermP dlet(std::string name, TermP box, TermP body) {
  return std::make_shared<const Term>(
      Term{DLet{std::move(name), std::move(box), std::move(body)}});
}

namespace {
bool binder_eq(const Binder& a, const Binder& b) {
  if (a.name != b.name) return false;
  if (a.ann.has_value() != b.ann.has_value()) return false;
  return !a.ann || type_eq(*a.ann, *b.ann);
}
}  // namespace

bool term_eq(const TermP& a, const TermP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->v.index() != b->v.index()) return false;
  if (auto* x = std::get_if<Var>(&a->v))
    return x->name == std::get<Var>(b->v).name;
  if (auto* x = std::get_if<Lam>(&a->v)) {
    auto& y = std::get<Lam>(b->v);
    return binder_eq(x->b, y.b) && term_eq(x->body, y.body);
  }
  if (auto* x = std::get_if<App>(&a->v)) {
    auto& y = std::get<App>(b->v);
    return term_eq(x->fun, y.fun) && term_eq(x->arg, y.arg);
  }
  if (auto* x = std::get_if<Pair>(&a->v)) {
    auto& y = std::get<Pair>(b->v);
    return term_eq(x->fst, y.fst) && term_eq(x->snd, y.snd);
  }
  if (auto* x = std::get_if<Proj>(&a->v)) {
    auto& y = std::get<Proj>(b->v);
    return x->idx == y.idx && term_eq(x->body, y.body);
  }
  if (std::get_if<Star>(&a->v)) return true;
  if (auto* x = std::get_if<Quo>(&a->v)) {
    auto& y = std::get<Quo>(b->v);
    if (x->binders.size() != y.binders.size()) return false;
    for (size_t i = 0; i < x->binders.size(); ++i)
      if (!binder_eq(x->binders[i], y.binders[i])) return false;
    return term_eq(x->body, y.body);
  }
  if (auto* x = std::get_if<Unq>(&a->v)) {
    auto& y = std::get<Unq>(b->v);
    if (x->args.size() != y.args.size()) return false;
    for (size_t i = 0; i < x->args.size(); ++i)
      if (!term_eq(x->args[i], y.args[i])) return false;
    return term_eq(x->code, y.code);
  }
  if (auto* x = std::get_if<GBox>(&a->v)) {
    auto& y = std::get<GBox>(b->v);
    if (x->binders.size() != y.binders.size() || x->args.size() != y.args.size())
      return false;
    for (size_t i = 0; i < x->binders.size(); ++i)
      if (!binder_eq(x->binders[i], y.binders[i])) return false;
    for (size_t i = 0; i < x->args.size(); ++i)
      if (!term_eq(x->args[i], y.args[i])) return false;
    return term_eq(x->body, y.body);
  }
  if (auto* x = std::get_if<DBox>(&a->v))
    return term_eq(x->body, std::get<DBox>(b->v).body);
  auto* x = std::get_if<DLet>(&a->v);
  auto& y = std::get<DLet>(b->v);
  return x->name == y.name && term_eq(x->box, y.box) && term_eq(x->body, y.body);
}

namespace {
struct CanonCtx {
  // Innermost-last list of (name, level, id).
  std::vector<std::tuple<std::string, int, int>> binds;
  int next = 0;
};

void canon_rec(const TermP& t, int d, CanonCtx& c, std::string& out) {
  auto emit_ann = [&](const std::optional<TypeP>& ann) {
    if (ann) {
      out += ":";
      type_key(*ann, out);
    }
  };
  if (auto* x = std::get_if<Var>(&t->v)) {
    for (auto it = c.binds.rbegin(); it != c.binds.rend(); ++it) {
      if (std::get<0>(*it) == x->name && std::get<1>(*it) == d) {
        out += "b" + std::to_string(std::get<2>(*it));
        return;
      }
    }
    out += "f!" + x->name + "@" + std::to_string(d);
  } else if (auto* x = std::get_if<Lam>(&t->v)) {
    out += "(L";
    emit_ann(x->b.ann);
    out += ".";
    c.binds.emplace_back(x->b.name, d, c.next++);
    canon_rec(x->body, d, c, out);
    c.binds.pop_back();
    out += ")";
  } else if (auto* x = std::get_if<App>(&t->v)) {
    out += "(@";
    canon_rec(x->fun, d, c, out);
    out += " ";
    canon_rec(x->arg, d, c, out);
    out += ")";
  } else if (auto* x = std::get_if<Pair>(&t->v)) {
    out += "(P";
    canon_rec(x->fst, d, c, out);
    out += " ";
    canon_rec(x->snd, d, c, out);
    out += ")";
  } else if (auto* x = std::get_if<Proj>(&t->v)) {
    out += x->idx == 1 ? "(1" : "(2";
    canon_rec(x->body, d, c, out);
    out += ")";
  } else if (std::get_if<Star>(&t->v)) {
    out += "*";
  } else if (auto* x = std::get_if<Quo>(&t->v)) {
    out += "(Q[";
    size_t base = c.binds.size();
    for (auto& b : x->binders) {
      emit_ann(b.ann);
      out += ";";
      c.binds.emplace_back(b.name, d - 1, c.next++);
    }
    out += "]";
    canon_rec(x->body, d - 1, c, out);
    c.binds.resize(base);
    out += ")";
  } else if (auto* x = std::get_if<Unq>(&t->v)) {
    out += "(U";
    canon_rec(x->code, d + 1, c, out);
    for (auto& a : x->args) {
      out += " ";
      canon_rec(a, d, c, out);
    }
    out += ")";
  } else if (auto* x = std::get_if<GBox>(&t->v)) {
    out += "(G[";
    for (auto& a : x->args) {
      canon_rec(a, d, c, out);
      out += ";";
    }
    out += "]";
    size_t base = c.binds.size();
    for (auto& b : x->binders) {
      emit_ann(b.ann);
      out += ";";
      c.binds.emplace_back(b.name, d - 1, c.next++);
    }
    canon_rec(x->body, d - 1, c, out);
    c.binds.resize(base);
    out += ")";
  } else if (auto* x = std::get_if<DBox>(&t->v)) {
    out += "(D";
    canon_rec(x->body, d + 1, c, out);
    out += ")";
  } else {
    auto* dl = std::get_if<DLet>(&t->v);
    out += "(E";
    canon_rec(dl->box, d, c, out);
    out += " ";
    c.binds.emplace_back(dl->name, d + 1, c.next++);
    canon_rec(dl->body, d, c, out);
    c.binds.pop_back();
    out += ")";
  }
}
}  // namespace

std::string canon_term(const TermP& t) {
  CanonCtx c;
  std::string out;
  canon_rec(t, 0, c, out);
  return out;
}

bool alpha_eq(const TermP& a, const TermP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return canon_term(a) == canon_term(b);
}

namespace {
void fv_rec(const TermP& t, int d,
            std::vector<std::pair<std::string, int>>& env,
            std::set<std::pair<std::string, int>>& out) {
  if (auto* x = std::get_if<Var>(&t->v)) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == x->name && it->second == d) return;
    out.insert({x->name, d});
  } else if (auto* x = std::get_if<Lam>(&t->v)) {
    env.emplace_back(x->b.name, d);
    fv_rec(x->body, d, env, out);
    env.pop_back();
  } else if (auto* x = std::get_if<App>(&t->v)) {
    fv_rec(x->fun, d, env, out);
    fv_rec(x->arg, d, env, out);
  } else if (auto* x = std::get_if<Pair>(&t->v)) {
    fv_rec(x->fst, d, env, out);
    fv_rec(x->snd, d, env, out);
  } else if (auto* x = std::get_if<Proj>(&t->v)) {
    fv_rec(x->body, d, env, out);
  } else if (std::get_if<Star>(&t->v)) {
  } else if (auto* x = std::get_if<Quo>(&t->v)) {
    size_t base = env.size();
    for (auto& b : x->binders) env.emplace_back(b.name, d + 1);
    fv_rec(x->body, d + 1, env, out);
    env.resize(base);
  } else if (auto* x = std::get_if<Unq>(&t->v)) {
    fv_rec(x->code, d - 1, env, out);
    for (auto& a : x->args) fv_rec(a, d, env, out);
  } else if (auto* x = std::get_if<GBox>(&t->v)) {
    for (auto& a : x->args) fv_rec(a, d, env, out);
    size_t base = env.size();
    for (auto& b : x->binders) env.emplace_back(b.name, d + 1);
    fv_rec(x->body, d + 1, env, out);
    env.resize(base);
  } else if (auto* x = std::get_if<DBox>(&t->v)) {
    fv_rec(x->body, d - 1, env, out);
  } else {
    auto* dl = std::get_if<DLet>(&t->v);
    fv_rec(dl->box, d, env, out);
    env.emplace_back(dl->name, d - 1);
    fv_rec(dl->body, d, env, out);
    env.pop_back();
  }
}

void names_rec(const TermP& t, std::set<std::string>& out) {
  if (auto* x = std::get_if<Var>(&t->v)) {
    out.insert(x->name);
  } else if (auto* x = std::get_if<Lam>(&t->v)) {
    out.insert(x->b.name);
    names_rec(x->body, out);
  } else if (auto* x = std::get_if<App>(&t->v)) {
    names_rec(x->fun, out);
    names_rec(x->arg, out);
  } else if (auto* x = std::get_if<Pair>(&t->v)) {
    names_rec(x->fst, out);
    names_rec(x->snd, out);
  } else if (auto* x = std::get_if<Proj>(&t->v)) {
    names_rec(x->body, out);
  } else if (std::get_if<Star>(&t->v)) {
  } else if (auto* x = std::get_if<Quo>(&t->v)) {
    for (auto& b : x->binders) out.insert(b.name);
    names_rec(x->body, out);
  } else if (auto* x = std::get_if<Unq>(&t->v)) {
    names_rec(x->code, out);
    for (auto& a : x->args) names_rec(a, out);
  } else if (auto* x = std::get_if<GBox>(&t->v)) {
    for (auto& b : x->binders) out.insert(b.name);
    for (auto& a : x->args) names_rec(a, out);
    names_rec(x->body, out);
  } else if (auto* x = std::get_if<DBox>(&t->v)) {
    names_rec(x->body, out);
  } else {
    auto* dl = std::get_if<DLet>(&t->v);
    out.insert(dl->name);
    names_rec(dl->box, out);
    names_rec(dl->body, out);
  }
}
}  // namespace

std::set<std::pair<std::string, int>> free_vars(const TermP& t) {
  std::set<std::pair<std::string, int>> out;
  std::vector<std::pair<std::string, int>> env;
  fv_rec(t, 0, env, out);
  return out;
}

std::set<std::string> all_names(const TermP& t) {
  std::set<std::string> out;
  names_rec(t, out);
  return out;
}

namespace {
// Precedences: 0 lambda/gbox/dlet, 1 application, 2 prefix, 3 atom.
void show_term_rec(const TermP& t, int minPrec, std::string& out) {
  auto wrap = [&](int prec, auto&& emit) {
    if (prec < minPrec) {
      out += "(";
      emit();
      out += ")";
    } else {
      emit();
    }
  };
  auto binder_str = [&](const Binder& b) {
    out += b.name;
    if (b.ann) {
      out += ":";
      show_type_rec(*b.ann, 0, out);
    }
  };
  if (auto* x = std::get_if<Var>(&t->v)) {
    out += x->name;
  } else if (std::get_if<Star>(&t->v)) {
    out += "()";
  } else if (auto* x = std::get_if<Pair>(&t->v)) {
    out += "(";
    show_term_rec(x->fst, 0, out);
    out += ", ";
    show_term_rec(x->snd, 0, out);
    out += ")";
  } else if (auto* x = std::get_if<Lam>(&t->v)) {
    wrap(0, [&] {
      out += "\\";
      binder_str(x->b);
      out += ". ";
      show_term_rec(x->body, 0, out);
    });
  } else if (auto* x = std::get_if<App>(&t->v)) {
    wrap(1, [&] {
      show_term_rec(x->fun, 1, out);
      out += " ";
      show_term_rec(x->arg, 2, out);
    });
  } else if (auto* x = std::get_if<Proj>(&t->v)) {
    wrap(2, [&] {
      out += x->idx == 1 ? "proj1 " : "proj2 ";
      show_term_rec(x->body, 3, out);
    });
  } else if (auto* x = std::get_if<Quo>(&t->v)) {
    wrap(2, [&] {
      out += "quo ";
      if (!x->binders.empty()) {
        out += "[";
        for (size_t i = 0; i < x->binders.size(); ++i) {
          if (i) out += ",";
          binder_str(x->binders[i]);
        }
        out += "] ";
      }
      show_term_rec(x->body, 3, out);
    });
  } else if (auto* x = std::get_if<Unq>(&t->v)) {
    wrap(2, [&] {
      out += "unq ";
      show_term_rec(x->code, 3, out);
      if (!x->args.empty()) {
        out += " with [";
        for (size_t i = 0; i < x->args.size(); ++i) {
          if (i) out += ", ";
          show_term_rec(x->args[i], 0, out);
        }
        out += "]";
      }
    });
  } else if (auto* x = std::get_if<DBox>(&t->v)) {
    wrap(2, [&] {
      out += "dbox ";
      show_term_rec(x->body, 3, out);
    });
  } else if (auto* x = std::get_if<GBox>(&t->v)) {
    wrap(0, [&] {
      out += "gbox";
      if (!x->binders.empty()) {
        out += " ";
        for (size_t i = 0; i < x->binders.size(); ++i) {
          if (i) out += ", ";
          binder_str(x->binders[i]);
        }
        out += " = ";
        for (size_t i = 0; i < x->args.size(); ++i) {
          if (i) out += ", ";
          show_term_rec(x->args[i], 1, out);
        }
      }
      out += " in ";
      show_term_rec(x->body, 0, out);
    });
  } else {
    auto* dl = std::get_if<DLet>(&t->v);
    wrap(0, [&] {
      out += "dlet " + dl->name + " = ";
      show_term_rec(dl->box, 1, out);
      out += " in ";
      show_term_rec(dl->body, 0, out);
    });
  }
}
}  // namespace

std::string show_term(const TermP& t) {
  std::string out;
  show_term_rec(t, 0, out);
  return out;
}

// ------------------------------------------------------------- contexts

int need_height(const TermP& t) {
  if (std::get_if<Var>(&t->v) || std::get_if<Star>(&t->v)) return 1;
  if (auto* x = std::get_if<Lam>(&t->v)) return need_height(x->body);
  if (auto* x = std::get_if<Proj>(&t->v)) return need_height(x->body);
  if (auto* x = std::get_if<App>(&t->v))
    return std::max(need_height(x->fun), need_height(x->arg));
  if (auto* x = std::get_if<Pair>(&t->v))
    return std::max(need_height(x->fst), need_height(x->snd));
  if (auto* x = std::get_if<Quo>(&t->v))
    return std::max(1, need_height(x->body) - 1);
  if (auto* x = std::get_if<Unq>(&t->v)) {
    int n = need_height(x->code) + 1;
    for (auto& a : x->args) n = std::max(n, need_height(a));
    return n;
  }
  if (auto* x = std::get_if<GBox>(&t->v)) {
    int n = 1;
    for (auto& a : x->args) n = std::max(n, need_height(a));
    return n;
  }
  if (auto* x = std::get_if<DBox>(&t->v)) return need_height(x->body) + 1;
  auto* x = std::get_if<DLet>(&t->v);
  return std::max({2, need_height(x->box), need_height(x->body)});
}

Judgment strip_pad(const Judgment& j) {
  Judgment out = j;
  int keep = std::max(1, j.term ? need_height(j.term) : 1);
  while (static_cast<int>(out.stack.frames.size()) > keep &&
         out.stack.frames.front().empty()) {
    out.stack.frames.erase(out.stack.frames.begin());
  }
  return out;
}

bool well_formed(const Judgment& j) {
  if (j.stack.frames.empty() || !j.term || !j.type) return false;
  for (auto& f : j.stack.frames) {
    std::set<std::string> seen;
    for (auto& h : f)
      if (!seen.insert(h.name).second) return false;
  }
  if (j.level == kUnleveled) {
    if (!type_unleveled(j.type)) return false;
    for (auto& f : j.stack.frames)
      for (auto& h : f)
        if (!type_unleveled(h.type)) return false;
    return true;
  }
  if (j.level < 0) return false;
  auto tl = try_type_level(j.type);
  if (!tl || *tl != j.level) return false;
  int h = j.stack.height();
  for (int i = 0; i < h; ++i) {
    int dist = h - 1 - i;
    for (auto& hyp : j.stack.frames[i]) {
      auto hl = try_type_level(hyp.type);
      if (!hl || *hl != j.level + dist) return false;
    }
  }
  return true;
}

TermP erase_term_levels(const TermP& t) {
  auto eb = [](const Binder& b) {
    return Binder{b.name, b.ann ? std::optional<TypeP>(erase_type(*b.ann))
                                : std::nullopt};
  };
  if (std::get_if<Var>(&t->v) || std::get_if<Star>(&t->v)) return t;
  if (auto* x = std::get_if<Lam>(&t->v))
    return std::make_shared<const Term>(
        Term{Lam{eb(x->b), erase_term_levels(x->body)}});
  if (auto* x = std::get_if<App>(&t->v))
    return app(erase_term_levels(x->fun), erase_term_levels(x->arg));
  if (auto* x = std::get_if<Pair>(&t->v))
    return pair_(erase_term_levels(x->fst), erase_term_levels(x->snd));
  if (auto* x = std::get_if<Proj>(&t->v))
    return x->idx == 1 ? proj1(erase_term_levels(x->body))
                       : proj2(erase_term_levels(x->body));
  if (auto* x = std::get_if<Quo>(&t->v)) {
    std::vector<Binder> bs;
    for (auto& b : x->binders) bs.push_back(eb(b));
    return quo(std::move(bs), erase_term_levels(x->body));
  }
  if (auto* x = std::get_if<Unq>(&t->v)) {
    std::vector<TermP> as;
    for (auto& a : x->args) as.push_back(erase_term_levels(a));
    return unq(erase_term_levels(x->code), std::move(as));
  }
  if (auto* x = std::get_if<GBox>(&t->v)) {
    std::vector<Binder> bs;
    for (auto& b : x->binders) bs.push_back(eb(b));
    std::vector<TermP> as;
    for (auto& a : x->args) as.push_back(erase_term_levels(a));
    return gbox(std::move(bs), std::move(as), erase_term_levels(x->body));
  }
  if (auto* x = std::get_if<DBox>(&t->v)) return dbox(erase_term_levels(x->body));
  auto* x = std::get_if<DLet>(&t->v);
  return dlet(x->name, erase_term_levels(x->box), erase_term_levels(x->body));
}

Judgment erase_judgment(const Judgment& j) {
  Judgment out;
  for (auto& f : j.stack.frames) {
    Frame nf;
    for (auto& h : f) nf.push_back({h.name, erase_type(h.type)});
    out.stack.frames.push_back(std::move(nf));
  }
  out.level = kUnleveled;
  out.term = j.term ? erase_term_levels(j.term) : nullptr;
  out.type = j.type ? erase_type(j.type) : nullptr;
  return out;
}

Judgment stamp_judgment(const Judgment& j, int l) {
  Judgment out;
  int h = j.stack.height();
  for (int i = 0; i < h; ++i) {
    Frame nf;
    int dist = h - 1 - i;
    for (auto& hyp : j.stack.frames[i])
      nf.push_back({hyp.name, stamp_type(hyp.type, l + dist)});
    out.stack.frames.push_back(std::move(nf));
  }
  out.level = l;
  out.term = j.term;
  out.type = j.type ? stamp_type(j.type, l) : nullptr;
  return out;
}

bool frame_eq(const Frame& a, const Frame& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !type_eq(a[i].type, b[i].type)) return false;
  return true;
}

bool stack_eq(const ContextStack& a, const ContextStack& b) {
  if (a.frames.size() != b.frames.size()) return false;
  for (size_t i = 0; i < a.frames.size(); ++i)
    if (!frame_eq(a.frames[i], b.frames[i])) return false;
  return true;
}

bool judgment_alpha_eq(const Judgment& a, const Judgment& b) {
  return a.level == b.level && stack_eq(a.stack, b.stack) &&
         type_eq(a.type, b.type) && alpha_eq(a.term, b.term);
}

std::string show_frame(const Frame& f) {
  if (f.empty()) return ".";
  std::string out;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) out += ", ";
    out += f[i].name + ":" + show_type(f[i].type);
  }
  return out;
}

std::string show_stack(const ContextStack& s) {
  std::string out;
  for (size_t i = 0; i < s.frames.size(); ++i) {
    if (i) out += " ; ";
    out += show_frame(s.frames[i]);
  }
  return out;
}

std::string show_judgment(const Judgment& j) {
  std::string out = show_stack(j.stack) + " |- " + show_term(j.term) + " : " +
                    show_type(j.type);
  if (j.level != kUnleveled) out += " @ " + std::to_string(j.level);
  return out;
}

}  // namespace lbox
