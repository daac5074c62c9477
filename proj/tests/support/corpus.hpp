#pragma once
// Random well-typed corpus generation for the test suites. Terms are grown
// rule-directed, so every judgment produced here checks by construction;
// the tests assert that against the checker rather than trusting it.
//
// smallTypes keeps binder and hypothesis carriers tiny (bases, units,
// products, plain boxes of bases) so the judgments stay cheap to interpret
// in finite models; without it, arrows and contextual boxes appear too.

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lbox/check.hpp"
#include "lbox/rewrite.hpp"

namespace lbox::corpus {

inline int term_nodes(const TermP& t) {
  struct V {
    int operator()(const Var&) const { return 1; }
    int operator()(const Lam& x) const { return 1 + term_nodes(x.body); }
    int operator()(const App& x) const {
      return 1 + term_nodes(x.fun) + term_nodes(x.arg);
    }
    int operator()(const Pair& x) const {
      return 1 + term_nodes(x.fst) + term_nodes(x.snd);
    }
    int operator()(const Proj& x) const { return 1 + term_nodes(x.body); }
    int operator()(const Star&) const { return 1; }
    int operator()(const Quo& x) const { return 1 + term_nodes(x.body); }
    int operator()(const Unq& x) const {
      int n = 1 + term_nodes(x.code);
      for (const auto& a : x.args) n += term_nodes(a);
      return n;
    }
    int operator()(const GBox& x) const {
      int n = 1 + term_nodes(x.body);
      for (const auto& a : x.args) n += term_nodes(a);
      return n;
    }
    int operator()(const DBox& x) const { return 1 + term_nodes(x.body); }
    int operator()(const DLet& x) const {
      return 1 + term_nodes(x.box) + term_nodes(x.body);
    }
  };
  return std::visit(V{}, t->v);
}

inline bool has_quotation(const TermP& t) {
  struct V {
    bool operator()(const Var&) const { return false; }
    bool operator()(const Lam& x) const { return has_quotation(x.body); }
    bool operator()(const App& x) const {
      return has_quotation(x.fun) || has_quotation(x.arg);
    }
    bool operator()(const Pair& x) const {
      return has_quotation(x.fst) || has_quotation(x.snd);
    }
    bool operator()(const Proj& x) const { return has_quotation(x.body); }
    bool operator()(const Star&) const { return false; }
    bool operator()(const Quo&) const { return true; }
    bool operator()(const Unq& x) const {
      if (has_quotation(x.code)) return true;
      for (const auto& a : x.args)
        if (has_quotation(a)) return true;
      return false;
    }
    bool operator()(const GBox&) const { return true; }
    bool operator()(const DBox& x) const { return has_quotation(x.body); }
    bool operator()(const DLet& x) const {
      return has_quotation(x.box) || has_quotation(x.body);
    }
  };
  return std::visit(V{}, t->v);
}

struct GenOpts {
  int maxLevel = 2;
  int maxNodes = 30;
  int fuel = 6;
  int maxHeight = 2;       // root stack height drawn from 1..maxHeight
  bool smallTypes = false; // keep carriers finite-model friendly
  bool quotationBias = false;
};

// Only the last hypothesis of each name in a frame is visible to variable
// references; the generator must pick through the same lens the checker
// resolves through.
inline Frame visible(const Frame& f) {
  Frame out;
  for (const auto& h : f) {
    bool replaced = false;
    for (auto& g : out)
      if (g.name == h.name) {
        g = h;
        replaced = true;
        break;
      }
    if (!replaced) out.push_back(h);
  }
  return out;
}

struct Gen {
  std::mt19937 rng;
  GenOpts o;
  int fresh = 0;

  explicit Gen(unsigned seed, const GenOpts& opts) : rng(seed), o(opts) {}

  int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }
  bool chance(int pct) { return pick(100) < pct; }
  std::string fresh_name() { return "v" + std::to_string(fresh++); }
  std::string binder_name() {
    if (chance(30)) return pick(2) ? "x" : "y";
    return fresh_name();
  }

  TypeP small_type(int l, int d) {
    // boxes only above level 0; contextual hypotheses only for checker
    // corpora, where no finite model has to carry them
    int hi = 4;
    if (d > 0) hi = o.smallTypes ? 5 : 6;
    if (l < 1) hi = std::min(hi, d > 0 ? 5 : 4);
    switch (pick(hi)) {
      case 0: return t_base("A", l);
      case 1: return t_base("B", l);
      case 2: return t_unit(l);
      case 3:
        if (d > 0) return t_prod(small_type(l, d - 1), small_type(l, d - 1));
        return t_prod(t_base("A", l), t_base("B", l));
      case 4:
        if (l >= 1) return t_cbox({}, t_base(pick(2) ? "A" : "B", l - 1));
        if (o.smallTypes) return t_prod(t_base("A", l), t_base("B", l));
        return t_arrow(small_type(l, d - 1), small_type(l, d - 1));
      default:
        if (o.smallTypes) return t_cbox({}, t_base("A", l - 1));
        return pick(2) ? t_arrow(small_type(l, d - 1), small_type(l, d - 1))
                       : t_cbox({t_base("A", l - 1)}, t_base("B", l - 1));
    }
  }

  // Inhabit a stamped goal type at (st, l), or nullptr when no cheap
  // inhabitant exists (base types need a variable in scope).
  TermP try_synth(const ContextStack& st, int l, const TypeP& goal, int depth) {
    std::vector<std::string> hits;
    for (const auto& h : visible(st.frames.back()))
      if (type_eq(h.type, goal)) hits.push_back(h.name);
    if (!hits.empty()) return v_(hits[pick(static_cast<int>(hits.size()))]);
    if (std::holds_alternative<TUnit>(goal->v)) return star();
    if (depth <= 0) return nullptr;
    if (auto* p = std::get_if<TProd>(&goal->v)) {
      TermP a = try_synth(st, l, p->fst, depth - 1);
      TermP b = try_synth(st, l, p->snd, depth - 1);
      return a && b ? pair_(a, b) : nullptr;
    }
    if (auto* a = std::get_if<TArrow>(&goal->v)) {
      std::string nm = fresh_name();
      ContextStack st2 = st;
      st2.frames.back().push_back(Hyp{nm, a->dom});
      TermP b = try_synth(st2, l, a->cod, depth - 1);
      return b ? lam(nm, a->dom, b) : nullptr;
    }
    if (auto* c = std::get_if<TCBox>(&goal->v)) {
      if (l < 1) return nullptr;
      std::vector<Binder> bs;
      Frame f;
      for (const auto& ht : c->hyps) {
        std::string nm = fresh_name();
        bs.push_back(Binder{nm, ht});
        f.push_back(Hyp{nm, ht});
      }
      ContextStack st2 = st;
      st2.frames.push_back(f);
      TermP b = try_synth(st2, l - 1, c->body, depth - 1);
      if (!b) return nullptr;
      return bs.empty() ? quo(b) : quo(bs, b);
    }
    return nullptr;
  }

  std::pair<TermP, TypeP> leaf(const ContextStack& st, int l) {
    Frame f = visible(st.frames.back());
    if (!f.empty() && chance(75)) {
      const Hyp& h = f[pick(static_cast<int>(f.size()))];
      return {v_(h.name), h.type};
    }
    return {star(), t_unit(l)};
  }

  // Generated binders all carry annotations: reduction can move any subterm
  // into an inference position (application head, projection body, splice
  // code), and only fully annotated terms stay inferable under substitution.
  std::pair<TermP, TypeP> gen(const ContextStack& st, int l, int fuel) {
    if (fuel <= 0) return leaf(st, l);
    int h = st.height();
    enum Route { rLeaf, rLam, rAppRedex, rPair, rProjRedex, rProjVar,
                 rQuo, rCQuo, rUnqRedex, rCUnqRedex, rUnqVar };
    std::vector<Route> routes;
    auto add = [&](Route r, int w) { routes.insert(routes.end(), w, r); };
    add(rLeaf, 2);
    add(rLam, 3);
    add(rAppRedex, 3);
    add(rPair, 2);
    add(rProjRedex, 2);
    Frame vis = visible(st.frames.back());
    for (const auto& hy : vis)
      if (std::holds_alternative<TProd>(hy.type->v)) {
        add(rProjVar, 2);
        break;
      }
    if (l >= 1) {
      add(rQuo, o.quotationBias ? 5 : 3);
      add(rCQuo, o.quotationBias ? 5 : 2);
    }
    if (h >= 2) {
      add(rUnqRedex, o.quotationBias ? 4 : 2);
      add(rCUnqRedex, o.quotationBias ? 4 : 2);
      for (const auto& hy : st.frames[h - 2])
        if (std::holds_alternative<TCBox>(hy.type->v)) {
          add(rUnqVar, 3);
          break;
        }
    }
    switch (routes[pick(static_cast<int>(routes.size()))]) {
      case rLeaf:
        return leaf(st, l);
      case rLam: {
        TypeP a = small_type(l, o.smallTypes ? 1 : 2);
        std::string nm = binder_name();
        ContextStack st2 = st;
        st2.frames.back().push_back(Hyp{nm, a});
        auto [b, bt] = gen(st2, l, fuel - 1);
        return {lam(nm, a, b), t_arrow(a, bt)};
      }
      case rAppRedex: {
        auto [a, at] = gen(st, l, fuel / 2);
        std::string nm = binder_name();
        ContextStack st2 = st;
        st2.frames.back().push_back(Hyp{nm, at});
        auto [b, bt] = gen(st2, l, fuel - 1 - fuel / 2);
        return {app(lam(nm, at, b), a), bt};
      }
      case rPair: {
        auto [a, at] = gen(st, l, fuel / 2);
        auto [b, bt] = gen(st, l, fuel - 1 - fuel / 2);
        return {pair_(a, b), t_prod(at, bt)};
      }
      case rProjRedex: {
        auto [a, at] = gen(st, l, fuel / 2);
        auto [b, bt] = gen(st, l, fuel - 1 - fuel / 2);
        if (pick(2)) return {proj1(pair_(a, b)), at};
        return {proj2(pair_(a, b)), bt};
      }
      case rProjVar: {
        std::vector<Hyp> ps;
        for (const auto& hy : vis)
          if (std::holds_alternative<TProd>(hy.type->v)) ps.push_back(hy);
        const Hyp& hy = ps[pick(static_cast<int>(ps.size()))];
        const auto& pr = std::get<TProd>(hy.type->v);
        if (pick(2)) return {proj1(v_(hy.name)), pr.fst};
        return {proj2(v_(hy.name)), pr.snd};
      }
      case rQuo: {
        ContextStack st2 = st;
        st2.frames.push_back(Frame{});
        auto [b, bt] = gen(st2, l - 1, fuel - 1);
        return {quo(b), t_cbox({}, bt)};
      }
      case rCQuo: {
        int n = 1 + pick(2);
        std::vector<Binder> bs;
        std::vector<TypeP> hts;
        Frame f;
        for (int i = 0; i < n; ++i) {
          std::string nm = fresh_name();
          TypeP ht = small_type(l - 1, o.smallTypes ? 0 : 1);
          bs.push_back(Binder{nm, ht});
          hts.push_back(ht);
          f.push_back(Hyp{nm, ht});
        }
        ContextStack st2 = st;
        st2.frames.push_back(f);
        auto [b, bt] = gen(st2, l - 1, fuel - 1);
        return {quo(bs, b), t_cbox(hts, bt)};
      }
      case rUnqRedex: {
        // unq (quo t): the code checks one frame up with the rightmost
        // frame popped, and quotation pushes an empty one back
        ContextStack st2 = st;
        st2.frames.back() = Frame{};
        auto [b, bt] = gen(st2, l, fuel - 1);
        return {unq(quo(b)), bt};
      }
      case rCUnqRedex: {
        auto [a, at] = gen(st, l, fuel / 2);
        std::string nm = fresh_name();
        ContextStack st2 = st;
        st2.frames.back() = Frame{Hyp{nm, at}};
        auto [b, bt] = gen(st2, l, fuel - 1 - fuel / 2);
        return {unq(quo({Binder{nm, at}}, b), {a}), bt};
      }
      case rUnqVar: {
        std::vector<Hyp> cs;
        for (const auto& hy : visible(st.frames[h - 2]))
          if (std::holds_alternative<TCBox>(hy.type->v)) cs.push_back(hy);
        const Hyp& hyx = cs[pick(static_cast<int>(cs.size()))];
        const auto& cb = std::get<TCBox>(hyx.type->v);
        std::vector<TermP> args;
        bool ok = true;
        for (const auto& ht : cb.hyps) {
          TermP a = try_synth(st, l, ht, 3);
          if (!a) {
            ok = false;
            break;
          }
          args.push_back(a);
        }
        if (!ok) return leaf(st, l);
        if (args.empty()) return {unq(v_(hyx.name)), cb.body};
        return {unq(v_(hyx.name), args), cb.body};
      }
    }
    return leaf(st, l);
  }

  Judgment gen_root() {
    int h = 1 + pick(o.maxHeight);
    int lmax = o.maxLevel - (h - 1);
    if (lmax < 0) {
      h = 1;
      lmax = o.maxLevel;
    }
    int l0 = pick(lmax + 1);
    ContextStack st;
    for (int i = 0; i < h; ++i) {
      int fl = l0 + (h - 1 - i);
      Frame f;
      int nh = pick(3);
      for (int k = 0; k < nh; ++k)
        f.push_back(Hyp{"h" + std::to_string(i) + std::to_string(k),
                        small_type(fl, o.smallTypes ? 1 : 2)});
      st.frames.push_back(f);
    }
    for (int fuel = o.fuel; ; --fuel) {
      auto [t, ty] = gen(st, l0, std::max(fuel, 1));
      if (term_nodes(t) <= o.maxNodes || fuel <= 1)
        return Judgment{st, l0, t, ty};
    }
  }
};

inline std::vector<Judgment> gen_typed_corpus(unsigned seed, int count,
                                              const GenOpts& o = {}) {
  Gen g(seed, o);
  std::vector<Judgment> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(g.gen_root());
  return out;
}

// Judgments that contain at least one quotation node.
inline std::vector<Judgment> gen_quotation_corpus(unsigned seed, int count,
                                                  GenOpts o = {}) {
  o.quotationBias = true;
  if (o.maxLevel < 1) o.maxLevel = 1;
  Gen g(seed, o);
  std::vector<Judgment> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Judgment j = g.gen_root();
    if (has_quotation(j.term)) out.push_back(j);
  }
  return out;
}

// A judgment together with a second term equal to it in the beta-eta
// theory by construction.
struct EqPair {
  Judgment j;
  TermP other;
};

// Types cheap to carry as a binder in a finite model: bases, units,
// products of such, and plain boxes of bases.
inline bool small_carrier(const TypeP& t) {
  if (std::holds_alternative<TBase>(t->v)) return true;
  if (std::holds_alternative<TUnit>(t->v)) return true;
  if (auto* p = std::get_if<TProd>(&t->v))
    return small_carrier(p->fst) && small_carrier(p->snd);
  if (auto* c = std::get_if<TCBox>(&t->v))
    return c->hyps.empty() && std::holds_alternative<TBase>(c->body->v);
  return false;
}

inline std::vector<EqPair> gen_beta_eta_pairs(unsigned seed, int count,
                                              const GenOpts& o) {
  Gen g(seed, o);
  std::vector<EqPair> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Judgment j = g.gen_root();
    int route = g.pick(4);
    // wrapping in an identity redex binds the judgment type itself; skip
    // it when that type would be expensive to carry in a model
    if (route == 3 && !small_carrier(j.type)) route = 0;
    TermP other;
    switch (route) {
      case 0:
        other = normalize(j.term);
        break;
      case 1: {
        auto sites = redexes(j.term);
        if (sites.empty())
          other = normalize(j.term);
        else
          other = step(j.term, sites[g.pick(static_cast<int>(sites.size()))]);
        break;
      }
      case 2:
        // eta expansion wants a beta-normal input
        other = eta_long(normalize(j.term), j.type, j);
        break;
      default:
        other = app(lam("w", j.type, v_("w")), j.term);
        break;
    }
    out.push_back({j, other});
  }
  return out;
}

// Every base name admitted at every level up to maxLevel, for level
// inference over erased corpus judgments.
inline Signature wide_signature(int maxLevel = 8) {
  Signature sig;
  for (int l = 0; l <= maxLevel; ++l) {
    sig["A"].insert(l);
    sig["B"].insert(l);
  }
  return sig;
}

} // namespace lbox::corpus
