#pragma once

// Finite sets, total function tables, cartesian closed structure, power
// comonads over a finite monoid, co-Kleisli towers, and the law checkers
// used to validate them. Every equality here is byte-exact table equality;
// element orderings are deterministic so equal constructions are identical.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lbox/syntax.hpp"

namespace lbox {

// ---------------------------------------------------------------------------
// Atoms: elements of finite sets. A table atom is a total function graph,
// rows sorted by input; two atoms are equal iff atom_cmp returns 0.

struct Atom;
using AtomP = std::shared_ptr<const Atom>;
using AtomRow = std::pair<AtomP, AtomP>;

struct Atom {
  std::variant<std::string,             // named point
               std::monostate,          // the unit element
               std::pair<AtomP, AtomP>, // pair element
               std::vector<AtomRow>>    // function graph, sorted by input
      v;
};

AtomP a_name(std::string n);
AtomP a_unit();
AtomP a_pair(AtomP fst, AtomP snd);
// Sorts rows by input; inputs must be pairwise distinct.
AtomP a_table(std::vector<AtomRow> rows);

int atom_cmp(const AtomP& a, const AtomP& b); // total order
bool atom_eq(const AtomP& a, const AtomP& b);
std::string show_atom(const AtomP& a);

// Shape accessors; throw BadInput on the wrong variant.
const std::string& atom_name(const AtomP& a);
AtomP at_fst(const AtomP& a);
AtomP at_snd(const AtomP& a);
const std::vector<AtomRow>& atom_rows(const AtomP& a);
AtomP at_apply(const AtomP& table, const AtomP& arg); // row lookup

// ---------------------------------------------------------------------------
// Finite sets: strictly increasing element vectors, so set equality is
// vector equality and products/exponentials enumerate deterministically.

struct FinSet {
  std::vector<AtomP> elems; // strictly increasing under atom_cmp
  int size() const { return static_cast<int>(elems.size()); }
  int index_of(const AtomP& a) const; // -1 when absent
};

FinSet fs_make(std::vector<AtomP> elems);          // sorts; duplicates fail
FinSet fs_points(const std::string& stem, int n);  // stem0, stem1, ...
FinSet fs_unit();                                  // { unit }
FinSet fs_prod(const FinSet& x, const FinSet& y);  // pairs, left-major
FinSet fs_exp(const FinSet& dom, const FinSet& cod); // all total tables
bool fs_eq(const FinSet& a, const FinSet& b);
std::string show_finset(const FinSet& s);

// Guard for deliberate enumeration blowups: fs_exp and friends throw
// BudgetExceeded when the result would exceed this many elements.
inline constexpr long long kEnumCap = 1 << 21;

// ---------------------------------------------------------------------------
// Total maps between finite sets, stored as index tables. `src` records the
// categorical source when the representation differs from it (co-Kleisli
// morphisms X -> Y are stored as tables on rep(X)); equality ignores it.

struct FinMap {
  FinSet dom;           // representation of the source
  FinSet cod;
  std::vector<int> out; // out[i] = index in cod of the image of dom.elems[i]
  FinSet src;           // categorical source; defaults to dom
};

FinMap fm_make(FinSet dom, FinSet cod, const std::function<AtomP(const AtomP&)>& f);
FinMap fm_id(const FinSet& x);
FinMap fm_comp(const FinMap& g, const FinMap& f); // g after f; cods must chain
bool fm_eq(const FinMap& a, const FinMap& b);     // dom, cod, out only
AtomP fm_apply(const FinMap& m, const AtomP& a);
bool fm_bijective(const FinMap& m);
AtomP table_atom(const FinMap& m); // encode as an exponential element
FinMap atom_to_map(const AtomP& t, const FinSet& dom, const FinSet& cod);
FinMap retag(FinMap m, FinSet src);
std::string show_finmap(const FinMap& m);

// ---------------------------------------------------------------------------
// Cartesian closed structure on finite sets.

struct CccOps {
  FinSet product, exponential, terminal;
  FinMap proj1, proj2; // product -> X, product -> Y
  FinMap ev;           // exponential x X -> Y
  FinMap bang;         // X -> terminal
};

CccOps ccc_ops(const FinSet& x, const FinSet& y);
FinMap fm_pairing(const FinMap& f, const FinMap& g); // <f,g> : A -> X x Y
// curry(f : Z x X -> Y) : Z -> Y^X
FinMap fm_curry(const FinMap& f, const FinSet& z, const FinSet& x, const FinSet& y);

// ---------------------------------------------------------------------------
// Finite monoids.

struct FinMonoid {
  std::string name;
  FinSet carrier;
  AtomP unit;
  FinMap mult; // carrier x carrier -> carrier
};

FinMonoid monoid_trivial();
FinMonoid monoid_z2();
// elems names the carrier; table[i][j] names elems[i] * elems[j].
FinMonoid monoid_from_table(const std::vector<std::string>& elems,
                            const std::vector<std::vector<std::string>>& table,
                            const std::string& unit);
void check_monoid_laws(const FinMonoid& m); // throws MonoidLawViolation
AtomP mo_mult(const FinMonoid& m, const AtomP& a, const AtomP& b);

// ---------------------------------------------------------------------------
// Category presentations. Objects are finite sets; a morphism X -> Y is a
// FinMap whose dom is rep(X) and whose src tag is X. For the base category
// rep is the identity; for a co-Kleisli category rep(X) = TX.

struct Cat {
  std::string name;
  std::function<FinSet(const FinSet&)> rep;
  std::function<FinMap(const FinSet&)> id;
  std::function<FinMap(const FinMap&, const FinMap&)> comp; // (g, f) -> g.f
  std::function<FinSet(const FinSet&, const FinSet&)> expObj;
  std::function<FinMap(const FinSet&, const FinSet&)> projL;
  std::function<FinMap(const FinSet&, const FinSet&)> projR;
  std::function<FinMap(const FinMap&, const FinMap&)> pairing;
  std::function<FinMap(const FinSet&, const FinSet&)> ev; // [X,Y] x X -> Y
  // curry(f : Z x X -> Y)
  std::function<FinMap(const FinMap&, const FinSet&, const FinSet&, const FinSet&)> curry;
  std::function<FinMap(const FinSet&)> bang; // X -> 1
};

Cat fin_v(); // finite sets and all total tables

// Product of morphisms, derivable in any Cat: <f.pi1, g.pi2>.
FinMap cat_prod_mor(const Cat& c, const FinMap& f, const FinMap& g,
                    const FinSet& srcX, const FinSet& srcY);

// ---------------------------------------------------------------------------
// Comonads given by explicit tables per object. `objects` lists the objects
// every law checker quantifies over. prodInv(X,Y) inverts the canonical map
// T(XxY) -> TX x TY and is transported through lifts and composites.

struct ComonadData {
  std::string name;
  Cat cat;
  std::vector<FinSet> objects;
  std::function<FinSet(const FinSet&)> tObj;
  std::function<FinMap(const FinMap&)> tMor;
  std::function<FinMap(const FinSet&)> delta;   // TX -> TTX
  std::function<FinMap(const FinSet&)> epsilon; // TX -> X
  std::function<FinMap(const FinSet&)> alpha;   // X -> TX, the coalgebra
  std::function<FinMap(const FinSet&)> lawL;    // TTX -> TTX
  std::function<FinMap(const FinSet&, const FinSet&)> prodInv;
  // Optional pointwise evaluators, valid only when cat composes by function
  // application. deltaAt sends one element of TX to the matching element of
  // TTX; tMorAt evaluates T f at one element of T(dom f). They let co-Kleisli
  // composition run row by row instead of materializing T of a large carrier.
  std::function<AtomP(const AtomP&)> deltaAt;
  std::function<AtomP(const FinMap&, const AtomP&)> tMorAt;
};

// The power comonad TX = X^M with counit "evaluate at the monoid unit",
// comultiplication by monoid action, constant-table coalgebra, and the
// argument-swap distributive law. Validates the monoid first.
ComonadData power_comonad(const FinMonoid& m, std::vector<FinSet> objects = {});

FinSet pw_obj(const FinMonoid& m, const FinSet& x);
FinMap pw_mor(const FinMonoid& m, const FinMap& f);

// ---------------------------------------------------------------------------
// Law reports: one named result per checked equation, with a witness string
// on failure. Law families that quantify over morphisms draw them from
// exhaustive enumeration when small, else from a fixed-seed sample.

struct LawResult {
  std::string law;
  bool pass = false;
  std::string witness; // empty on pass
};

struct LawReport {
  std::vector<LawResult> results;
  bool all_pass() const;
  std::string summary() const;
  void add(const std::string& law, bool pass, const std::string& witness = "");
};

// Comonad laws, the four distributive-law equations, the braid equation for
// lawL, coalgebra laws, coalgebra self-distributivity, naturality of all four
// families, functoriality of T, and product preservation via prodInv.
LawReport check_comonad_axioms(const ComonadData& c);

// CCC equations for a category presentation: composition unit/assoc, product
// laws, terminal uniqueness, and (for object pairs whose exponentials stay
// within the enumeration cap) beta/eta for curry and ev.
LawReport check_ccc_laws(const Cat& k, const std::vector<FinSet>& objects);

// Co-Kleisli category of c. Identities are counits, composition goes through
// delta. Throws LawFailure if the object-indexed comonad laws fail on the
// declared objects.
Cat cokleisli(const ComonadData& c);

// The comonad induced on cokleisli(c) by T itself, via the distributive law.
ComonadData lift_comonad(const ComonadData& c);

// The composite comonad T.T on the same base, via the distributive law.
ComonadData compose_comonad(const ComonadData& c);

// Byte-level identification of cokleisli(lift_comonad(c)) with
// cokleisli(compose_comonad(c)): representations, identities, composition,
// and the stacked vs direct adjunction data (counits and the cofree action).
LawReport check_lift_identification(const ComonadData& c);

// ---------------------------------------------------------------------------
// Monoidal functor data between category presentations.

struct MonFunctorData {
  std::string name;
  Cat src, dst;
  std::function<FinSet(const FinSet&)> onObj;
  std::function<FinMap(const FinMap&)> onMor;
  FinMap unitCmp; // 1 -> F1 in dst
  std::function<FinMap(const FinSet&, const FinSet&)> prodCmp; // FX x FY -> F(XxY)
};

MonFunctorData identity_functor(const Cat& v);
// (-)^M as a strong monoidal endofunctor on the base.
MonFunctorData power_endofunctor(const FinMonoid& m);
// The identity-on-objects functor cokleisli(c) -> c.cat, f |-> f . alpha.
// Verifies functoriality and product preservation on c.objects; throws
// LawFailure on violation.
MonFunctorData normal_underlying_functor(const ComonadData& c);

struct NormalityReport {
  bool normal = false;
  std::string witness; // per-object comparison-map summary
};

// The comparison family hom(1,X) -> hom(1,FX), a |-> F(a) . unitCmp,
// tested for bijectivity on every given object.
NormalityReport comparison_is_normal(const MonFunctorData& f,
                                     const std::vector<FinSet>& objects);

struct FFReport {
  bool full = false, faithful = false;
  bool normal = false, strongClosed = false;
  bool biconditional = false; // (full && faithful) == (normal && strongClosed)
  std::string detail;
};

// Tests fullness and faithfulness by hom enumeration, independently tests
// normality and strong closedness (canonical map F[X,Y] -> [FX,FY] is an
// isomorphism), and reports whether the two conjunctions agree.
FFReport check_ff_equivalence(const MonFunctorData& f,
                              const std::vector<FinSet>& objects);

// ---------------------------------------------------------------------------
// Categories enriched in a cartesian base, given by explicit hom tables.

struct FinEnrichedCat {
  std::string name;
  std::vector<FinSet> objects;
  std::function<FinSet(int, int)> homObj;
  std::function<FinMap(int, int, int)> comp; // hom(j,k) x hom(i,j) -> hom(i,k)
  std::function<FinMap(int)> id;             // 1 -> hom(i,i)
};

// A cartesian closed base enriched in itself: hom(i,j) = [Xi, Xj].
FinEnrichedCat self_enrich(const Cat& v, std::vector<FinSet> objects);
// Associativity and unit laws of the enriched composition.
LawReport check_enriched_laws(const FinEnrichedCat& a);
// Global elements of hom(i,j): the underlying hom set.
FinSet underlying_hom(const FinEnrichedCat& a, int i, int j);
// Transport enrichment along a monoidal endofunctor of the base: hom objects
// become L(hom), composition goes through prodCmp, identities through
// unitCmp. Checks L's coherence on the hom objects involved and the enriched
// laws of the result; throws MonoidalLawViolation on failure.
FinEnrichedCat change_of_base(const MonFunctorData& l, const FinEnrichedCat& a);

// ---------------------------------------------------------------------------
// Atom-level operators for iterated power comonads. A depth-n nested table
// over M represents an element of T^n X; these avoid materializing the huge
// ambient sets when only pointwise data is needed.

// Apply f under n table layers, rebuilding the spine.
AtomP at_map_under(int layers, const std::function<AtomP(const AtomP&)>& f,
                   const AtomP& a);
// Zip k same-spine nested atoms, combining the depth-n leaves.
AtomP at_zip_under(int layers,
                   const std::function<AtomP(const std::vector<AtomP>&)>& f,
                   const std::vector<AtomP>& as);
// Build a depth-n table over m.carrier with leaf(path) at each path.
AtomP at_build(const FinMonoid& m, int n,
               const std::function<AtomP(const std::vector<AtomP>&)>& leaf);
// Iterated counit: strip n layers at the monoid unit.
AtomP at_eps_n(const FinMonoid& m, int n, const AtomP& a);
// Iterated comultiplication: depth-n to depth-2n, leaf(as)(bs) = at(as*bs).
AtomP at_delta_n(const FinMonoid& m, int n, const AtomP& a);
// Iterated coalgebra: constant depth-n table at a.
AtomP at_const_n(const FinMonoid& m, int n, const AtomP& a);
// Apply a depth-n nested table to a path of n arguments.
AtomP at_apply_path(const AtomP& a, const std::vector<AtomP>& path);
// T^n X as a set; guarded by kEnumCap.
FinSet pw_obj_n(const FinMonoid& m, int n, const FinSet& x);

} // namespace lbox
