#pragma once
// Reduction and equality: level-indexed capture-avoiding substitution,
// parallel substitution, redex enumeration, leftmost-outermost
// normalization with a step budget, eta-long forms, beta-eta equality.

#include <string>
#include <utility>
#include <vector>

#include "lbox/syntax.hpp"

namespace lbox {

enum class RedexKind { beta_arrow, beta_box, beta_cbox, beta_prod1, beta_prod2 };
const char* redex_kind_name(RedexKind k);

struct RedexSite {
  std::vector<int> path;  // child indices from the root (see Term)
  RedexKind kind;
};

// [N/x]M where x is bound at the level of M's root. The level counter rises
// under quotation and falls under splicing; a splice that exits the
// binder's scope is left untouched (its frame was popped there).
TermP subst_leveled(const TermP& N, const std::string& x, const TermP& M);

// Simultaneous substitution of all bindings at the root level.
// Throws DuplicateBinding on repeated names.
TermP psubst(const std::vector<std::pair<std::string, TermP>>& binds,
             const TermP& M);

// Rename free occurrences of x bound at relative level atLevel to y.
TermP rename_at(const TermP& M, const std::string& x, const std::string& y,
                int atLevel);

// [N/x]M for x bound at relative level atLevel (frame distance) above M.
TermP subst_at(const TermP& N, const std::string& x, const TermP& M,
               int atLevel);

// All redex sites in leftmost-outermost (preorder) order.
std::vector<RedexSite> redexes(const TermP& M);

// Contract the redex at site; throws InvalidSite if the path does not
// address a redex of the given kind.
TermP step(const TermP& M, const RedexSite& site);

// Leftmost-outermost normalization. Throws BudgetExceeded when more than
// budget steps are needed. Total on arbitrary terms.
TermP normalize(const TermP& M, int budget = 10000);

// Eta-long form of a beta-normal term of type A in j's context (stack and
// level are taken from j). Output binders carry no annotations.
TermP eta_long(const TermP& M, const TypeP& A, const Judgment& j);

// Beta-eta equality, decided by comparing eta-long beta-normal forms.
// Both terms must check against j's stack/level/type; checker errors
// propagate.
bool equal_theory(const TermP& M, const TermP& N, const Judgment& j);

}  // namespace lbox
