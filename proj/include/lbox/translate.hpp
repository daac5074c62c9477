#pragma once
// Inter-system translations: desugaring the hypothesis-binding box into
// the plain quotation fragment, and translating plain quotation
// derivations into the single-frame gbox system.

#include <utility>

#include "lbox/check.hpp"
#include "lbox/syntax.hpp"

namespace lbox {

// [A1,..,An]B becomes [](A1 -> .. -> An -> B); quotation binders become
// lambdas under the quotation; splice arguments become applications of the
// splice. Annotations are desugared in place; plain constructs pass
// through unchanged.
TypeP desugar_type(const TypeP& t);
TermP desugar_term(const TermP& t);
Judgment desugar_judgment(const Judgment& j);

// True when every splice sits at quotation depth >= 1 (quotation bodies
// count +1, splice subjects -1): exactly the terms whose splices can all
// be hoisted into gbox bindings.
bool gentzen_translatable(const TermP& t);

// Translate a plain-quotation derivation (no hypothesis-binding boxes,
// no dual boxes) into the gbox system: frames flatten into one unleveled
// frame with a hypothesis at distance k boxed k times, and each splice is
// hoisted into a gbox binding of the quotation one level down. Splices at
// depth 0 have no image; throws UnsupportedConstruct.
Judgment to_gentzen(const DerivP& d);

}  // namespace lbox
