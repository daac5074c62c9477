#pragma once

// Executable denotational semantics into towers of co-Kleisli categories of
// iterated power comonads over finite sets. A judgment with k frames at
// levels l..l+k-1 denotes a table whose atom has k nested layers: the outer
// layer ranges over the iterated-power completion of the leftmost frame,
// middle layers are hom tables for the inner frames, and the innermost layer
// is the hom table over the rightmost frame into the type's carrier.

#include <map>
#include <string>

#include "lbox/check.hpp"
#include "lbox/fincat.hpp"
#include "lbox/syntax.hpp"

namespace lbox {

// A model fixes the monoid, the tower depth, and carriers for base types.
// Valuation keys are (base name, level); a base type is interpretable only
// at levels it has a carrier for.
struct Model {
  FinMonoid monoid;
  int depth = 1;
  std::map<std::pair<std::string, int>, FinSet> valuation;
};

// Validates the monoid (MonoidLawViolation) and the depth (BadInput if
// negative).
Model build_model(const FinMonoid& monoid, int depth,
                  const std::map<std::pair<std::string, int>, FinSet>& valuation);

// Carrier of a type at a level of the tower. Levels outside [0, depth]
// raise LevelExceedsDepth; bases without a carrier raise UnvaluedBase;
// arrows at level l are hom tables of the level-l category; a box type at
// level l is the hom-set carrier of its contents at level l-1, so quoting
// changes no bytes. Dual and unleveled box types are unsupported here.
FinSet interp_type(const Model& mo, const TypeP& t, int level);

// Right-nested product of hypothesis carriers, ending in the unit set.
FinSet interp_frame(const Model& mo, const Frame& f, int level);

// Denotation of a derivation: a morphism of the category at the leftmost
// frame's level, from that frame's context product to the nested hom
// carrier of the rest of the judgment.
struct Den {
  Judgment judgment;
  FinMap morphism; // dom = iterated power of the leftmost context product
  int level = 0;     // category level: leftmost frame level
  int typeLevel = 0; // judgment level
};

// Core interpreter over checked derivations. Handles variable, abstraction,
// application, pair, projections, unit, quote, and unquote rules in both the
// plain and contextual forms; anything else raises UnsupportedConstruct.
Den interp_derivation(const Model& mo, const DerivP& d);

// Checks the judgment in the given mode, then interprets the derivation.
Den interp_term(const Model& mo, const Judgment& j,
                SystemMode mode = SystemMode::fitch);

// Alias for the core interpreter, named for derivations that use the
// contextual quote and unquote rules.
Den interp_contextual(const Model& mo, const DerivP& d);

// Interprets both derivations, which must share stack, level, and type
// (ShapeMismatch otherwise), and compares the tables byte for byte. On
// disagreement returns false and, when witness is non-null, stores the
// first differing input row.
bool check_soundness(const Model& mo, const DerivP& a, const DerivP& b,
                     std::string* witness = nullptr);

// The denotation table as CSV: one "input,output" line per row.
std::string den_to_csv(const Den& d);

} // namespace lbox
