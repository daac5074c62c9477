#pragma once
// Type checking for the five system modes, level inference, structural
// transformations on derivations, and the structural-rule inhabitants of
// the contextual box.
//
// Modes:
//   fitch    leveled context stacks of any height, quotation/splice terms,
//            contextual boxes ([As]B; the plain box is the n = 0 case)
//   gentzen  unleveled, single frame, one mixed box rule (gbox), plain
//            boxes only, no box elimination
//   dual     leveled, height exactly two (modal frame | ordinary frame),
//            dual boxes introduced against an emptied modal zone and
//            eliminated by dlet into the modal frame
//   multi    leveled, any height; dual boxes whose introduction pops the
//            rightmost frame and whose dlet binds one frame up
//   benton   fitch and multi rules combined

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lbox/syntax.hpp"

namespace lbox {

enum class SystemMode { fitch, gentzen, dual, multi, benton };
const char* mode_name(SystemMode m);
SystemMode mode_from_name(const std::string& s);  // throws BadInput

enum class RuleName {
  Var,
  Abs,
  App,
  Pair,
  Proj1,
  Proj2,
  Star,
  Quo,   // plain quotation (no binders)
  Unq,   // plain splice (no arguments)
  CQuo,  // quotation binding hypotheses
  CUnq,  // splice with arguments
  GBox,
  DBoxI,
  DBoxE,
  MBoxI,
  MBoxE,
};
const char* rule_name(RuleName r);

struct Derivation;
using DerivP = std::shared_ptr<const Derivation>;

struct Derivation {
  RuleName rule;
  Judgment conclusion;
  std::vector<DerivP> premises;
};

DerivP mk_deriv(RuleName r, Judgment c, std::vector<DerivP> ps = {});

// Base-type signature: which levels each base name may be used at.
using Signature = std::map<std::string, std::set<int>>;

// Check j in the given mode and return its full derivation. The root
// conclusion is j itself; binders that would collide with a name already
// in their target frame are renamed inside premises. Leveled modes demand
// a leveled, well-formed judgment; gentzen demands an unleveled one.
DerivP check(SystemMode mode, const Judgment& j);

// Find a level for an unleveled judgment that satisfies the signature,
// stamp it, and check it in fitch mode. Picks the smallest admissible
// level. Throws Unsatisfiable when no level fits the signature; checker
// errors propagate.
std::pair<Judgment, DerivP> infer_levels(const Judgment& j,
                                         const Signature& sig);

inline Judgment erase_levels(const Judgment& j) { return erase_judgment(j); }

// Structural transformations of fitch derivations. Frames are addressed
// by distance from the rightmost frame; positions index within a frame.
enum class StructRule { weaken, exchange, contract, subst };

struct StructData {
  int frame = 0;
  int pos = 0;
  int pos2 = 0;             // exchange/contract: the second position
  std::optional<Hyp> hyp;   // weaken: the hypothesis to insert at pos
  std::string substVar;     // subst: the hypothesis to replace
  TermP substArg;           // subst: replacement, in the prefix context
};

// Returns a derivation of the transformed judgment:
//   weaken    insert hyp at (frame, pos); term unchanged
//   exchange  swap the hypotheses at pos and pos2; term unchanged
//   contract  merge pos2 into pos (same type); occurrences renamed
//   subst     drop substVar from frame; occurrences replaced by substArg,
//             which must check in the context left of that hypothesis
DerivP derive_structural(StructRule r, const DerivP& d, const StructData& s);

// From a derivation of  . |- M : []A  at level l+1 (single empty frame,
// plain box), produce the derivation of  .;. |- unq M : A  at level l.
// Throws NotClosedBox otherwise.
DerivP denecessitate(const DerivP& d);

// Closed terms internalizing weakening, contraction, exchange, and cut for
// the contextual box. ctxTypes = Gamma ++ [B] with the distinguished
// hypothesis last (must be nonempty); goal is the subject type. Each pair
// is the term together with its type.
std::vector<std::pair<TermP, TypeP>> structural_inhabitants(
    const std::vector<TypeP>& ctxTypes, const TypeP& goal);

}  // namespace lbox
