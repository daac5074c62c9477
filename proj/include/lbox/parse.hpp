#pragma once
// Surface syntax. One declaration per line; `#` starts a comment.
//
//   base NAME @ L
//   def NAME : TYPE [@ L] = TERM
//   jdg FRAME (; FRAME)* |- TERM : TYPE [@ L]
//   eq TERM = TERM [: TYPE] [@ L]
//   model MONOID DEPTH [NAME[@L]=SIZE ...]
//
// Frames are "." (empty) or comma-separated "x:TYPE" entries; the leftmost
// frame is the highest-level one. Types parse unleveled and are stamped
// from "@ L" when present. Term grammar:
//
//   term   := \x[:T]. term | gbox [xs = ts] in term | dlet x = term in term
//           | appterm
//   app    := prefix prefix*
//   prefix := quo [[x:T,..]] atom | unq atom [with [term,..]]
//           | proj1 atom | proj2 atom | dbox atom | atom
//   atom   := NAME | () | (term) | (term, term)
//
// Type grammar: arrow is right-associative and loosest, product binds
// tighter, boxes ([]A, [A,B]C, dbox A) take atomic operands.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lbox/syntax.hpp"

namespace lbox {

struct BaseDecl {
  std::string name;
  int level = 0;
  int line = 0;
};
struct DefDecl {
  std::string name;
  TypeP type;  // unleveled
  std::optional<int> level;
  TermP term;
  int line = 0;
};
struct JdgDecl {
  Judgment j;  // stamped when "@ L" was present, unleveled otherwise
  int line = 0;
};
struct EqDecl {
  TermP lhs, rhs;
  std::optional<TypeP> type;  // unleveled
  std::optional<int> level;
  int line = 0;
};
struct ValSpec {
  std::string name;
  std::optional<int> level;  // absent: all declared levels of the base
  int size = 0;
};
struct ModelDecl {
  std::string monoid;  // "trivial", "z2", or a table file path
  int depth = 0;
  std::vector<ValSpec> vals;
  int line = 0;
};

struct FileDecls {
  std::vector<BaseDecl> bases;
  std::vector<DefDecl> defs;
  std::vector<JdgDecl> jdgs;
  std::vector<EqDecl> eqs;
  std::vector<ModelDecl> models;
  std::map<std::string, std::set<int>> signature() const;
};

FileDecls parse_file(const std::string& src);
TermP parse_term(const std::string& src);
TypeP parse_type(const std::string& src);
Judgment parse_judgment(const std::string& src);

}  // namespace lbox
