#pragma once
// Core syntax for the leveled modal lambda calculi: types, terms, context
// stacks, judgments, alpha-equivalence, well-formedness, padding.
//
// Level conventions used throughout (relative to the enclosing judgment):
//   quo body      level - 1     quo binders bind at the body level
//   unq code      level + 1     unq args stay at the node level
//   dbox body     level + 1
//   dlet binder   binds at level + 1 (box and body stay at the node level)
//   gbox body     level - 1     gbox binders bind at the body level
// A variable occurrence is bound only by a binder at the same relative
// level; equal names at different levels are distinct variables.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lbox {

// Sentinel for judgments and types that carry no level information yet.
// Distinct from any level reachable by stamping (stamping small levels can
// produce small negatives, which must be representable but ill-formed).
inline constexpr int kUnleveled = -1000000;

enum class ErrKind {
  VariableNotInScope,
  LevelMismatch,
  StackUnderflow,
  ModeViolation,
  TypeMismatch,
  Unsatisfiable,
  NotClosedBox,
  FrameIndexOutOfRange,
  InvalidSite,
  BudgetExceeded,
  DuplicateBinding,
  UnsupportedConstruct,
  LevelExceedsDepth,
  UnvaluedBase,
  ShapeMismatch,
  DuplicateName,
  MissingAnnotation,
  MonoidLawViolation,
  MonoidalLawViolation,
  LawFailure,
  SyntaxError,
  BadInput,
};

const char* errkind_name(ErrKind k);

struct Error : std::runtime_error {
  ErrKind kind;
  Error(ErrKind k, const std::string& msg);
};

[[noreturn]] void fail(ErrKind k, const std::string& msg);

// ---------------------------------------------------------------- types

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct TBase {
  std::string name;
  int level = kUnleveled;
};
struct TArrow {
  TypeP dom, cod;
};
struct TProd {
  TypeP fst, snd;
};
struct TUnit {
  int level = kUnleveled;
};
// [A1,..,An]B. The plain box []B is the n = 0 case. Lives one level above
// its body: level([As]B) = level(B) + 1.
struct TCBox {
  std::vector<TypeP> hyps;
  TypeP body;
};
// Box of the dual-context modes. Lives one level below its body:
// level(dbox A) = level(A) - 1.
struct TDBox {
  TypeP body;
};

struct Type {
  std::variant<TBase, TArrow, TProd, TUnit, TCBox, TDBox> v;
};

TypeP t_base(std::string name, int level = kUnleveled);
TypeP t_arrow(TypeP dom, TypeP cod);
TypeP t_prod(TypeP fst, TypeP snd);
TypeP t_unit(int level = kUnleveled);
TypeP t_box(TypeP body);  // [] body
TypeP t_cbox(std::vector<TypeP> hyps, TypeP body);
TypeP t_dbox(TypeP body);

bool type_eq(const TypeP& a, const TypeP& b);
// True when every leaf level is kUnleveled.
bool type_unleveled(const TypeP& t);
// Level of a consistently leveled type; kUnleveled for a fully unleveled
// one; nullopt when levels are mixed, inconsistent, or negative somewhere.
std::optional<int> try_type_level(const TypeP& t);
// As above but throws LevelMismatch instead of returning nullopt.
int type_level(const TypeP& t);
TypeP erase_type(const TypeP& t);
// Stamp an unleveled type at level l (components shift per the box rules).
// May produce negative leaf levels; validity is try_type_level's job.
TypeP stamp_type(const TypeP& t, int l);
std::string show_type(const TypeP& t);

// ---------------------------------------------------------------- terms

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Binder {
  std::string name;
  std::optional<TypeP> ann;
};

struct Var {
  std::string name;
};
struct Lam {
  Binder b;
  TermP body;
};
struct App {
  TermP fun, arg;
};
struct Pair {
  TermP fst, snd;
};
struct Proj {
  int idx;  // 1 or 2
  TermP body;
};
struct Star {};
struct Quo {
  std::vector<Binder> binders;  // empty for the plain quotation
  TermP body;
};
struct Unq {
  TermP code;
  std::vector<TermP> args;  // empty for the plain splice
};
struct GBox {
  std::vector<Binder> binders;
  std::vector<TermP> args;  // one per binder
  TermP body;
};
struct DBox {
  TermP body;
};
struct DLet {
  std::string name;
  TermP box, body;
};

// Child indices (for rewrite paths): Lam body=0; App fun=0 arg=1;
// Pair fst=0 snd=1; Proj body=0; Quo body=0; Unq code=0 args=1..n;
// GBox args=0..n-1 body=n; DBox body=0; DLet box=0 body=1.
struct Term {
  std::variant<Var, Lam, App, Pair, Proj, Star, Quo, Unq, GBox, DBox, DLet> v;
};

TermP v_(std::string name);
TermP lam(std::string name, TermP body);
TermP lam(std::string name, TypeP ann, TermP body);
TermP app(TermP fun, TermP arg);
TermP pair_(TermP fst, TermP snd);
TermP proj1(TermP body);
TermP proj2(TermP body);
TermP star();
TermP quo(TermP body);
TermP quo(std::vector<Binder> binders, TermP body);
TermP unq(TermP code);
TermP unq(TermP code, std::vector<TermP> args);
TermP gbox(std::vector<Binder> binders, std::vector<TermP> args, TermP body);
TermP dbox(TermP body);
TermP dlet(std::string name, TermP box, TermP body);

// Strict structural equality (names, annotations, levels included).
bool term_eq(const TermP& a, const TermP& b);
// Equality up to consistent renaming of bound variables (level-aware).
bool alpha_eq(const TermP& a, const TermP& b);
// Canonical form string underlying alpha_eq; stable across runs.
std::string canon_term(const TermP& t);
// Free variables with their quotation depth relative to the term's root:
// +1 per enclosing quotation, -1 per splice or dual box.
std::set<std::pair<std::string, int>> free_vars(const TermP& t);
// All names occurring anywhere (free, bound, binders): fresh-name avoid set.
std::set<std::string> all_names(const TermP& t);
std::string show_term(const TermP& t);

// ------------------------------------------------------------- contexts

struct Hyp {
  std::string name;
  TypeP type;
};
using Frame = std::vector<Hyp>;

// frames[0] is the leftmost (highest-level) frame; frames.back() is the
// rightmost frame, at the level of the judgment.
struct ContextStack {
  std::vector<Frame> frames;
  int height() const { return static_cast<int>(frames.size()); }
};

struct Judgment {
  ContextStack stack;
  int level = kUnleveled;
  TermP term;
  TypeP type;
};

// Stack well-formedness plus the level discipline: a frame at distance k
// from the rightmost holds types at level (judgment level + k); the type is
// at the judgment level. An unleveled judgment (level == kUnleveled) is
// well-formed when every type in it is unleveled.
bool well_formed(const Judgment& j);

// Minimal stack height the term shape demands of its judgment.
int need_height(const TermP& t);

// Remove the maximal run of leading empty frames that keeps the stack
// height at least max(1, need_height(term)). Idempotent; derivability is
// preserved in both directions.
Judgment strip_pad(const Judgment& j);

// Drop all level information (types in frames, the judgment level, the
// goal type, and binder annotations inside the term).
Judgment erase_judgment(const Judgment& j);
TermP erase_term_levels(const TermP& t);

// Stamp an unleveled judgment at level l: the goal type at l, a frame at
// distance k from the rightmost at l + k. Term annotations stay unleveled
// (the checker stamps them at their use sites).
Judgment stamp_judgment(const Judgment& j, int l);

bool frame_eq(const Frame& a, const Frame& b);
bool stack_eq(const ContextStack& a, const ContextStack& b);
// Same stack (names and types strict), same level and type, alpha_eq terms.
bool judgment_alpha_eq(const Judgment& a, const Judgment& b);

std::string show_frame(const Frame& f);
std::string show_stack(const ContextStack& s);
std::string show_judgment(const Judgment& j);

}  // namespace lbox
