#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcsrepair/source.hpp"

namespace dcsrepair {

// AST for the FSP/FLTL subset accepted by this toolkit. The grammar itself is
// pinned in docs/grammar.md; every node here corresponds to one production.

struct NameRef {
  std::string name;
  Span span;
};

// ---------------------------------------------------------------------------
// Expressions (guards, indices, range bounds)

struct Expr {
  enum class Kind { Integer, ConstRef, VarRef, Unary, Binary };
  Kind kind = Kind::Integer;
  long value = 0;        // Integer
  std::string name;      // ConstRef (upper) / VarRef (lower index variable)
  std::string op;        // Unary/Binary operator lexeme
  std::vector<Expr> kids;
  Span span;
};

// Either a named range/set (upper identifier) or explicit lo..hi bounds.
struct RangeRef {
  std::optional<NameRef> named;
  std::optional<Expr> lo;
  std::optional<Expr> hi;
  Span span;
};

// ---------------------------------------------------------------------------
// Action labels: head plus dotted/indexed suffix parts, e.g. in[i:0..2],
// out[i], door.open, tick.1.

struct LabelPart {
  enum class Kind { DottedName, DottedInt, Index, Binder };
  Kind kind = Kind::DottedName;
  std::string name;             // DottedName / Binder variable
  long value = 0;               // DottedInt
  std::optional<Expr> index;    // Index
  std::optional<RangeRef> range;  // Binder
  Span span;
};

struct ActionLabel {
  NameRef head;
  std::vector<LabelPart> parts;
  Span span;
};

// ---------------------------------------------------------------------------
// Process bodies

struct Choice;

struct Target {
  enum class Kind { Stop, Error, End, Ref, Group };
  Kind kind = Kind::Stop;
  NameRef ref;                       // Ref
  std::vector<Expr> indices;         // Ref
  std::shared_ptr<Choice> group;     // Group (parenthesized sub-choice)
  Span span;
};

struct Alternative {
  std::optional<Expr> guard;     // when (...) condition
  Span guard_span;               // full "when (...)" region when guard is set
  std::vector<ActionLabel> actions;
  Target target;
};

struct Choice {
  std::vector<Alternative> alternatives;
  bool parenthesized = false;
};

struct IndexDecl {
  std::optional<std::string> var;  // binder variable, empty for plain exprs
  std::optional<RangeRef> range;
  std::optional<Expr> expr;
  Span span;
};

struct LocalDef {
  NameRef name;
  std::vector<IndexDecl> indices;
  Choice body;
};

struct RelabelPair {
  ActionLabel fresh;
  ActionLabel old;
};

// Trailing /{new/old,...} and \{a,b,...} operators on a definition.
struct PostOps {
  std::vector<RelabelPair> relabels;
  std::vector<ActionLabel> hidden;
};

struct Param {
  NameRef name;
  long value = 0;
};

struct ProcessDef {
  NameRef name;
  std::vector<IndexDecl> indices;  // top-level definitions may bind indices too
  std::vector<Param> params;
  Choice body;
  std::vector<LocalDef> locals;
  PostOps ops;
};

// ---------------------------------------------------------------------------
// Composite (parallel) definitions

struct CompositeExpr;
struct PostOps;

struct CompositeElem {
  std::optional<ActionLabel> label;  // sharing/replication prefix before ':'
  std::optional<NameRef> ref;
  std::vector<Expr> args;            // instantiation arguments P(3,4)
  std::shared_ptr<CompositeExpr> nested;
  std::shared_ptr<PostOps> ops;      // per-element relabeling/hiding
};

struct CompositeExpr {
  std::vector<CompositeElem> elements;
};

struct CompositeDef {
  NameRef name;
  std::vector<Param> params;
  CompositeExpr body;
  PostOps ops;
};

// ---------------------------------------------------------------------------
// Declarations

struct ConstDef {
  NameRef name;
  long value = 0;
};

struct RangeDef {
  NameRef name;
  Expr lo;
  Expr hi;
};

// A set element is a plain action label or a reference to another set.
struct SetElem {
  std::optional<ActionLabel> action;
  std::optional<NameRef> set_ref;
  Span span;
};

struct SetDef {
  NameRef name;
  std::vector<SetElem> elements;
};

struct FluentDef {
  NameRef name;
  std::vector<SetElem> initiating;
  std::vector<SetElem> terminating;
  bool initially_true = false;
};

// ---------------------------------------------------------------------------
// FLTL formulas

struct Formula {
  enum class Kind { FluentRef, Not, Next, Always, Eventually, And, Or, Implies, Until };
  Kind kind = Kind::FluentRef;
  NameRef ref;
  std::vector<Formula> kids;
  Span span;
};

struct FltlDef {
  bool is_assert = false;  // assert vs ltl_property
  NameRef name;
  Formula formula;
};

// ---------------------------------------------------------------------------
// Controller synthesis constructs

struct ControllerSpecDef {
  NameRef name;
  std::vector<NameRef> safety;
  std::vector<NameRef> liveness;
  std::vector<NameRef> assumption;
  std::vector<NameRef> controllable;
};

struct ControllerDef {
  NameRef name;
  NameRef environment;
  NameRef goal;
};

// ---------------------------------------------------------------------------

using DefinitionBody =
    std::variant<ConstDef, RangeDef, SetDef, ProcessDef, CompositeDef, FluentDef,
                 FltlDef, ControllerSpecDef, ControllerDef>;

// Major section of a model, used for mutation placement and reporting.
enum class Section { Processes, Requirements, ControllerSpecs };

struct Definition {
  DefinitionBody body;
  int first_line = 1;
  int last_line = 1;
  // Span of the terminating '.', when present (len 0 marks a recovered,
  // unterminated definition).
  Span end_dot;
  bool complete = true;
};

// Site where `[i]` / `.i` index notation can be rewritten, collected during
// parsing: `[v]` with v bound, or `.name` with name free.
struct IndexNotationSite {
  enum class Kind { BracketBound, DottedFree };
  Kind kind = Kind::BracketBound;
  std::string var;
  Span span;  // covers the bracket pair or the '.name' suffix
};

struct Ast {
  std::vector<Definition> definitions;
  std::vector<Span> guard_spans;               // every "when (...)" region
  std::vector<IndexNotationSite> index_sites;

  const char* section_name(Section s) const {
    switch (s) {
      case Section::Processes: return "processes";
      case Section::Requirements: return "requirements";
      case Section::ControllerSpecs: return "controller-specs";
    }
    return "processes";
  }
};

Section definition_section(const Definition& def);
std::string definition_name(const Definition& def);

}  // namespace dcsrepair
