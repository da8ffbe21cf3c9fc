#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sprw/value.hpp"

namespace sprw {

enum class TimeUnit { Secs, Mins, Hours, Days, Weeks };

const char* unit_name(TimeUnit u);

/// A duration as written in source, e.g. `{2, :mins}`. The surface form is
/// kept; millis() canonicalizes.
struct Duration {
  std::int64_t amount = 1;
  TimeUnit unit = TimeUnit::Secs;

  TimeMs millis() const;
  friend bool operator==(const Duration&, const Duration&) = default;
};

/// Guard / fold expression. A closed, side-effect free language over values,
/// variable references, `not` and the binary operators below.
struct Expr {
  enum class Kind { Const, Var, Not, Binary };
  enum class Op { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

  Kind kind = Kind::Const;
  Op op = Op::And;
  Value value;
  std::string name;
  std::vector<Expr> args;

  static Expr constant(Value v);
  static Expr var(std::string name);
  static Expr negate(Expr e);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  friend bool operator==(const Expr& a, const Expr& b);
};

const char* op_token(Expr::Op op);

/// Collects every variable name referenced by `e`, in first-use order.
void collect_vars(const Expr& e, std::vector<std::string>& out);

struct Term {
  enum class Kind { Const, Var, MustDistinct, MayDistinct };

  Kind kind = Kind::Var;
  Value value;       // Const only
  std::string name;  // everything else

  static Term constant(Value v) { return Term{Kind::Const, std::move(v), {}}; }
  static Term var(std::string n) { return Term{Kind::Var, {}, std::move(n)}; }
  static Term must_distinct(std::string n) { return Term{Kind::MustDistinct, {}, std::move(n)}; }
  static Term may_distinct(std::string n) { return Term{Kind::MayDistinct, {}, std::move(n)}; }

  bool is_variable() const { return kind != Kind::Const; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Selector {
  Symbol type;
  std::vector<Term> terms;

  std::size_t arity() const { return terms.size(); }
  friend bool operator==(const Selector&, const Selector&) = default;
};

/// Refinement attached to a named pattern reference: `var = expr`,
/// `from ~> to`, or a distinctness marker `@var` / `!var`.
struct Refinement {
  enum class Kind { InlineGuard, Alias, Mark };

  Kind kind = Kind::InlineGuard;
  std::string var;
  Expr expr;           // InlineGuard
  std::string target;  // Alias
  Term::Kind mark = Term::Kind::MayDistinct;  // Mark

  friend bool operator==(const Refinement&, const Refinement&) = default;
};

struct NamedRef {
  std::string name;
  std::vector<Refinement> refinements;

  friend bool operator==(const NamedRef&, const NamedRef&) = default;
};

struct ElemOperator {
  enum class Kind { Window, Debounce, Every, Count };

  Kind kind = Kind::Window;
  Duration duration;    // Window, Debounce
  std::int64_t n = 1;   // Every, Count

  friend bool operator==(const ElemOperator&, const ElemOperator&) = default;
};

const char* operator_name(ElemOperator::Kind k);

struct FoldFn {
  // One entry per tuple element; nullopt is the `_` wildcard. Element 0 is
  // the message type tag.
  std::vector<std::optional<std::string>> params;
  std::string acc;
  Expr body;

  friend bool operator==(const FoldFn&, const FoldFn&) = default;
};

struct Fold {
  Expr init;
  FoldFn fn;
  friend bool operator==(const Fold&, const Fold&) = default;
};

struct Bind {
  std::string name;
  friend bool operator==(const Bind&, const Bind&) = default;
};

using Transformer = std::variant<Fold, Bind>;

struct ElemPattern {
  bool negated = false;
  std::variant<Selector, NamedRef> base;
  std::vector<ElemOperator> operators;
  std::vector<Transformer> transformers;

  bool is_ref() const { return std::holds_alternative<NamedRef>(base); }
  const Selector& selector() const { return std::get<Selector>(base); }
  Selector& selector() { return std::get<Selector>(base); }
  const NamedRef& ref() const { return std::get<NamedRef>(base); }

  const ElemOperator* find_operator(ElemOperator::Kind k) const;

  friend bool operator==(const ElemPattern&, const ElemPattern&) = default;
};

struct PatternOptions {
  bool seq = false;
  std::optional<Duration> interval;
  bool last = false;
  // Composite-level output throttling. Not part of the original option set.
  std::optional<Duration> debounce;

  bool is_default() const { return !seq && !interval && !last && !debounce; }
  friend bool operator==(const PatternOptions&, const PatternOptions&) = default;
};

/// A conjunction of elementary patterns.
using Alternative = std::vector<ElemPattern>;

/// A named pattern. The body is a disjunction of conjunctions: `and` binds
/// tighter than `or`, and the surface grammar has no parentheses.
struct PatternAst {
  std::string name;
  std::vector<Alternative> alternatives;
  std::optional<Expr> guard;
  PatternOptions options;

  std::size_t leaf_count() const;
  friend bool operator==(const PatternAst&, const PatternAst&) = default;
};

struct ReactionBinding {
  std::string pattern;
  std::string label;
  friend bool operator==(const ReactionBinding&, const ReactionBinding&) = default;
};

struct Program {
  std::vector<PatternAst> patterns;
  std::vector<ReactionBinding> bindings;

  const PatternAst* find(const std::string& name) const;
  friend bool operator==(const Program&, const Program&) = default;
};

}  // namespace sprw
