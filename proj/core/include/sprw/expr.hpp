#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "sprw/ast.hpp"
#include "sprw/bindings.hpp"

namespace sprw {

/// Lookup scope for expression evaluation: locals (fold parameters) shadow
/// intermediates, which shadow pattern bindings.
struct EvalEnv {
  std::vector<std::pair<std::string_view, const Value*>> locals;
  const Intermediates* intermediates = nullptr;
  const Bindings* bindings = nullptr;

  const Value* lookup(std::string_view name) const;
};

/// Evaluates `e`. Throws EvalError (UnboundVariable, TypeMismatch,
/// DivisionByZero, Overflow). Int operands are promoted to Float only when
/// the other operand is a Float.
Value eval_expr(const Expr& e, const EvalEnv& env);

/// Evaluates a guard; anything but a Bool result is a TypeMismatch.
bool eval_guard(const Expr& e, const EvalEnv& env);

}  // namespace sprw
