#include "sprw/expr.hpp"

#include <limits>

#include "sprw/errors.hpp"

namespace sprw {

const Value* EvalEnv::lookup(std::string_view name) const {
  for (auto it = locals.rbegin(); it != locals.rend(); ++it)
    if (it->first == name) return it->second;
  if (intermediates)
    if (const Value* v = intermediates->find(name)) return v;
  if (bindings) return bindings->find(name);
  return nullptr;
}

namespace {

[[noreturn]] void mismatch(Expr::Op op, const Value& a, const Value& b) {
  throw EvalError(EvalError::Kind::TypeMismatch, std::string("'") + op_token(op) + "' on " +
                                                     kind_name(a.kind()) + " and " +
                                                     kind_name(b.kind()));
}

bool expect_bool(const Value& v, const char* where) {
  if (!v.is_bool())
    throw EvalError(EvalError::Kind::TypeMismatch,
                    std::string(where) + " expects Bool, got " + kind_name(v.kind()));
  return v.as_bool();
}

bool numeric_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.is_int() && b.is_int()) return a.as_int() == b.as_int();
    return a.as_number() == b.as_number();
  }
  return a == b;
}

// Negative, zero, positive.
int compare(Expr::Op op, const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.is_int() && b.is_int()) return a.as_int() < b.as_int() ? -1 : a.as_int() > b.as_int();
    double x = a.as_number(), y = b.as_number();
    return x < y ? -1 : x > y;
  }
  if (a.is_str() && b.is_str()) return a.as_str().compare(b.as_str());
  mismatch(op, a, b);
}

Value arithmetic(Expr::Op op, const Value& a, const Value& b) {
  if (!a.is_number() || !b.is_number()) mismatch(op, a, b);
  if (a.is_int() && b.is_int()) {
    std::int64_t x = a.as_int(), y = b.as_int(), r = 0;
    bool overflow = false;
    switch (op) {
      case Expr::Op::Add: overflow = __builtin_add_overflow(x, y, &r); break;
      case Expr::Op::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
      case Expr::Op::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
      case Expr::Op::Div:
        if (y == 0) throw EvalError(EvalError::Kind::DivisionByZero, "integer division by zero");
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) overflow = true;
        else r = x / y;
        break;
      default: break;
    }
    if (overflow)
      throw EvalError(EvalError::Kind::Overflow, std::string("integer overflow in '") + op_token(op) + "'");
    return Value(r);
  }
  double x = a.as_number(), y = b.as_number();
  switch (op) {
    case Expr::Op::Add: return Value(x + y);
    case Expr::Op::Sub: return Value(x - y);
    case Expr::Op::Mul: return Value(x * y);
    case Expr::Op::Div:
      if (y == 0.0) throw EvalError(EvalError::Kind::DivisionByZero, "float division by zero");
      return Value(x / y);
    default: break;
  }
  mismatch(op, a, b);
}

}  // namespace

Value eval_expr(const Expr& e, const EvalEnv& env) {
  switch (e.kind) {
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Var: {
      const Value* v = env.lookup(e.name);
      if (!v) throw EvalError(EvalError::Kind::UnboundVariable, "'" + e.name + "' is not bound");
      return *v;
    }
    case Expr::Kind::Not: return Value(!expect_bool(eval_expr(e.args[0], env), "'not'"));
    case Expr::Kind::Binary: break;
  }
  if (e.op == Expr::Op::And || e.op == Expr::Op::Or) {
    bool lhs = expect_bool(eval_expr(e.args[0], env), op_token(e.op));
    if (e.op == Expr::Op::And && !lhs) return Value(false);
    if (e.op == Expr::Op::Or && lhs) return Value(true);
    return Value(expect_bool(eval_expr(e.args[1], env), op_token(e.op)));
  }
  Value a = eval_expr(e.args[0], env);
  Value b = eval_expr(e.args[1], env);
  switch (e.op) {
    case Expr::Op::Eq: return Value(numeric_equal(a, b));
    case Expr::Op::Ne: return Value(!numeric_equal(a, b));
    case Expr::Op::Lt: return Value(compare(e.op, a, b) < 0);
    case Expr::Op::Le: return Value(compare(e.op, a, b) <= 0);
    case Expr::Op::Gt: return Value(compare(e.op, a, b) > 0);
    case Expr::Op::Ge: return Value(compare(e.op, a, b) >= 0);
    default: return arithmetic(e.op, a, b);
  }
}

bool eval_guard(const Expr& e, const EvalEnv& env) {
  return expect_bool(eval_expr(e, env), "guard");
}

}  // namespace sprw
