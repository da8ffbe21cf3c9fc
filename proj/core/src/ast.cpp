#include "sprw/ast.hpp"

#include <algorithm>

namespace sprw {

const char* unit_name(TimeUnit u) {
  switch (u) {
    case TimeUnit::Secs: return "secs";
    case TimeUnit::Mins: return "mins";
    case TimeUnit::Hours: return "hours";
    case TimeUnit::Days: return "days";
    case TimeUnit::Weeks: return "weeks";
  }
  return "?";
}

TimeMs Duration::millis() const {
  constexpr TimeMs kSec = 1000;
  switch (unit) {
    case TimeUnit::Secs: return amount * kSec;
    case TimeUnit::Mins: return amount * 60 * kSec;
    case TimeUnit::Hours: return amount * 3600 * kSec;
    case TimeUnit::Days: return amount * 86400 * kSec;
    case TimeUnit::Weeks: return amount * 604800 * kSec;
  }
  return 0;
}

Expr Expr::constant(Value v) {
  Expr e;
  e.kind = Kind::Const;
  e.value = std::move(v);
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::negate(Expr inner) {
  Expr e;
  e.kind = Kind::Not;
  e.args.push_back(std::move(inner));
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const: return a.value == b.value;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Not: return a.args == b.args;
    case Expr::Kind::Binary: return a.op == b.op && a.args == b.args;
  }
  return false;
}

const char* op_token(Expr::Op op) {
  switch (op) {
    case Expr::Op::Or: return "or";
    case Expr::Op::And: return "and";
    case Expr::Op::Eq: return "==";
    case Expr::Op::Ne: return "!=";
    case Expr::Op::Lt: return "<";
    case Expr::Op::Le: return "<=";
    case Expr::Op::Gt: return ">";
    case Expr::Op::Ge: return ">=";
    case Expr::Op::Add: return "+";
    case Expr::Op::Sub: return "-";
    case Expr::Op::Mul: return "*";
    case Expr::Op::Div: return "/";
  }
  return "?";
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Var) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  }
  for (const auto& a : e.args) collect_vars(a, out);
}

const char* operator_name(ElemOperator::Kind k) {
  switch (k) {
    case ElemOperator::Kind::Window: return "window";
    case ElemOperator::Kind::Debounce: return "debounce";
    case ElemOperator::Kind::Every: return "every";
    case ElemOperator::Kind::Count: return "count";
  }
  return "?";
}

const ElemOperator* ElemPattern::find_operator(ElemOperator::Kind k) const {
  for (const auto& op : operators)
    if (op.kind == k) return &op;
  return nullptr;
}

std::size_t PatternAst::leaf_count() const {
  std::size_t n = 0;
  for (const auto& alt : alternatives) n += alt.size();
  return n;
}

const PatternAst* Program::find(const std::string& name) const {
  for (const auto& p : patterns)
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace sprw
