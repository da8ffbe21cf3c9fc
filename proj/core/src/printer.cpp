#include "sprw/dsl.hpp"

namespace sprw {

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
    case Expr::Kind::Var: return 7;
    case Expr::Kind::Not: return 3;
    case Expr::Kind::Binary: break;
  }
  switch (e.op) {
    case Expr::Op::Or: return 1;
    case Expr::Op::And: return 2;
    case Expr::Op::Eq:
    case Expr::Op::Ne:
    case Expr::Op::Lt:
    case Expr::Op::Le:
    case Expr::Op::Gt:
    case Expr::Op::Ge: return 4;
    case Expr::Op::Add:
    case Expr::Op::Sub: return 5;
    case Expr::Op::Mul:
    case Expr::Op::Div: return 6;
  }
  return 0;
}

void print_expr(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_expr(child, out);
  if (parens) out += ')';
}

void print_expr(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Const: out += to_source(e.value); return;
    case Expr::Kind::Var: out += e.name; return;
    case Expr::Kind::Not:
      out += "not ";
      print_child(e.args[0], precedence(e.args[0]) < 3, out);
      return;
    case Expr::Kind::Binary: {
      int p = precedence(e);
      print_child(e.args[0], precedence(e.args[0]) < p, out);
      out += ' ';
      out += op_token(e.op);
      out += ' ';
      print_child(e.args[1], precedence(e.args[1]) <= p, out);
      return;
    }
  }
}

std::string print_term(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Const: return to_source(t.value);
    case Term::Kind::Var: return t.name;
    case Term::Kind::MustDistinct: return "!" + t.name;
    case Term::Kind::MayDistinct: return "@" + t.name;
  }
  return {};
}

std::string print_refinement(const Refinement& r) {
  switch (r.kind) {
    case Refinement::Kind::InlineGuard: return r.var + " = " + pretty_print(r.expr);
    case Refinement::Kind::Alias: return r.var + " ~> " + r.target;
    case Refinement::Kind::Mark: return (r.mark == Term::Kind::MustDistinct ? "!" : "@") + r.var;
  }
  return {};
}

std::string print_operator(const ElemOperator& op) {
  std::string out = std::string(operator_name(op.kind)) + ": ";
  if (op.kind == ElemOperator::Kind::Window || op.kind == ElemOperator::Kind::Debounce)
    out += pretty_print(op.duration);
  else
    out += std::to_string(op.n);
  return out;
}

std::string print_transformer(const Transformer& t) {
  if (const auto* b = std::get_if<Bind>(&t)) return "bind(" + b->name + ")";
  const auto& f = std::get<Fold>(t);
  std::string out = "fold(" + pretty_print(f.init) + ", fn({";
  for (std::size_t i = 0; i < f.fn.params.size(); ++i) {
    if (i) out += ", ";
    out += f.fn.params[i] ? *f.fn.params[i] : "_";
  }
  out += "}, " + f.fn.acc + ") -> " + pretty_print(f.fn.body) + " end)";
  return out;
}

std::string print_options(const PatternOptions& o) {
  std::vector<std::string> parts;
  if (o.seq) parts.push_back("seq: true");
  if (o.interval) parts.push_back("interval: " + pretty_print(*o.interval));
  if (o.last) parts.push_back("last: true");
  if (o.debounce) parts.push_back("debounce: " + pretty_print(*o.debounce));
  std::string out = "options: [";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out + "]";
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

std::string pretty_print(const Duration& d) {
  return "{" + std::to_string(d.amount) + ", :" + unit_name(d.unit) + "}";
}

std::string pretty_print(const Selector& sel) {
  std::string out = "{:" + sel.type.name;
  for (const auto& t : sel.terms) out += ", " + print_term(t);
  return out + "}";
}

std::string pretty_print(const ElemPattern& elem) {
  std::string out = elem.negated ? "not " : "";
  if (elem.is_ref()) {
    const auto& r = elem.ref();
    out += r.name;
    if (!r.refinements.empty()) {
      out += '{';
      for (std::size_t i = 0; i < r.refinements.size(); ++i) {
        if (i) out += ", ";
        out += print_refinement(r.refinements[i]);
      }
      out += '}';
    }
  } else {
    out += pretty_print(elem.selector());
  }
  if (!elem.operators.empty()) {
    out += '[';
    for (std::size_t i = 0; i < elem.operators.size(); ++i) {
      if (i) out += ", ";
      out += print_operator(elem.operators[i]);
    }
    out += ']';
  }
  for (const auto& t : elem.transformers) out += " |> " + print_transformer(t);
  return out;
}

std::string pretty_print(const PatternAst& ast) {
  std::string out = "pattern " + ast.name + " as ";
  for (std::size_t a = 0; a < ast.alternatives.size(); ++a) {
    if (a) out += " or ";
    const auto& alt = ast.alternatives[a];
    for (std::size_t i = 0; i < alt.size(); ++i) {
      if (i) out += " and ";
      out += pretty_print(alt[i]);
    }
  }
  if (ast.guard) out += " when " + pretty_print(*ast.guard);
  if (!ast.options.is_default()) out += ", " + print_options(ast.options);
  return out;
}

std::string pretty_print(const Program& program) {
  std::string out;
  for (const auto& p : program.patterns) out += pretty_print(p) + "\n";
  for (const auto& b : program.bindings)
    out += "react_to " + b.pattern + ", with: emit(" + b.label + ")\n";
  return out;
}

}  // namespace sprw
