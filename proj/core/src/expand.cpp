#include <map>
#include <set>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"
#include "sprw/expr.hpp"

namespace sprw {

namespace {

struct Leaf {
  ElemPattern elem;
  // Variable names already replaced by constants through inline guards.
  std::set<std::string> substituted;
};

struct Expanded {
  std::vector<std::vector<Leaf>> alternatives;
  std::optional<Expr> guard;
  PatternOptions options;
};

bool has_var(const Selector& sel, const std::string& name) {
  for (const auto& t : sel.terms)
    if (t.is_variable() && t.name == name) return true;
  return false;
}

void rename_in_expr(Expr& e, const std::string& from, const std::string& to) {
  if (e.kind == Expr::Kind::Var && e.name == from) e.name = to;
  for (auto& a : e.args) rename_in_expr(a, from, to);
}

void substitute_in_expr(Expr& e, const std::string& name, const Value& v) {
  if (e.kind == Expr::Kind::Var && e.name == name) {
    e = Expr::constant(v);
    return;
  }
  for (auto& a : e.args) substitute_in_expr(a, name, v);
}

bool shadows(const Fold& f, const std::string& name) {
  if (f.fn.acc == name) return true;
  for (const auto& p : f.fn.params)
    if (p && *p == name) return true;
  return false;
}

template <class Fn>
void for_each_outer_expr(ElemPattern& elem, const std::string& name, Fn&& fn) {
  for (auto& t : elem.transformers) {
    if (auto* f = std::get_if<Fold>(&t)) {
      fn(f->init);
      if (!shadows(*f, name)) fn(f->fn.body);
    }
  }
}

Expr and_all(std::vector<Expr> parts) {
  Expr out = std::move(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i)
    out = Expr::binary(Expr::Op::And, std::move(out), std::move(parts[i]));
  return out;
}

class Expander {
 public:
  explicit Expander(const Program& p) : program_(p) {}

  Expanded pattern(const std::string& name) {
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    const PatternAst* ast = program_.find(name);
    if (!ast) throw ExpandError(ExpandError::Kind::UnknownPatternRef, "unknown pattern '" + name + "'");
    if (!in_progress_.insert(name).second)
      throw ExpandError(ExpandError::Kind::CyclicPatternRef, "cyclic reference through '" + name + "'");

    Expanded out;
    out.options = ast->options;
    std::vector<Expr> guards;
    const bool sole_leaf = ast->alternatives.size() == 1 && ast->alternatives[0].size() == 1;
    for (const auto& alt : ast->alternatives) {
      std::vector<std::vector<Leaf>> produced{{}};
      for (const auto& elem : alt) {
        if (!elem.is_ref()) {
          for (auto& p : produced) p.push_back(Leaf{elem, {}});
          continue;
        }
        Expanded target = reference(elem, guards);
        if (target.alternatives.size() > 1) {
          if (!sole_leaf)
            throw ExpandError(ExpandError::Kind::CompositeRefMisuse,
                              "disjunctive pattern '" + elem.ref().name +
                                  "' can only be referenced as the whole body of '" + name + "'");
          produced = std::move(target.alternatives);
          continue;
        }
        for (auto& p : produced)
          for (const auto& leaf : target.alternatives[0]) p.push_back(leaf);
      }
      for (auto& p : produced) out.alternatives.push_back(std::move(p));
    }
    if (ast->guard) guards.push_back(*ast->guard);
    if (!guards.empty()) out.guard = and_all(std::move(guards));

    in_progress_.erase(name);
    done_.emplace(name, out);
    return out;
  }

 private:
  // Expands one reference leaf: refinements, then the leaf's own negation,
  // operators and transformers. The target's guard is appended to `guards`.
  Expanded reference(const ElemPattern& elem, std::vector<Expr>& guards) {
    const NamedRef& ref = elem.ref();
    Expanded target = pattern(ref.name);
    if (!target.options.is_default())
      throw ExpandError(ExpandError::Kind::OptionsOnReferencedPattern,
                        "referenced pattern '" + ref.name + "' declares options");
    for (const auto& r : ref.refinements) refine(target, r, ref.name);

    const bool decorated = elem.negated || !elem.operators.empty() || !elem.transformers.empty();
    const bool composite = target.alternatives.size() > 1 || target.alternatives[0].size() > 1;
    if (decorated && composite)
      throw ExpandError(ExpandError::Kind::CompositeRefMisuse,
                        "operators or negation applied to composite pattern '" + ref.name + "'");
    if (decorated) {
      ElemPattern& leaf = target.alternatives[0][0].elem;
      if (elem.negated && leaf.negated)
        throw ExpandError(ExpandError::Kind::CompositeRefMisuse,
                          "double negation through '" + ref.name + "'");
      leaf.negated = leaf.negated || elem.negated;
      for (const auto& op : elem.operators) {
        if (leaf.find_operator(op.kind))
          throw ExpandError(ExpandError::Kind::DuplicateOperator,
                            std::string("duplicate operator '") + operator_name(op.kind) + "' on '" +
                                ref.name + "'");
        leaf.operators.push_back(op);
      }
      for (const auto& t : elem.transformers) leaf.transformers.push_back(t);
    }
    if (target.guard) guards.push_back(*target.guard);
    target.guard.reset();
    return target;
  }

  void refine(Expanded& target, const Refinement& r, const std::string& ref_name) {
    bool found = false;
    bool was_substituted = false;
    std::optional<Value> constant;
    if (r.kind == Refinement::Kind::InlineGuard) {
      try {
        constant = eval_expr(r.expr, EvalEnv{});
      } catch (const EvalError& e) {
        throw ExpandError(ExpandError::Kind::InlineGuardNotConstant,
                          "inline guard on '" + r.var + "' is not a constant: " + e.what());
      }
    }
    for (auto& alt : target.alternatives) {
      for (auto& leaf : alt) {
        Selector& sel = leaf.elem.selector();
        if (!has_var(sel, r.var)) {
          was_substituted = was_substituted || leaf.substituted.count(r.var) > 0;
          continue;
        }
        found = true;
        switch (r.kind) {
          case Refinement::Kind::InlineGuard:
            for (auto& t : sel.terms)
              if (t.is_variable() && t.name == r.var) t = Term::constant(*constant);
            for_each_outer_expr(leaf.elem, r.var,
                                [&](Expr& e) { substitute_in_expr(e, r.var, *constant); });
            leaf.substituted.insert(r.var);
            break;
          case Refinement::Kind::Alias:
            if (has_var(sel, r.target))
              throw ExpandError(ExpandError::Kind::AliasCollision,
                                "alias " + r.var + " ~> " + r.target + " collides in '" + ref_name + "'");
            for (auto& t : sel.terms)
              if (t.is_variable() && t.name == r.var) t.name = r.target;
            for_each_outer_expr(leaf.elem, r.var,
                                [&](Expr& e) { rename_in_expr(e, r.var, r.target); });
            break;
          case Refinement::Kind::Mark:
            for (auto& t : sel.terms)
              if (t.is_variable() && t.name == r.var) t.kind = r.mark;
            break;
        }
      }
    }
    if (!found) {
      if (was_substituted)
        throw ExpandError(ExpandError::Kind::InlineGuardOnConst,
                          "'" + r.var + "' is already a constant in '" + ref_name + "'");
      throw ExpandError(ExpandError::Kind::UnknownRefinementVar,
                        "'" + ref_name + "' has no variable '" + r.var + "'");
    }
    if (target.guard) {
      if (r.kind == Refinement::Kind::InlineGuard) substitute_in_expr(*target.guard, r.var, *constant);
      if (r.kind == Refinement::Kind::Alias) rename_in_expr(*target.guard, r.var, r.target);
    }
  }

  const Program& program_;
  std::map<std::string, Expanded> done_;
  std::set<std::string> in_progress_;
};

}  // namespace

Program expand(const Program& program) {
  Expander ex(program);
  Program out;
  out.bindings = program.bindings;
  for (const auto& p : program.patterns) {
    Expanded e = ex.pattern(p.name);
    PatternAst ast;
    ast.name = p.name;
    ast.options = p.options;
    ast.guard = e.guard;
    for (auto& alt : e.alternatives) {
      Alternative a;
      for (auto& leaf : alt) a.push_back(std::move(leaf.elem));
      ast.alternatives.push_back(std::move(a));
    }
    out.patterns.push_back(std::move(ast));
  }
  return out;
}

Program expand_active(const Program& program) {
  std::set<std::string> referenced;
  for (const auto& p : program.patterns)
    for (const auto& alt : p.alternatives)
      for (const auto& elem : alt)
        if (elem.is_ref()) referenced.insert(elem.ref().name);
  for (const auto& b : program.bindings) referenced.erase(b.pattern);
  Program out = expand(program);
  std::erase_if(out.patterns, [&](const PatternAst& p) { return referenced.count(p.name) > 0; });
  return out;
}

}  // namespace sprw
