#include "sprw/match.hpp"

#include <algorithm>
#include <limits>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"
#include "sprw/expr.hpp"

namespace sprw {

bool operator<(const AlphaSignature& a, const AlphaSignature& b) {
  return std::tie(a.type, a.arity, a.constants, a.every, a.debounce) <
         std::tie(b.type, b.arity, b.constants, b.every, b.debounce);
}

bool AlphaSignature::constant_tests_pass(const Message& m) const {
  if (m.type != type || m.attrs.size() != arity) return false;
  for (const auto& [i, v] : constants)
    if (!(m.attrs[i] == v)) return false;
  return true;
}

std::string AlphaSignature::describe() const {
  std::string out = "{:" + type.name;
  std::size_t next = 0;
  for (std::size_t i = 0; i < arity; ++i) {
    out += ", ";
    if (next < constants.size() && constants[next].first == i)
      out += to_source(constants[next++].second);
    else
      out += "_";
  }
  out += "}";
  if (every) out += "[every: " + std::to_string(every) + "]";
  if (debounce) out += "[debounce: " + std::to_string(debounce) + "ms]";
  return out;
}

namespace {

bool selector_binds(const Selector& sel, const std::string& name) {
  for (const auto& t : sel.terms)
    if (t.kind == Term::Kind::Var && t.name == name) return true;
  return false;
}

}  // namespace

PatternSpec compile_pattern(const PatternAst& ast) {
  PatternSpec spec;
  spec.name = ast.name;
  spec.guard = ast.guard;
  spec.seq = ast.options.seq;
  spec.last = ast.options.last;
  if (ast.options.interval) spec.interval = ast.options.interval->millis();
  if (ast.options.debounce) spec.debounce = ast.options.debounce->millis();

  for (const auto& alt : ast.alternatives) {
    AlternativeSpec out;
    for (const auto& elem : alt) {
      if (elem.is_ref())
        throw CompileError(ast.name, "unexpanded reference to '" + elem.ref().name + "'");
      LeafSpec leaf;
      leaf.selector = elem.selector();
      leaf.negated = elem.negated;
      leaf.transformers = elem.transformers;
      leaf.alpha.type = leaf.selector.type;
      leaf.alpha.arity = leaf.selector.arity();
      for (std::size_t i = 0; i < leaf.selector.terms.size(); ++i)
        if (!leaf.selector.terms[i].is_variable()) leaf.alpha.constants.emplace_back(i, leaf.selector.terms[i].value);
      for (const auto& op : elem.operators) {
        switch (op.kind) {
          case ElemOperator::Kind::Window: leaf.window = op.duration.millis(); break;
          case ElemOperator::Kind::Debounce: leaf.alpha.debounce = op.duration.millis(); break;
          case ElemOperator::Kind::Every: leaf.alpha.every = op.n; break;
          case ElemOperator::Kind::Count: leaf.count = op.n; break;
        }
      }
      if (leaf.negated && leaf.count)
        throw CompileError(ast.name, "count on a negated pattern");
      if (leaf.negated && !leaf.transformers.empty())
        throw CompileError(ast.name, "transformers on a negated pattern");
      (leaf.negated ? out.negative : out.positive).push_back(out.leaves.size());
      out.leaves.push_back(std::move(leaf));
    }
    if (out.positive.empty())
      throw CompileError(ast.name, "an alternative has no positive pattern to anchor it");
    for (std::size_t k : out.negative) {
      const Selector& neg = out.leaves[k].selector;
      bool must = std::any_of(neg.terms.begin(), neg.terms.end(),
                              [](const Term& t) { return t.kind == Term::Kind::MustDistinct; });
      int after = -1;
      if (must) {
        after = static_cast<int>(out.positive.size()) - 1;
      } else {
        for (std::size_t p = 0; p < out.positive.size(); ++p)
          for (const auto& t : neg.terms)
            if (t.kind == Term::Kind::Var && selector_binds(out.leaves[out.positive[p]].selector, t.name))
              after = static_cast<int>(p);
      }
      out.negation_check_after.push_back(after);
      if (out.leaves[k].window) spec.negation_windows.push_back(*out.leaves[k].window);
    }
    spec.alternatives.push_back(std::move(out));
  }
  std::sort(spec.negation_windows.begin(), spec.negation_windows.end());
  spec.negation_windows.erase(std::unique(spec.negation_windows.begin(), spec.negation_windows.end()),
                              spec.negation_windows.end());
  return spec;
}

std::optional<Bindings> unify_selector(const Selector& sel, const Message& msg, const Bindings& env) {
  if (msg.type != sel.type || msg.attrs.size() != sel.terms.size()) return std::nullopt;
  Bindings out = env;
  for (std::size_t i = 0; i < sel.terms.size(); ++i) {
    const Term& t = sel.terms[i];
    const Value& v = msg.attrs[i];
    switch (t.kind) {
      case Term::Kind::Const:
        if (!(t.value == v)) return std::nullopt;
        break;
      case Term::Kind::Var:
        if (!out.bind(t.name, v)) return std::nullopt;
        break;
      case Term::Kind::MustDistinct:
        if (!out.add_distinct(t.name, v)) return std::nullopt;
        break;
      case Term::Kind::MayDistinct: break;
    }
  }
  return out;
}

bool expired(const LeafSpec& leaf, TimeMs ts, TimeMs now, std::optional<TimeMs> lifetime) {
  if (leaf.window && now - ts >= *leaf.window) return true;
  if (lifetime && now - ts > *lifetime) return true;
  return false;
}

std::optional<TimeMs> expiry_due(const LeafSpec& leaf, TimeMs ts, std::optional<TimeMs> lifetime) {
  std::optional<TimeMs> due;
  if (leaf.window) due = ts + *leaf.window;
  if (lifetime) due = due ? std::min(*due, ts + *lifetime + 1) : ts + *lifetime + 1;
  return due;
}

namespace {

class Search {
 public:
  Search(const PatternSpec& spec, std::size_t alternative, LeafBuffers buffers, TimeMs now)
      : spec_(spec), alt_(spec.alternatives[alternative]), buffers_(buffers) {
    comb_.alternative = alternative;
    comb_.groups.resize(alt_.positive.size());
    for (std::size_t k : alt_.negative)
      if (const auto& w = alt_.leaves[k].window) ready_limit_ = std::min(ready_limit_, now - *w);
  }

  std::optional<Combination> run() {
    Bindings env;
    if (!negations_clear(-1, env)) return std::nullopt;
    if (!leaf(0, env)) return std::nullopt;
    for (auto& g : comb_.groups)
      std::sort(g.begin(), g.end(), [](const Candidate* a, const Candidate* b) {
        return order_key(*a->msg) < order_key(*b->msg);
      });
    return std::move(comb_);
  }

 private:
  struct Span {
    TimeMs min_ts, max_ts;
    bool any;
  };

  const std::vector<const Candidate*>& cands(std::size_t pos) const { return buffers_[alt_.positive[pos]]; }

  // Candidate at the i-th position of the policy order.
  const Candidate* at(std::size_t pos, std::size_t i) const {
    const auto& c = cands(pos);
    return spec_.last ? c[c.size() - 1 - i] : c[i];
  }

  bool admissible(const Candidate* c) const {
    const Message& m = *c->msg;
    if (m.ts > ready_limit_) return false;
    if (std::find(used_.begin(), used_.end(), m.id) != used_.end()) return false;
    if (spec_.seq && has_prev_ && !(prev_max_ < order_key(m))) return false;
    if (spec_.interval && span_.any) {
      TimeMs lo = std::min(span_.min_ts, m.ts), hi = std::max(span_.max_ts, m.ts);
      if (hi - lo > *spec_.interval) return false;
    }
    return true;
  }

  // Buffers are sorted by (ts, seq): once an ordering constraint fails in the
  // direction of travel, every later candidate fails it too.
  bool exhausted(const Candidate* c) const {
    const Message& m = *c->msg;
    if (spec_.last) {
      if (spec_.seq && has_prev_ && !(prev_max_ < order_key(m))) return true;
      if (spec_.interval && span_.any && span_.max_ts - m.ts > *spec_.interval) return true;
    } else {
      if (m.ts > ready_limit_) return true;
      if (spec_.interval && span_.any && m.ts - span_.min_ts > *spec_.interval) return true;
    }
    return false;
  }

  void push(std::size_t pos, const Candidate* c) {
    comb_.groups[pos].push_back(c);
    used_.push_back(c->msg->id);
    if (!span_.any) span_ = {c->msg->ts, c->msg->ts, true};
    span_.min_ts = std::min(span_.min_ts, c->msg->ts);
    span_.max_ts = std::max(span_.max_ts, c->msg->ts);
  }

  bool negations_clear(int after, const Bindings& env) const {
    for (std::size_t j = 0; j < alt_.negative.size(); ++j) {
      if (alt_.negation_check_after[j] != after) continue;
      for (const Candidate* b : buffers_[alt_.negative[j]])
        if (env.compatible(b->local)) return false;
    }
    return true;
  }

  // Called once the group at `pos` is complete.
  bool finish_group(std::size_t pos, const Bindings& env) {
    if (!negations_clear(static_cast<int>(pos), env)) return false;
    if (pos + 1 == alt_.positive.size()) {
      comb_.env = env;
      return true;
    }
    auto saved_prev = prev_max_;
    bool saved_has = has_prev_;
    OrderKey hi = order_key(*comb_.groups[pos].front()->msg);
    for (const Candidate* c : comb_.groups[pos]) hi = std::max(hi, order_key(*c->msg));
    prev_max_ = hi;
    has_prev_ = true;
    if (leaf(pos + 1, env)) return true;
    prev_max_ = saved_prev;
    has_prev_ = saved_has;
    return false;
  }

  bool leaf(std::size_t pos, const Bindings& env) {
    const LeafSpec& spec = alt_.leaves[alt_.positive[pos]];
    if (spec.count && choose(pos, 0, static_cast<std::size_t>(*spec.count), env)) return true;
    if (spec.window && (!spec.count || !spec.transformers.empty() || spec_.guard)) return greedy(pos, env);
    if (!spec.accumulates()) return choose(pos, 0, 1, env);
    return false;
  }

  // Picks `remaining` more members with strictly increasing policy positions.
  bool choose(std::size_t pos, std::size_t from, std::size_t remaining, const Bindings& env) {
    if (remaining == 0) return finish_group(pos, env);
    const std::size_t n = cands(pos).size();
    for (std::size_t i = from; i + remaining <= n; ++i) {
      const Candidate* c = at(pos, i);
      if (exhausted(c)) break;
      if (!admissible(c) || !env.compatible(c->local)) continue;
      Bindings next = env;
      next.merge(c->local);
      Span saved = span_;
      push(pos, c);
      if (choose(pos, i + 1, remaining - 1, next)) return true;
      comb_.groups[pos].pop_back();
      used_.pop_back();
      span_ = saved;
    }
    return false;
  }

  // Takes every consistent candidate in policy order.
  bool greedy(std::size_t pos, const Bindings& env) {
    Bindings next = env;
    Span saved = span_;
    const std::size_t n = cands(pos).size();
    for (std::size_t i = 0; i < n; ++i) {
      const Candidate* c = at(pos, i);
      if (exhausted(c)) break;
      if (!admissible(c) || !next.compatible(c->local)) continue;
      next.merge(c->local);
      push(pos, c);
    }
    if (!comb_.groups[pos].empty() && finish_group(pos, next)) return true;
    used_.resize(used_.size() - comb_.groups[pos].size());
    comb_.groups[pos].clear();
    span_ = saved;
    return false;
  }

  const PatternSpec& spec_;
  const AlternativeSpec& alt_;
  LeafBuffers buffers_;
  TimeMs ready_limit_ = std::numeric_limits<TimeMs>::max();
  Combination comb_;
  std::vector<MsgId> used_;
  Span span_{0, 0, false};
  OrderKey prev_max_{0, 0};
  bool has_prev_ = false;
};

}  // namespace

std::optional<Combination> select_combination(const PatternSpec& spec, std::size_t alternative,
                                              LeafBuffers buffers, TimeMs now) {
  return Search(spec, alternative, buffers, now).run();
}

std::optional<Value> apply_chain(std::span<const MessagePtr> msgs, const std::vector<Transformer>& chain,
                                 const Bindings& env, Intermediates& out) {
  std::optional<Value> current;
  for (const auto& t : chain) {
    if (const auto* b = std::get_if<Bind>(&t)) {
      if (!current) throw EvalError(EvalError::Kind::UnboundVariable, "bind(" + b->name + ") before any fold");
      out.set(b->name, *current);
      continue;
    }
    const Fold& f = std::get<Fold>(t);
    EvalEnv outer{{}, &out, &env};
    Value acc = eval_expr(f.init, outer);
    for (const auto& m : msgs) {
      if (f.fn.params.size() != m->attrs.size() + 1)
        throw EvalError(EvalError::Kind::ArityMismatch,
                        "fold expects " + std::to_string(f.fn.params.size()) + "-tuples, got " +
                            std::to_string(m->attrs.size() + 1));
      Value tag(m->type);
      EvalEnv local{{}, &out, &env};
      if (f.fn.params[0]) local.locals.emplace_back(*f.fn.params[0], &tag);
      for (std::size_t i = 0; i < m->attrs.size(); ++i)
        if (f.fn.params[i + 1]) local.locals.emplace_back(*f.fn.params[i + 1], &m->attrs[i]);
      local.locals.emplace_back(f.fn.acc, &acc);
      acc = eval_expr(f.fn.body, local);
    }
    current = std::move(acc);
  }
  return current;
}

Intermediates apply_transformers(const AlternativeSpec& alt, const Combination& c) {
  Intermediates out;
  for (std::size_t p = 0; p < alt.positive.size(); ++p) {
    const LeafSpec& leaf = alt.leaves[alt.positive[p]];
    if (leaf.transformers.empty()) continue;
    std::vector<MessagePtr> msgs;
    for (const Candidate* cand : c.groups[p]) msgs.push_back(cand->msg);
    apply_chain(msgs, leaf.transformers, c.env, out);
  }
  return out;
}

Evaluation evaluate_pattern(const PatternSpec& spec, std::size_t pattern_index, const BufferSource& buffers,
                            TimeMs now) {
  Evaluation ev;
  for (std::size_t a = 0; a < spec.alternatives.size(); ++a) {
    auto comb = select_combination(spec, a, buffers(a), now);
    if (!comb) continue;
    Intermediates inter;
    try {
      inter = apply_transformers(spec.alternatives[a], *comb);
      if (spec.guard) {
        EvalEnv env{{}, &inter, &comb->env};
        if (!eval_guard(*spec.guard, env)) {
          ev.outcome = Outcome::Rejected;
          continue;
        }
      }
    } catch (const EvalError& e) {
      ev.outcome = Outcome::Rejected;
      ev.diagnostics.push_back({now, spec.name, e.what()});
      continue;
    }
    MatchResult r;
    r.pattern = spec.name;
    r.pattern_index = pattern_index;
    r.at = now;
    for (const auto& g : comb->groups)
      for (const Candidate* c : g) r.messages.push_back(c->msg);
    r.bindings = std::move(comb->env);
    r.intermediates = std::move(inter);
    ev.outcome = Outcome::Matched;
    ev.match = std::move(r);
    return ev;
  }
  return ev;
}

}  // namespace sprw
