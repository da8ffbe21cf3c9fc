#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sprw/ast.hpp"
#include "sprw/bindings.hpp"

namespace sprw {

using MessagePtr = std::shared_ptr<const Message>;

/// Identity of an alpha node: everything decided by looking at one message
/// in isolation. Two leaves with equal signatures share one node.
struct AlphaSignature {
  Symbol type;
  std::size_t arity = 0;
  std::vector<std::pair<std::size_t, Value>> constants;  // (attribute index, value)
  std::int64_t every = 0;                                // 0 = none
  TimeMs debounce = 0;                                   // 0 = none

  bool constant_tests_pass(const Message& m) const;
  std::string describe() const;

  friend bool operator==(const AlphaSignature&, const AlphaSignature&) = default;
  friend bool operator<(const AlphaSignature& a, const AlphaSignature& b);
};

/// One elementary pattern of a compiled alternative.
struct LeafSpec {
  Selector selector;
  AlphaSignature alpha;
  bool negated = false;
  std::optional<std::int64_t> count;
  std::optional<TimeMs> window;
  std::vector<Transformer> transformers;

  bool accumulates() const { return count || window; }
};

struct AlternativeSpec {
  std::vector<LeafSpec> leaves;
  std::vector<std::size_t> positive;  // leaf indices, textual order
  std::vector<std::size_t> negative;
  // For each entry of `negative`, the position in `positive` after which its
  // blockers can be checked (-1: before any positive leaf is chosen).
  std::vector<int> negation_check_after;
};

/// A pattern lowered to the form the matcher works on. Shared by the
/// incremental engine and the reference matcher.
struct PatternSpec {
  std::string name;
  std::vector<AlternativeSpec> alternatives;
  std::optional<Expr> guard;
  bool seq = false;
  bool last = false;
  std::optional<TimeMs> interval;
  std::optional<TimeMs> debounce;
  // Distinct windows of negated leaves, ascending.
  std::vector<TimeMs> negation_windows;
};

/// Lowers an expanded pattern. Throws CompileError.
PatternSpec compile_pattern(const PatternAst& ast);

/// A buffered message together with its bindings against one selector.
struct Candidate {
  MessagePtr msg;
  Bindings local;
};

/// Extends `env` with `msg` against `sel`; nullopt when they do not unify.
std::optional<Bindings> unify_selector(const Selector& sel, const Message& msg, const Bindings& env);

/// Whether a message with timestamp `ts` can no longer take part in `leaf`.
bool expired(const LeafSpec& leaf, TimeMs ts, TimeMs now, std::optional<TimeMs> lifetime);

/// First instant at which expired() turns true, if ever.
std::optional<TimeMs> expiry_due(const LeafSpec& leaf, TimeMs ts, std::optional<TimeMs> lifetime);

/// Per leaf of an alternative: live candidates sorted by (ts, seq) ascending.
using LeafBuffers = std::span<const std::vector<const Candidate*>>;

struct Combination {
  std::size_t alternative = 0;
  // Indexed like AlternativeSpec::positive; members in ascending order.
  std::vector<std::vector<const Candidate*>> groups;
  Bindings env;
};

/// The policy-selected combination of one alternative, or nullopt.
std::optional<Combination> select_combination(const PatternSpec& spec, std::size_t alternative,
                                              LeafBuffers buffers, TimeMs now);

/// Left-folds every leaf's transformer chain over its group, in leaf order.
/// Throws EvalError.
Intermediates apply_transformers(const AlternativeSpec& alt, const Combination& c);

/// Folds one transformer chain over `msgs`; returns the last fold value (or
/// nullopt when the chain is empty) and records binds into `out`.
std::optional<Value> apply_chain(std::span<const MessagePtr> msgs, const std::vector<Transformer>& chain,
                                 const Bindings& env, Intermediates& out);

struct MatchResult {
  std::string pattern;
  std::size_t pattern_index = 0;
  std::vector<MessagePtr> messages;  // constituent order
  Bindings bindings;
  Intermediates intermediates;
  TimeMs at = 0;
};

struct Diagnostic {
  TimeMs at = 0;
  std::string pattern;
  std::string message;
};

enum class Outcome { NoCombination, Rejected, Matched };

struct Evaluation {
  Outcome outcome = Outcome::NoCombination;
  std::optional<MatchResult> match;
  std::vector<Diagnostic> diagnostics;
};

/// Supplies the live buffers of one alternative.
using BufferSource = std::function<LeafBuffers(std::size_t alternative)>;

/// Tries alternatives left to right: selection, transformers, guard. The
/// first alternative that passes wins. A rejected or failing alternative
/// falls through to the next one; nothing is consumed here.
Evaluation evaluate_pattern(const PatternSpec& spec, std::size_t pattern_index, const BufferSource& buffers,
                            TimeMs now);

}  // namespace sprw
