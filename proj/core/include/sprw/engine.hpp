#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sprw/ast.hpp"
#include "sprw/match.hpp"

namespace sprw {

/// Reported to an observer after every pattern evaluation. Buffer contents
/// are captured as the ids held by each leaf buffer, before and after.
struct EvaluationEvent {
  std::uint64_t cycle = 0;  // 1-based match-cycle counter
  std::size_t pattern = 0;
  TimeMs at = 0;
  Outcome outcome = Outcome::NoCombination;
  std::vector<std::vector<MsgId>> before;
  std::vector<std::vector<MsgId>> after;
};

struct AlphaNodeInfo {
  AlphaSignature signature;
  // (pattern index, alternative, leaf index)
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> downstream;
};

/// Compiled discrimination network. Single writer: callers serialize every
/// mutating call.
class Network {
 public:
  /// `program` must be expanded. Throws CompileError.
  explicit Network(const Program& program, std::optional<TimeMs> lifetime = std::nullopt);

  /// Runs timers due up to msg.ts, then one match-cycle for msg. Results are
  /// in activation order. Throws TimeRegression.
  std::vector<MatchResult> insert(Message msg);

  /// Runs every timer due up to `now` and moves the clock. Throws TimeRegression.
  std::vector<MatchResult> advance_time(TimeMs now);

  /// Drops expired candidates at `now` (optionally with a different lifetime)
  /// and releases unreferenced messages. Returns the number released.
  std::size_t gc(TimeMs now, std::optional<TimeMs> lifetime);

  /// Releases messages no buffer references any more.
  std::size_t collect();

  TimeMs clock() const { return clock_; }
  bool started() const { return started_; }
  std::size_t retained() const { return store_.size(); }
  std::size_t buffered() const;

  const std::vector<PatternSpec>& patterns() const { return specs_; }
  std::vector<AlphaNodeInfo> alpha_nodes() const;

  std::vector<Diagnostic> take_diagnostics();

  void set_observer(std::function<void(const EvaluationEvent&)> observer) { observer_ = std::move(observer); }

 private:
  struct AlphaNode {
    AlphaSignature signature;
    std::int64_t seen = 0;
    std::optional<TimeMs> last_passed;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> downstream;
  };

  struct PatternNode {
    // [alternative][leaf]
    std::vector<std::vector<std::deque<Candidate>>> buffers;
    bool dirty = false;
    std::optional<TimeMs> last_match;
  };

  void route(const MessagePtr& msg);
  void fire_timers(TimeMs upto, std::vector<MatchResult>& out);
  void cycle(TimeMs now, std::vector<MatchResult>& out);
  bool prune(std::size_t p, TimeMs now, std::optional<TimeMs> lifetime);
  void consume(std::size_t p, const MatchResult& r);
  std::vector<std::vector<MsgId>> snapshot(std::size_t p) const;
  void schedule(TimeMs due, std::size_t p);

  std::vector<PatternSpec> specs_;
  std::vector<PatternNode> nodes_;
  std::vector<AlphaNode> alphas_;
  std::unordered_map<std::string, std::vector<std::size_t>> root_;
  std::set<std::pair<TimeMs, std::size_t>> timers_;
  std::unordered_map<MsgId, MessagePtr> store_;
  std::optional<TimeMs> lifetime_;
  TimeMs clock_ = 0;
  bool started_ = false;
  std::uint64_t cycles_ = 0;
  std::vector<Diagnostic> diagnostics_;
  std::function<void(const EvaluationEvent&)> observer_;
};

}  // namespace sprw
