#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprw/ast.hpp"
#include "sprw/engine.hpp"

namespace sprw {

using State = nlohmann::json;

/// Reaction body for library use: receives the match (messages and
/// intermediates) and the current state, returns the next state.
using HostCallback = std::function<State(const MatchResult&, const State&)>;

struct Emit {};

struct ReactionRef {
  std::string label;
  std::variant<Emit, HostCallback> kind;

  static ReactionRef emit(std::string label) { return {std::move(label), Emit{}}; }
  static ReactionRef callback(std::string label, HostCallback fn) { return {std::move(label), std::move(fn)}; }
};

/// One reaction invocation, or a match with no reaction bound (label unset).
struct FiredReaction {
  std::optional<std::string> label;
  MatchResult match;
  State before;
  State after;
};

/// A raw message before ingestion. Without a timestamp it is stamped with
/// the actor clock when drained.
struct Envelope {
  Symbol type;
  std::vector<Value> attrs;
  std::optional<TimeMs> ts;
};

/// An actor hosting one network. deliver() may be called from any thread;
/// everything else belongs to the owning thread.
class Actor {
 public:
  /// `program` is expanded here and building-block patterns are dropped
  /// (see expand_active). Patterns bound with `react_to` in the
  /// program get Emit reactions in declaration order. Unconsumed messages
  /// older than `lifetime` milliseconds are dropped.
  Actor(const Program& program, State initial = State::object(), std::optional<TimeMs> lifetime = std::nullopt);

  void react_to(const std::string& pattern, ReactionRef reaction);
  void remove(const std::string& label, const std::string& pattern);
  void remove_reactions(const std::string& pattern);

  void deliver(Envelope msg);

  /// Drains the inbox, one match-cycle per message, then advances the clock
  /// to `now` (or the last drained timestamp if later) and runs reactions.
  /// Throws TimeRegression when `now` is behind the clock.
  std::vector<FiredReaction> step(TimeMs now);

  const State& state() const { return state_; }
  TimeMs clock() const { return network_.clock(); }
  const Network& network() const { return network_; }
  Network& network() { return network_; }
  std::vector<std::string> reactions(const std::string& pattern) const;

  /// Engine diagnostics and failed reactions since the last call.
  std::vector<Diagnostic> take_diagnostics();

 private:
  struct Binding {
    std::string pattern;
    std::vector<ReactionRef> reactions;
  };

  Binding& binding(const std::string& pattern);
  const Binding& binding(const std::string& pattern) const;

  Program program_;
  Network network_;
  std::vector<Binding> bindings_;  // declaration order
  State state_;
  std::mutex inbox_mutex_;
  std::deque<Envelope> inbox_;
  std::uint64_t next_id_ = 1;
  bool reacting_ = false;
  std::vector<std::function<void()>> deferred_;
  std::vector<Diagnostic> diagnostics_;
};

/// A set of actors addressed by index. Messages between any two actors keep
/// their send order.
class ActorSystem {
 public:
  std::size_t spawn(const Program& program, State initial = State::object(),
                    std::optional<TimeMs> lifetime = std::nullopt);
  Actor& actor(std::size_t id) { return *actors_.at(id); }
  void send(std::size_t to, Envelope msg) { actors_.at(to)->deliver(std::move(msg)); }

  /// Steps every actor in spawn order; returns (actor id, reaction) pairs.
  std::vector<std::pair<std::size_t, FiredReaction>> step_all(TimeMs now);

 private:
  std::vector<std::unique_ptr<Actor>> actors_;
};

}  // namespace sprw
