#include "sprw/actor.hpp"

#include <algorithm>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"

namespace sprw {

Actor::Actor(const Program& program, State initial, std::optional<TimeMs> lifetime)
    : program_(expand_active(program)), network_(program_, lifetime), state_(std::move(initial)) {
  for (const auto& p : program_.patterns) bindings_.push_back(Binding{p.name, {}});
  for (const auto& b : program_.bindings) react_to(b.pattern, ReactionRef::emit(b.label));
}

Actor::Binding& Actor::binding(const std::string& pattern) {
  for (auto& b : bindings_)
    if (b.pattern == pattern) return b;
  throw ReactionError(ReactionError::Kind::UnknownPattern, "unknown pattern '" + pattern + "'");
}

const Actor::Binding& Actor::binding(const std::string& pattern) const {
  return const_cast<Actor*>(this)->binding(pattern);
}

void Actor::react_to(const std::string& pattern, ReactionRef reaction) {
  binding(pattern);
  auto apply = [this, pattern, reaction = std::move(reaction)]() mutable {
    Binding& target = binding(pattern);
    for (const auto& r : target.reactions)
      if (r.label == reaction.label)
        throw ReactionError(ReactionError::Kind::DuplicateReaction,
                            "reaction '" + reaction.label + "' already bound to '" + pattern + "'");
    target.reactions.push_back(std::move(reaction));
  };
  if (reacting_) deferred_.push_back(std::move(apply));
  else apply();
}

void Actor::remove(const std::string& label, const std::string& pattern) {
  const Binding& b = binding(pattern);
  if (std::none_of(b.reactions.begin(), b.reactions.end(), [&](const ReactionRef& r) { return r.label == label; }))
    throw ReactionError(ReactionError::Kind::UnknownReaction,
                        "reaction '" + label + "' is not bound to '" + pattern + "'");
  auto apply = [this, label, pattern] {
    auto& rs = binding(pattern).reactions;
    rs.erase(std::remove_if(rs.begin(), rs.end(), [&](const ReactionRef& r) { return r.label == label; }), rs.end());
  };
  if (reacting_) deferred_.push_back(std::move(apply));
  else apply();
}

void Actor::remove_reactions(const std::string& pattern) {
  binding(pattern);
  auto apply = [this, pattern] { binding(pattern).reactions.clear(); };
  if (reacting_) deferred_.push_back(std::move(apply));
  else apply();
}

std::vector<std::string> Actor::reactions(const std::string& pattern) const {
  std::vector<std::string> out;
  for (const auto& r : binding(pattern).reactions) out.push_back(r.label);
  return out;
}

void Actor::deliver(Envelope msg) {
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back(std::move(msg));
}

std::vector<FiredReaction> Actor::step(TimeMs now) {
  if (network_.started() && now < network_.clock()) throw TimeRegression(now, network_.clock());
  std::deque<Envelope> batch;
  {
    std::lock_guard lock(inbox_mutex_);
    batch.swap(inbox_);
  }
  std::vector<MatchResult> matches;
  for (auto& env : batch) {
    Message m;
    m.id = m.seq = next_id_++;
    m.ts = std::max(env.ts.value_or(network_.clock()), network_.clock());
    m.type = std::move(env.type);
    m.attrs = std::move(env.attrs);
    for (auto& r : network_.insert(std::move(m))) matches.push_back(std::move(r));
  }
  for (auto& r : network_.advance_time(std::max(now, network_.clock()))) matches.push_back(std::move(r));
  for (auto& d : network_.take_diagnostics()) diagnostics_.push_back(std::move(d));

  std::vector<FiredReaction> fired;
  reacting_ = true;
  bool aborted = false;
  for (auto& match : matches) {
    if (aborted) break;
    const auto& reactions = binding(match.pattern).reactions;
    if (reactions.empty()) {
      fired.push_back(FiredReaction{std::nullopt, match, state_, state_});
      continue;
    }
    for (const auto& r : reactions) {
      if (std::holds_alternative<Emit>(r.kind)) {
        fired.push_back(FiredReaction{r.label, match, state_, state_});
        continue;
      }
      try {
        State next = std::get<HostCallback>(r.kind)(match, state_);
        fired.push_back(FiredReaction{r.label, match, state_, next});
        state_ = std::move(next);
      } catch (const std::exception& e) {
        diagnostics_.push_back(Diagnostic{match.at, match.pattern, "reaction '" + r.label + "' failed: " + e.what()});
        aborted = true;
        break;
      }
    }
  }
  reacting_ = false;
  auto pending = std::exchange(deferred_, {});
  for (auto& fn : pending) fn();
  network_.collect();
  return fired;
}

std::vector<Diagnostic> Actor::take_diagnostics() { return std::exchange(diagnostics_, {}); }

std::size_t ActorSystem::spawn(const Program& program, State initial, std::optional<TimeMs> lifetime) {
  actors_.push_back(std::make_unique<Actor>(program, std::move(initial), lifetime));
  return actors_.size() - 1;
}

std::vector<std::pair<std::size_t, FiredReaction>> ActorSystem::step_all(TimeMs now) {
  std::vector<std::pair<std::size_t, FiredReaction>> out;
  for (std::size_t i = 0; i < actors_.size(); ++i)
    for (auto& f : actors_[i]->step(now)) out.emplace_back(i, std::move(f));
  return out;
}

}  // namespace sprw
