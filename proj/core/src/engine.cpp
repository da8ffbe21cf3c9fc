#include "sprw/engine.hpp"

#include <algorithm>

#include "sprw/errors.hpp"

namespace sprw {

Network::Network(const Program& program, std::optional<TimeMs> lifetime) : lifetime_(lifetime) {
  std::map<AlphaSignature, std::size_t> index;
  for (const auto& ast : program.patterns) {
    const std::size_t p = specs_.size();
    specs_.push_back(compile_pattern(ast));
    PatternNode node;
    for (std::size_t a = 0; a < specs_[p].alternatives.size(); ++a) {
      const auto& alt = specs_[p].alternatives[a];
      node.buffers.emplace_back(alt.leaves.size());
      for (std::size_t l = 0; l < alt.leaves.size(); ++l) {
        const AlphaSignature& sig = alt.leaves[l].alpha;
        auto [it, fresh] = index.try_emplace(sig, alphas_.size());
        if (fresh) {
          alphas_.push_back(AlphaNode{sig, 0, std::nullopt, {}});
          root_[sig.type.name].push_back(it->second);
        }
        alphas_[it->second].downstream.emplace_back(p, a, l);
      }
    }
    nodes_.push_back(std::move(node));
  }
}

std::vector<MatchResult> Network::insert(Message msg) {
  if (started_ && msg.ts < clock_) throw TimeRegression(msg.ts, clock_);
  std::vector<MatchResult> out;
  fire_timers(msg.ts, out);
  clock_ = msg.ts;
  started_ = true;
  auto ptr = std::make_shared<const Message>(std::move(msg));
  route(ptr);
  cycle(ptr->ts, out);
  return out;
}

std::vector<MatchResult> Network::advance_time(TimeMs now) {
  if (started_ && now < clock_) throw TimeRegression(now, clock_);
  std::vector<MatchResult> out;
  fire_timers(now, out);
  clock_ = now;
  started_ = true;
  return out;
}

void Network::schedule(TimeMs due, std::size_t p) { timers_.emplace(due, p); }

void Network::route(const MessagePtr& msg) {
  auto it = root_.find(msg->type.name);
  if (it == root_.end()) return;
  bool referenced = false;
  for (std::size_t idx : it->second) {
    AlphaNode& alpha = alphas_[idx];
    if (!alpha.signature.constant_tests_pass(*msg)) continue;
    if (alpha.signature.every && ++alpha.seen % alpha.signature.every != 0) continue;
    if (alpha.signature.debounce) {
      if (alpha.last_passed && msg->ts - *alpha.last_passed <= alpha.signature.debounce) continue;
      alpha.last_passed = msg->ts;
    }
    for (const auto& [p, a, l] : alpha.downstream) {
      const PatternSpec& spec = specs_[p];
      const LeafSpec& leaf = spec.alternatives[a].leaves[l];
      auto local = unify_selector(leaf.selector, *msg, Bindings{});
      if (!local) continue;
      nodes_[p].buffers[a][l].push_back(Candidate{msg, std::move(*local)});
      nodes_[p].dirty = true;
      referenced = true;
      if (auto due = expiry_due(leaf, msg->ts, lifetime_)) schedule(*due, p);
      if (!leaf.negated)
        for (TimeMs w : spec.negation_windows) schedule(msg->ts + w, p);
    }
  }
  if (referenced) store_.emplace(msg->id, msg);
}

void Network::fire_timers(TimeMs upto, std::vector<MatchResult>& out) {
  while (!timers_.empty() && timers_.begin()->first <= upto) {
    const TimeMs due = timers_.begin()->first;
    while (!timers_.empty() && timers_.begin()->first == due) {
      std::size_t p = timers_.begin()->second;
      timers_.erase(timers_.begin());
      prune(p, due, lifetime_);
      nodes_[p].dirty = true;
    }
    clock_ = due;
    cycle(due, out);
  }
}

bool Network::prune(std::size_t p, TimeMs now, std::optional<TimeMs> lifetime) {
  bool changed = false;
  const PatternSpec& spec = specs_[p];
  for (std::size_t a = 0; a < spec.alternatives.size(); ++a) {
    for (std::size_t l = 0; l < spec.alternatives[a].leaves.size(); ++l) {
      auto& buf = nodes_[p].buffers[a][l];
      const LeafSpec& leaf = spec.alternatives[a].leaves[l];
      while (!buf.empty() && expired(leaf, buf.front().msg->ts, now, lifetime)) {
        buf.pop_front();
        changed = true;
      }
    }
  }
  return changed;
}

std::vector<std::vector<MsgId>> Network::snapshot(std::size_t p) const {
  std::vector<std::vector<MsgId>> out;
  for (const auto& alt : nodes_[p].buffers) {
    for (const auto& buf : alt) {
      auto& ids = out.emplace_back();
      for (const auto& c : buf) ids.push_back(c.msg->id);
    }
  }
  return out;
}

void Network::consume(std::size_t p, const MatchResult& r) {
  std::vector<MsgId> ids;
  for (const auto& m : r.messages) ids.push_back(m->id);
  std::sort(ids.begin(), ids.end());
  const PatternSpec& spec = specs_[p];
  for (std::size_t a = 0; a < spec.alternatives.size(); ++a) {
    for (std::size_t l : spec.alternatives[a].positive) {
      auto& buf = nodes_[p].buffers[a][l];
      buf.erase(std::remove_if(buf.begin(), buf.end(),
                               [&](const Candidate& c) {
                                 return std::binary_search(ids.begin(), ids.end(), c.msg->id);
                               }),
                buf.end());
    }
  }
}

void Network::cycle(TimeMs now, std::vector<MatchResult>& out) {
  ++cycles_;
  for (std::size_t p = 0; p < specs_.size(); ++p) {
    PatternNode& node = nodes_[p];
    const PatternSpec& spec = specs_[p];
    if (!node.dirty) continue;
    if (spec.debounce && node.last_match && now - *node.last_match <= *spec.debounce) continue;
    prune(p, now, lifetime_);

    std::vector<std::vector<const Candidate*>> views;
    auto source = [&](std::size_t a) {
      views.assign(node.buffers[a].size(), {});
      for (std::size_t l = 0; l < node.buffers[a].size(); ++l)
        for (const auto& c : node.buffers[a][l]) views[l].push_back(&c);
      return LeafBuffers(views);
    };
    std::vector<std::vector<MsgId>> before;
    if (observer_) before = snapshot(p);
    Evaluation ev = evaluate_pattern(spec, p, source, now);
    for (auto& d : ev.diagnostics) diagnostics_.push_back(std::move(d));
    if (ev.match) {
      consume(p, *ev.match);
      node.last_match = now;
      if (spec.debounce) schedule(now + *spec.debounce + 1, p);
    } else {
      node.dirty = false;
    }
    if (observer_) observer_(EvaluationEvent{cycles_, p, now, ev.outcome, std::move(before), snapshot(p)});
    if (ev.match) out.push_back(std::move(*ev.match));
  }
}

std::size_t Network::gc(TimeMs now, std::optional<TimeMs> lifetime) {
  for (std::size_t p = 0; p < specs_.size(); ++p)
    if (prune(p, now, lifetime ? lifetime : lifetime_)) nodes_[p].dirty = true;
  return collect();
}

std::size_t Network::collect() {
  std::size_t removed = 0;
  for (auto it = store_.begin(); it != store_.end();) {
    if (it->second.use_count() == 1) {
      it = store_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::size_t Network::buffered() const {
  std::size_t n = 0;
  for (const auto& node : nodes_)
    for (const auto& alt : node.buffers)
      for (const auto& buf : alt) n += buf.size();
  return n;
}

std::vector<AlphaNodeInfo> Network::alpha_nodes() const {
  std::vector<AlphaNodeInfo> out;
  for (const auto& a : alphas_) out.push_back(AlphaNodeInfo{a.signature, a.downstream});
  return out;
}

std::vector<Diagnostic> Network::take_diagnostics() { return std::exchange(diagnostics_, {}); }

}  // namespace sprw
