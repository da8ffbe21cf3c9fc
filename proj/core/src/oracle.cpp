#include "sprw/oracle.hpp"

#include <map>
#include <set>

#include "sprw/errors.hpp"

namespace sprw {

namespace {

struct AlphaState {
  std::int64_t seen = 0;
  std::optional<TimeMs> last_passed;
};

class Oracle {
 public:
  Oracle(const Program& program, std::optional<TimeMs> lifetime) : lifetime_(lifetime) {
    for (const auto& ast : program.patterns) specs_.push_back(compile_pattern(ast));
    entered_.resize(specs_.size());
    consumed_.resize(specs_.size());
    last_match_.resize(specs_.size());
    for (std::size_t p = 0; p < specs_.size(); ++p) {
      for (const auto& alt : specs_[p].alternatives) {
        entered_[p].emplace_back(alt.leaves.size());
        for (const auto& leaf : alt.leaves) alpha_.try_emplace(leaf.alpha);
      }
    }
  }

  OracleOutput run(const std::vector<TraceEvent>& trace) {
    for (const auto& ev : trace) {
      if (const auto* m = std::get_if<Message>(&ev)) {
        check_time(m->ts);
        timers_upto(m->ts);
        clock_ = m->ts;
        ingest(std::make_shared<const Message>(*m));
        cycle(m->ts);
      } else {
        TimeMs to = std::get<Advance>(ev).to;
        check_time(to);
        timers_upto(to);
        clock_ = to;
      }
    }
    return std::move(out_);
  }

 private:
  void check_time(TimeMs t) {
    if (started_ && t < clock_) throw TimeRegression(t, clock_);
    started_ = true;
  }

  void timers_upto(TimeMs t) {
    while (!timers_.empty() && *timers_.begin() <= t) {
      TimeMs due = *timers_.begin();
      timers_.erase(timers_.begin());
      clock_ = due;
      cycle(due);
    }
  }

  void ingest(const MessagePtr& msg) {
    std::map<AlphaSignature, bool> passes;
    for (auto& [sig, state] : alpha_) {
      bool ok = sig.constant_tests_pass(*msg);
      if (ok && sig.every) ok = ++state.seen % sig.every == 0;
      if (ok && sig.debounce) {
        ok = !state.last_passed || msg->ts - *state.last_passed > sig.debounce;
        if (ok) state.last_passed = msg->ts;
      }
      passes[sig] = ok;
    }
    for (std::size_t p = 0; p < specs_.size(); ++p) {
      for (std::size_t a = 0; a < specs_[p].alternatives.size(); ++a) {
        const auto& alt = specs_[p].alternatives[a];
        for (std::size_t l = 0; l < alt.leaves.size(); ++l) {
          const LeafSpec& leaf = alt.leaves[l];
          if (!passes[leaf.alpha]) continue;
          auto local = unify_selector(leaf.selector, *msg, Bindings{});
          if (!local) continue;
          entered_[p][a][l].push_back(Candidate{msg, std::move(*local)});
          if (auto due = expiry_due(leaf, msg->ts, lifetime_)) timers_.insert(*due);
          if (!leaf.negated)
            for (TimeMs w : specs_[p].negation_windows) timers_.insert(msg->ts + w);
        }
      }
    }
  }

  void cycle(TimeMs now) {
    for (std::size_t p = 0; p < specs_.size(); ++p) {
      const PatternSpec& spec = specs_[p];
      if (spec.debounce && last_match_[p] && now - *last_match_[p] <= *spec.debounce) continue;
      std::vector<std::vector<const Candidate*>> views;
      auto source = [&](std::size_t a) {
        const auto& alt = spec.alternatives[a];
        views.assign(alt.leaves.size(), {});
        for (std::size_t l = 0; l < alt.leaves.size(); ++l) {
          for (const auto& c : entered_[p][a][l]) {
            if (expired(alt.leaves[l], c.msg->ts, now, lifetime_)) continue;
            if (!alt.leaves[l].negated && consumed_[p].count(c.msg->id)) continue;
            views[l].push_back(&c);
          }
        }
        return LeafBuffers(views);
      };
      Evaluation ev = evaluate_pattern(spec, p, source, now);
      for (auto& d : ev.diagnostics) out_.diagnostics.push_back(std::move(d));
      if (!ev.match) continue;
      for (const auto& m : ev.match->messages) consumed_[p].insert(m->id);
      last_match_[p] = now;
      if (spec.debounce) timers_.insert(now + *spec.debounce + 1);
      out_.results.push_back(std::move(*ev.match));
    }
  }

  std::vector<PatternSpec> specs_;
  std::optional<TimeMs> lifetime_;
  std::map<AlphaSignature, AlphaState> alpha_;
  // [pattern][alternative][leaf], in arrival order.
  std::vector<std::vector<std::vector<std::vector<Candidate>>>> entered_;
  std::vector<std::set<MsgId>> consumed_;
  std::vector<std::optional<TimeMs>> last_match_;
  std::set<TimeMs> timers_;
  TimeMs clock_ = 0;
  bool started_ = false;
  OracleOutput out_;
};

}  // namespace

OracleOutput oracle_run(const Program& program, const std::vector<TraceEvent>& trace,
                        std::optional<TimeMs> lifetime) {
  return Oracle(program, lifetime).run(trace);
}

}  // namespace sprw
