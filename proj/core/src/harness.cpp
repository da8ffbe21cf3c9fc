#include "sprw/harness.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <random>
#include <sstream>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"

namespace sprw {

using ordered_json = nlohmann::ordered_json;

TraceError::TraceError(std::size_t line, std::string message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

nlohmann::ordered_json encode_value(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Symbol: return ":" + v.as_symbol().name;
    case Value::Kind::Int: return v.as_int();
    case Value::Kind::Float: return v.as_float();
    case Value::Kind::Bool: return v.as_bool();
    case Value::Kind::Str: {
      const std::string& s = v.as_str();
      if (!s.empty() && (s[0] == ':' || s[0] == '\\')) return "\\" + s;
      return s;
    }
  }
  return nullptr;
}

Value decode_value(const nlohmann::json& j) {
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number_float()) return Value(j.get<double>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (!s.empty() && s[0] == ':') return Value::sym(s.substr(1));
    if (!s.empty() && s[0] == '\\') return Value(s.substr(1));
    return Value(s);
  }
  throw std::invalid_argument("unsupported attribute value " + j.dump());
}

namespace {

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    std::string_view l = text.substr(pos, end - pos);
    if (l.find_first_not_of(" \t\r") != std::string_view::npos) fn(line, l);
    pos = end + 1;
  }
}

TimeMs integer_field(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer())
    throw TraceError(line, std::string("'") + key + "' must be an integer");
  return it->get<TimeMs>();
}

}  // namespace

std::vector<TraceEvent> parse_trace(std::string_view text) {
  std::vector<TraceEvent> out;
  std::optional<TimeMs> last;
  MsgId next_id = 1;
  for_each_line(text, [&](std::size_t line, std::string_view l) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(l);
    } catch (const nlohmann::json::parse_error& e) {
      throw TraceError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw TraceError(line, "expected a JSON object");
    TimeMs ts;
    if (j.contains("advance")) {
      ts = integer_field(j, "advance", line);
      out.emplace_back(Advance{ts});
    } else {
      Message m;
      ts = m.ts = integer_field(j, "ts", line);
      auto type = j.find("type");
      if (type == j.end() || !type->is_string() || type->get_ref<const std::string&>().empty())
        throw TraceError(line, "'type' must be a non-empty string");
      std::string name = type->get<std::string>();
      m.type = Symbol{name[0] == ':' ? name.substr(1) : name};
      if (auto attrs = j.find("attrs"); attrs != j.end()) {
        if (!attrs->is_array()) throw TraceError(line, "'attrs' must be an array");
        for (const auto& a : *attrs) {
          try {
            m.attrs.push_back(decode_value(a));
          } catch (const std::invalid_argument& e) {
            throw TraceError(line, e.what());
          }
        }
      }
      m.id = m.seq = next_id++;
      out.emplace_back(std::move(m));
    }
    if (last && ts < *last) throw TraceError(line, "timestamp regression at line " + std::to_string(line));
    last = ts;
  });
  return out;
}

std::string render_trace(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& ev : trace) {
    ordered_json j;
    if (const auto* m = std::get_if<Message>(&ev)) {
      j["ts"] = m->ts;
      j["type"] = ":" + m->type.name;
      j["attrs"] = ordered_json::array();
      for (const auto& a : m->attrs) j["attrs"].push_back(encode_value(a));
    } else {
      j["advance"] = std::get<Advance>(ev).to;
    }
    out += j.dump() + "\n";
  }
  return out;
}

TimeMs parse_lifetime(std::string_view text) {
  std::size_t b = text.find_first_not_of(" \t");
  if (b != std::string_view::npos && text[b] == '{') return parse_duration(text).millis();
  TimeMs ms = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ms);
  if (ec != std::errc() || ptr != text.data() + text.size() || ms < 0)
    throw std::invalid_argument("lifetime must be a duration like {1, :hours} or milliseconds");
  return ms;
}

OutputRecord make_record(const MatchResult& m, std::optional<std::string> reaction) {
  OutputRecord r;
  r.at = m.at;
  r.pattern = m.pattern;
  r.reaction = std::move(reaction);
  for (const auto& msg : m.messages) r.message_ids.push_back(msg->id);
  r.bindings = m.bindings.values();
  r.intermediates = m.intermediates.entries();
  return r;
}

std::string render_record(const OutputRecord& r) {
  ordered_json j;
  j["at"] = r.at;
  j["pattern"] = r.pattern;
  j["reaction"] = r.reaction ? ordered_json(*r.reaction) : ordered_json(nullptr);
  j["messageIds"] = r.message_ids;
  j["bindings"] = ordered_json::object();
  for (const auto& [k, v] : r.bindings) j["bindings"][k] = encode_value(v);
  j["intermediates"] = ordered_json::object();
  for (const auto& [k, v] : r.intermediates) j["intermediates"][k] = encode_value(v);
  return j.dump();
}

std::string render_records(const std::vector<OutputRecord>& records) {
  std::string out;
  for (const auto& r : records) out += render_record(r) + "\n";
  return out;
}

ReplayOutput replay_engine(const Program& program, const std::vector<TraceEvent>& trace,
                           std::optional<TimeMs> lifetime, std::function<void(const EvaluationEvent&)> observer) {
  Actor actor(program, State::object(), lifetime);
  if (observer) actor.network().set_observer(std::move(observer));
  ReplayOutput out;
  for (const auto& ev : trace) {
    std::vector<FiredReaction> fired;
    if (const auto* m = std::get_if<Message>(&ev)) {
      actor.deliver(Envelope{m->type, m->attrs, m->ts});
      fired = actor.step(m->ts);
    } else {
      fired = actor.step(std::get<Advance>(ev).to);
    }
    for (const auto& f : fired) out.records.push_back(make_record(f.match, f.label));
  }
  out.diagnostics = actor.take_diagnostics();
  return out;
}

ReplayOutput replay_oracle(const Program& program, const std::vector<TraceEvent>& trace,
                           std::optional<TimeMs> lifetime) {
  Program expanded = expand_active(program);
  OracleOutput run = oracle_run(expanded, trace, lifetime);
  ReplayOutput out;
  for (const auto& m : run.results) {
    bool any = false;
    for (const auto& b : expanded.bindings) {
      if (b.pattern != m.pattern) continue;
      out.records.push_back(make_record(m, b.label));
      any = true;
    }
    if (!any) out.records.push_back(make_record(m, std::nullopt));
  }
  out.diagnostics = std::move(run.diagnostics);
  return out;
}

std::optional<Divergence> first_divergence(const std::vector<OutputRecord>& engine,
                                           const std::vector<OutputRecord>& oracle) {
  const std::size_t n = std::max(engine.size(), oracle.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::string> e, o;
    if (i < engine.size()) e = render_record(engine[i]);
    if (i < oracle.size()) o = render_record(oracle[i]);
    if (e != o) return Divergence{i, e, o};
  }
  return std::nullopt;
}

namespace {

// Every constraining variable with the leaf positions it occurs in.
std::vector<std::pair<std::string, std::vector<std::size_t>>> leaf_variables(const PatternAst& ast) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  std::size_t pos = 0;
  for (const auto& alt : ast.alternatives) {
    for (const auto& elem : alt) {
      if (!elem.is_ref()) {
        for (const auto& t : elem.selector().terms) {
          if (t.kind != Term::Kind::Var && t.kind != Term::Kind::MustDistinct) continue;
          auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == t.name; });
          if (it == out.end()) it = out.insert(out.end(), {t.name, {}});
          if (it->second.empty() || it->second.back() != pos) it->second.push_back(pos);
        }
      }
      ++pos;
    }
  }
  return out;
}

std::string join_positions(const std::vector<std::size_t>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + std::to_string(ps[i] + 1);
  return s;
}

}  // namespace

std::vector<std::pair<std::string, std::vector<std::size_t>>> shared_variables(const PatternAst& ast) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // leaf positions of each alternative
  std::size_t pos = 0;
  for (const auto& alt : ast.alternatives) {
    ranges.emplace_back(pos, pos + alt.size());
    pos += alt.size();
  }
  auto all = leaf_variables(ast);
  all.erase(std::remove_if(all.begin(), all.end(),
                           [&](const auto& e) {
                             for (const auto& [lo, hi] : ranges) {
                               auto n = std::count_if(e.second.begin(), e.second.end(),
                                                      [&](std::size_t p) { return p >= lo && p < hi; });
                               if (n >= 2) return false;
                             }
                             return true;
                           }),
            all.end());
  return all;
}

std::string check_report(const Program& program) {
  Program expanded = expand(program);
  Network net(expand_active(program));
  std::ostringstream out;
  for (const auto& p : expanded.patterns) {
    out << pretty_print(p) << "\n";
    out << "  variables:";
    auto vars = leaf_variables(p);
    if (vars.empty()) out << " none";
    for (const auto& [name, ps] : vars) out << " " << name << "[" << join_positions(ps) << "]";
    out << "\n  shared:";
    auto shared = shared_variables(p);
    if (shared.empty()) out << " none";
    for (const auto& [name, ps] : shared) out << " " << name;
    out << "\n";
  }
  for (const auto& b : expanded.bindings) out << "react_to " << b.pattern << ", with: emit(" << b.label << ")\n";
  out << "alpha nodes: " << net.alpha_nodes().size() << "\n";
  for (const auto& a : net.alpha_nodes()) {
    std::vector<std::size_t> patterns;
    out << "  " << a.signature.describe() << " ->";
    for (const auto& [p, alt, leaf] : a.downstream) {
      const auto& spec = net.patterns()[p];
      std::size_t pos = leaf;
      for (std::size_t i = 0; i < alt; ++i) pos += spec.alternatives[i].leaves.size();
      out << " " << spec.name << "[" << pos + 1 << "]";
      if (std::find(patterns.begin(), patterns.end(), p) == patterns.end()) patterns.push_back(p);
    }
    if (patterns.size() > 1) out << " (shared by " << patterns.size() << " patterns)";
    out << "\n";
  }
  return out.str();
}

namespace {

class CaseBuilder {
 public:
  explicit CaseBuilder(std::uint64_t seed) : rng_(seed) {}

  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  template <class T>
  const T& one_of(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  struct Type {
    std::string name;
    int arity;
  };

  const std::vector<Type>& types() const { return types_; }

  std::string term(int position, std::vector<std::string>& vars) {
    auto var = [&](const std::string& n) {
      vars.push_back(n);
      return n;
    };
    switch (position) {
      case 0:
        if (chance(0.15)) return ":d" + std::to_string(pick(1, 3));
        if (chance(0.08)) return "!id";
        if (chance(0.10)) return "@id";
        return var(chance(0.7) ? "id" : "id2");
      case 1:
        if (chance(0.15)) return std::to_string(pick(0, 9));
        if (chance(0.10)) return "!v";
        if (chance(0.15)) return "@v";
        return var(chance(0.6) ? "v" : "w");
      default:
        if (chance(0.4)) return chance(0.5) ? ":on" : ":off";
        return var("s");
    }
  }

  std::string secs() { return "{" + std::to_string(pick(1, 8)) + ", :secs}"; }

  std::string leaf(bool negated, std::vector<std::string>& vars, std::vector<std::string>& binds) {
    const Type& t = one_of(types_);
    std::string out = negated ? "not {:" : "{:";
    out += t.name;
    std::vector<std::string> local;
    for (int i = 0; i < t.arity; ++i) out += ", " + term(i, negated ? local : vars);
    out += "}";
    std::vector<std::string> ops;
    bool accumulates = false;
    if (negated) {
      if (chance(0.75)) ops.push_back("window: " + secs());
    } else {
      double r = std::uniform_real_distribution<double>(0, 1)(rng_);
      if (r < 0.15) {
        ops.push_back("window: " + secs());
        accumulates = true;
      } else if (r < 0.30) {
        ops.push_back("count: " + std::to_string(pick(2, 3)));
        accumulates = true;
      } else if (r < 0.40) {
        ops.push_back("count: " + std::to_string(pick(2, 3)));
        ops.push_back("window: " + secs());
        accumulates = true;
      }
    }
    if (chance(0.08)) ops.push_back("every: " + std::to_string(pick(2, 3)));
    if (chance(0.07)) ops.push_back("debounce: " + std::string("{") + std::to_string(pick(1, 4)) + ", :secs}");
    std::shuffle(ops.begin(), ops.end(), rng_);
    if (!ops.empty()) {
      out += "[";
      for (std::size_t i = 0; i < ops.size(); ++i) out += (i ? ", " : "") + ops[i];
      out += "]";
    }
    if (!negated && (accumulates ? chance(0.45) : chance(0.08))) {
      std::string params = "{_, _, x";
      for (int i = 2; i < t.arity; ++i) params += ", _";
      params += "}";
      if (chance(0.75)) {
        out += " |> fold(0, fn(" + params + ", acc) -> acc + x end) |> bind(total)";
        binds.push_back("total");
      } else {
        out += " |> fold(0, fn(" + params + ", acc) -> acc + 1 end) |> bind(n)";
        binds.push_back("n");
      }
    }
    return out;
  }

  std::string guard(const std::vector<std::string>& vars, const std::vector<std::string>& binds) {
    std::vector<std::string> options;
    for (const auto& b : binds) options.push_back(b + " > " + std::to_string(pick(2, 15)));
    auto has = [&](const char* n) { return std::find(vars.begin(), vars.end(), n) != vars.end(); };
    if (has("v")) {
      options.push_back("v > " + std::to_string(pick(1, 7)));
      options.push_back("v * 2 <= " + std::to_string(pick(4, 16)) + " or v == 9");
      options.push_back("not (v == " + std::to_string(pick(0, 9)) + ")");
    }
    if (has("v") && has("w")) options.push_back("v != w");
    if (has("id")) options.push_back("id == :d1 or id == :d2");
    if (has("s")) options.push_back("s == :on");
    if (options.empty()) return {};
    return one_of(options);
  }

  std::string pattern(const std::string& name) {
    std::vector<std::string> vars, binds;
    std::string out = "pattern " + name + " as ";
    int alts = chance(0.2) ? 2 : 1;
    for (int a = 0; a < alts; ++a) {
      if (a) out += " or ";
      int leaves = pick(1, 3);
      for (int l = 0; l < leaves; ++l) {
        if (l) out += " and ";
        out += leaf(l > 0 && chance(0.2), vars, binds);
      }
    }
    if (chance(0.4)) {
      std::string g = guard(vars, binds);
      if (!g.empty()) out += " when " + g;
    }
    std::vector<std::string> opts;
    if (chance(0.2)) opts.push_back("seq: true");
    if (chance(0.2)) opts.push_back("interval: {" + std::to_string(pick(1, 10)) + ", :secs}");
    if (chance(0.3)) opts.push_back("last: true");
    if (chance(0.1)) opts.push_back("debounce: {" + std::to_string(pick(1, 5)) + ", :secs}");
    if (!opts.empty()) {
      out += ", options: [";
      for (std::size_t i = 0; i < opts.size(); ++i) out += (i ? ", " : "") + opts[i];
      out += "]";
    }
    return out + "\n";
  }

  Value attr(int position) {
    switch (position) {
      case 0: return Value::sym("d" + std::to_string(pick(1, 3)));
      case 1: return Value(std::int64_t{pick(0, 9)});
      default: return Value::sym(chance(0.5) ? "on" : "off");
    }
  }

  std::vector<TraceEvent> trace(std::size_t max_events) {
    double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    int cap = static_cast<int>(max_events);
    int n = r < 0.5 ? pick(0, std::min(cap, 100)) : r < 0.85 ? pick(0, std::min(cap, 400)) : pick(0, cap);
    std::vector<TraceEvent> out;
    TimeMs ts = 0;
    MsgId id = 1;
    for (int i = 0; i < n; ++i) {
      if (!chance(0.15)) ts += pick(1, 3000);
      if (chance(0.03)) {
        ts += pick(0, 10000);
        out.emplace_back(Advance{ts});
        continue;
      }
      const Type& t = one_of(types_);
      Message m;
      m.id = m.seq = id++;
      m.ts = ts;
      m.type = Symbol{t.name};
      for (int k = 0; k < t.arity; ++k) m.attrs.push_back(attr(k));
      out.emplace_back(std::move(m));
    }
    if (chance(0.5)) out.emplace_back(Advance{ts + pick(0, 20000)});
    return out;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<Type> types_{{"a", 2}, {"b", 2}, {"c", 3}};
};

}  // namespace

RandomCase random_case(std::uint64_t seed, std::size_t max_events) {
  CaseBuilder b(seed);
  RandomCase c;
  c.seed = seed;
  int patterns = b.pick(1, 4);
  for (int p = 0; p < patterns; ++p) c.program_text += b.pattern("p" + std::to_string(p));
  for (int p = 0; p < patterns; ++p) {
    if (b.chance(0.25)) continue;
    c.program_text += "react_to p" + std::to_string(p) + ", with: emit(r" + std::to_string(p) + ")\n";
    if (b.chance(0.2))
      c.program_text += "react_to p" + std::to_string(p) + ", with: emit(r" + std::to_string(p) + "_extra)\n";
  }
  if (b.chance(0.6)) c.lifetime = TimeMs{1000} * b.pick(5, 60);
  c.trace = b.trace(max_events);
  return c;
}

}  // namespace sprw
