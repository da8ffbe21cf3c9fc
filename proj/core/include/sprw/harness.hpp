#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprw/actor.hpp"
#include "sprw/errors.hpp"
#include "sprw/oracle.hpp"

namespace sprw {

/// Malformed trace line, or a timestamp behind an earlier one. 1-based line.
class TraceError : public Error {
 public:
  TraceError(std::size_t line, std::string message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// JSON encoding of attribute values: symbols as ":name", strings as-is
/// (a leading ':' or '\' is escaped with '\'), numbers and booleans native.
nlohmann::ordered_json encode_value(const Value& v);
Value decode_value(const nlohmann::json& j);

/// Parses JSON lines of {"ts", "type", "attrs"} messages and {"advance"}
/// directives. Message ids and sequence numbers are 1-based in file order.
std::vector<TraceEvent> parse_trace(std::string_view text);
std::string render_trace(const std::vector<TraceEvent>& trace);

/// Lifetime flag value: a duration literal such as `{1, :hours}`, or an
/// integer number of milliseconds.
TimeMs parse_lifetime(std::string_view text);

struct OutputRecord {
  TimeMs at = 0;
  std::string pattern;
  std::optional<std::string> reaction;
  std::vector<MsgId> message_ids;
  std::vector<std::pair<std::string, Value>> bindings;       // sorted by name
  std::vector<std::pair<std::string, Value>> intermediates;  // bind order

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

OutputRecord make_record(const MatchResult& m, std::optional<std::string> reaction);
std::string render_record(const OutputRecord& r);
std::string render_records(const std::vector<OutputRecord>& records);

struct ReplayOutput {
  std::vector<OutputRecord> records;
  std::vector<Diagnostic> diagnostics;
};

/// Replays through one actor with Emit reactions from the program.
/// `program` is as parsed; expansion happens inside.
ReplayOutput replay_engine(const Program& program, const std::vector<TraceEvent>& trace,
                           std::optional<TimeMs> lifetime = std::nullopt,
                           std::function<void(const EvaluationEvent&)> observer = {});

/// Same records, computed by the reference matcher.
ReplayOutput replay_oracle(const Program& program, const std::vector<TraceEvent>& trace,
                           std::optional<TimeMs> lifetime = std::nullopt);

struct Divergence {
  std::size_t index = 0;
  std::optional<std::string> engine;
  std::optional<std::string> oracle;
};

std::optional<Divergence> first_divergence(const std::vector<OutputRecord>& engine,
                                           const std::vector<OutputRecord>& oracle);

/// Variables occurring in more than one leaf of an expanded pattern, with
/// the 0-based leaf positions (across alternatives) where they occur.
std::vector<std::pair<std::string, std::vector<std::size_t>>> shared_variables(const PatternAst& ast);

/// Human-readable report used by `sprw check`: expanded patterns, shared
/// variables, alpha nodes and which patterns share them.
std::string check_report(const Program& program);

struct RandomCase {
  std::uint64_t seed = 0;
  std::string program_text;
  std::vector<TraceEvent> trace;
  std::optional<TimeMs> lifetime;
};

/// Deterministic random program and trace over the full operator grid.
RandomCase random_case(std::uint64_t seed, std::size_t max_events = 1000);

}  // namespace sprw
