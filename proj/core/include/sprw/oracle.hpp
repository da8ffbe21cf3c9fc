#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "sprw/ast.hpp"
#include "sprw/match.hpp"

namespace sprw {

/// Clock directive: move virtual time forward without a message.
struct Advance {
  TimeMs to = 0;
  friend bool operator==(const Advance&, const Advance&) = default;
};

using TraceEvent = std::variant<Message, Advance>;

struct OracleOutput {
  std::vector<MatchResult> results;
  std::vector<Diagnostic> diagnostics;
};

/// Non-incremental reference matcher. At every message and every derived
/// timer point it rebuilds each pattern's candidate sets from the complete
/// message history and re-runs selection. `program` must be expanded.
/// Throws CompileError or TimeRegression.
OracleOutput oracle_run(const Program& program, const std::vector<TraceEvent>& trace,
                        std::optional<TimeMs> lifetime = std::nullopt);

}  // namespace sprw
