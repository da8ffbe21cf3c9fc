#include "sprw/errors.hpp"

namespace sprw {

namespace {

std::string syntax_message(int line, int column, const std::vector<std::string>& expected,
                           const std::string& found) {
  std::string msg = "syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
                    ": found " + found;
  if (!expected.empty()) {
    msg += ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
  }
  return msg;
}

const char* program_kind(ProgramError::Kind k) {
  return k == ProgramError::Kind::DuplicatePattern ? "duplicate pattern" : "unknown pattern";
}

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected, std::string found)
    : Error(syntax_message(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

ProgramError::ProgramError(Kind kind, std::string name)
    : Error(std::string(program_kind(kind)) + " '" + name + "'"), kind_(kind), name_(std::move(name)) {}

ExpandError::ExpandError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}

CompileError::CompileError(std::string pattern, std::string message)
    : Error("pattern '" + pattern + "': " + message), pattern_(std::move(pattern)) {}

TimeRegression::TimeRegression(TimeMs ts, TimeMs clock)
    : Error("time regression: " + std::to_string(ts) + " < clock " + std::to_string(clock)),
      ts_(ts),
      clock_(clock) {}

EvalError::EvalError(Kind kind, std::string message)
    : Error(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

ReactionError::ReactionError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}

const char* kind_name(EvalError::Kind k) {
  switch (k) {
    case EvalError::Kind::UnboundVariable: return "UnboundVariable";
    case EvalError::Kind::TypeMismatch: return "TypeMismatch";
    case EvalError::Kind::DivisionByZero: return "DivisionByZero";
    case EvalError::Kind::ArityMismatch: return "ArityMismatch";
    case EvalError::Kind::Overflow: return "Overflow";
  }
  return "?";
}

}  // namespace sprw
