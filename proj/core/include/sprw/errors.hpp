#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sprw/value.hpp"

namespace sprw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the parser. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string found_;
};

class ProgramError : public Error {
 public:
  enum class Kind { DuplicatePattern, UnknownPattern };
  ProgramError(Kind kind, std::string name);
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  Kind kind_;
  std::string name_;
};

class ExpandError : public Error {
 public:
  enum class Kind {
    UnknownPatternRef,
    AliasCollision,
    InlineGuardOnConst,
    InlineGuardNotConstant,
    UnknownRefinementVar,
    CyclicPatternRef,
    CompositeRefMisuse,
    DuplicateOperator,
    OptionsOnReferencedPattern,
  };
  ExpandError(Kind kind, std::string message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class CompileError : public Error {
 public:
  CompileError(std::string pattern, std::string message);
  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
};

class TimeRegression : public Error {
 public:
  TimeRegression(TimeMs ts, TimeMs clock);
  TimeMs ts() const { return ts_; }
  TimeMs clock() const { return clock_; }

 private:
  TimeMs ts_;
  TimeMs clock_;
};

/// Guard, fold, or transformer evaluation failure. Never consumes messages.
class EvalError : public Error {
 public:
  enum class Kind { UnboundVariable, TypeMismatch, DivisionByZero, ArityMismatch, Overflow };
  EvalError(Kind kind, std::string message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* kind_name(EvalError::Kind k);

/// Misuse of an actor's reaction table.
class ReactionError : public Error {
 public:
  enum class Kind { UnknownPattern, UnknownReaction, DuplicateReaction };
  ReactionError(Kind kind, std::string message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sprw
