#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "sprw/ast.hpp"

namespace sprw {

/// Per-production firing counts, filled in by the parser when requested.
struct GrammarCoverage {
  std::map<std::string, std::size_t> counts;

  void hit(const char* production) { ++counts[production]; }
  /// Every production name the parser can report.
  static const std::vector<std::string>& productions();
};

/// Parses a pattern file. Named references are kept as-is; call expand().
/// Throws SyntaxError or ProgramError.
Program parse_program(std::string_view text, GrammarCoverage* coverage = nullptr);

/// Parses a single `{n, :unit}` duration literal.
Duration parse_duration(std::string_view text);

/// Parses a standalone guard expression.
Expr parse_expr(std::string_view text);

/// Inlines every named reference. Unhygienic: variables of the referenced
/// body merge into the referencing scope unless renamed with `~>`.
/// Throws ExpandError.
Program expand(const Program& program);

/// expand(), then drops building-block patterns: those referenced by another
/// pattern and not bound by any `react_to`. This is the set an actor runs.
Program expand_active(const Program& program);

std::string pretty_print(const PatternAst& ast);
std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& e);
std::string pretty_print(const ElemPattern& elem);
std::string pretty_print(const Selector& sel);
std::string pretty_print(const Duration& d);

}  // namespace sprw
