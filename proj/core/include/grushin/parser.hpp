/// @file parser.hpp
/// Surface syntax for field expressions.
///
/// Grammar (whitespace-insensitive):
///   expr    := term  { ('+' | '-') term }
///   term    := factor { ('*' | '/') factor }
///   factor  := '-' factor | power
///   power   := atom [ '^' factor ]          -- right-associative
///   atom    := number | 'i' | 'rho' | 'absx' | 'x<N>' | 'y<N>'
///            | 'exp' '(' expr ')' | 'log' '(' expr ')' | 'bump' '(' expr ')'
///            | 'pow' '(' expr ',' factor ')' | 'rho_eps' '(' factor ')'
///            | '(' expr ')'
///
/// Exponents (the right side of '^', the second argument of pow, and the
/// argument of rho_eps) must fold to real constants; coordinates are
/// 1-based in the surface syntax.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grushin/field.hpp"

namespace grushin {

struct ParseDiagnostics {
    std::size_t offset = 0;
    std::vector<std::string> expected;
    std::string message;
};

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(ParseDiagnostics diag)
        : std::runtime_error(diag.message + " at offset " + std::to_string(diag.offset)),
          diag_(std::move(diag)) {}
    const ParseDiagnostics& diagnostics() const { return diag_; }

  private:
    ParseDiagnostics diag_;
};

FieldExpr parse(std::string_view text);

/// Canonical printer; parse(format(e)) reproduces e structurally.
inline std::string format(const FieldExpr& e) { return to_text(e); }

}  // namespace grushin
