#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mvmol::rules::detail {

enum class TokenKind {
  Identifier,
  Number,
  String,
  Colon,
  LParen,
  RParen,
  Less,
  LessEqual,
  Greater,
  GreaterEqual,
  EqualEqual,
  NotEqual,
  Plus,
  Minus,
  Star,
  Slash,
  End,
};

struct Token {
  TokenKind kind;
  std::string text;  // identifier name, number literal, or unescaped string body
  double number = 0.0;
  std::size_t column;  // 1-based
};

/// Tokenizes one line of rule source (comments already stripped). Throws
/// RuleError(SyntaxError) with the given line number on bad input.
std::vector<Token> tokenize_line(std::string_view line, std::size_t line_number);

}  // namespace mvmol::rules::detail
