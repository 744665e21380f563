#include "lexer.hpp"

#include <cctype>
#include <charconv>

#include "mvmol/rules/ruleset.hpp"

namespace mvmol::rules::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_number) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto fail = [&](std::size_t at, const std::string& message) {
    throw RuleError(RuleErrorKind::SyntaxError, std::string(line), message, line_number, at + 1);
  };
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < line.size() && ident_char(line[i])) ++i;
      tokens.push_back({TokenKind::Identifier, std::string(line.substr(start, i - start)), 0.0, start + 1});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < line.size() &&
                                                         std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      double value = 0.0;
      auto [end, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
      if (ec != std::errc()) fail(start, "malformed number");
      i = static_cast<std::size_t>(end - line.data());
      if (i < line.size() && ident_char(line[i])) fail(i, "unexpected character after number");
      tokens.push_back({TokenKind::Number, std::string(line.substr(start, i - start)), value, start + 1});
      continue;
    }
    if (c == '"') {
      std::string body;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          body.push_back(line[i + 1]);
          i += 2;
        } else if (line[i] == '"') {
          ++i;
          closed = true;
          break;
        } else {
          body.push_back(line[i++]);
        }
      }
      if (!closed) fail(start, "unterminated string");
      tokens.push_back({TokenKind::String, std::move(body), 0.0, start + 1});
      continue;
    }
    auto two = [&](char next) { return i + 1 < line.size() && line[i + 1] == next; };
    TokenKind kind = TokenKind::End;
    std::size_t width = 1;
    switch (c) {
      case ':': kind = TokenKind::Colon; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case '+': kind = TokenKind::Plus; break;
      case '-': kind = TokenKind::Minus; break;
      case '*': kind = TokenKind::Star; break;
      case '/': kind = TokenKind::Slash; break;
      case '<':
        kind = two('=') ? TokenKind::LessEqual : TokenKind::Less;
        width = two('=') ? 2 : 1;
        break;
      case '>':
        kind = two('=') ? TokenKind::GreaterEqual : TokenKind::Greater;
        width = two('=') ? 2 : 1;
        break;
      case '=':
        if (!two('=')) fail(start, "use '==' for equality");
        kind = TokenKind::EqualEqual;
        width = 2;
        break;
      case '!':
        if (!two('=')) fail(start, "unexpected '!'");
        kind = TokenKind::NotEqual;
        width = 2;
        break;
      default: fail(start, std::string("unexpected character '") + c + "'");
    }
    tokens.push_back({kind, std::string(line.substr(start, width)), 0.0, start + 1});
    i += width;
  }
  tokens.push_back({TokenKind::End, "", 0.0, line.size() + 1});
  return tokens;
}

}  // namespace mvmol::rules::detail
