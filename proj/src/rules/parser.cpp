#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "mvmol/chem/smiles.hpp"
#include "mvmol/chem/substructure.hpp"
#include "mvmol/rules/ruleset.hpp"

namespace mvmol::rules {

std::string_view to_string(RuleKind kind) {
  return kind == RuleKind::Predicate ? "predicate" : "numeric";
}

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::Scientific ? "scientific" : "data_pattern";
}

std::string_view to_string(RuleErrorKind kind) {
  switch (kind) {
    case RuleErrorKind::SyntaxError: return "SyntaxError";
    case RuleErrorKind::UnknownDescriptor: return "UnknownDescriptor";
    case RuleErrorKind::DuplicateRuleId: return "DuplicateRuleId";
    case RuleErrorKind::BadPattern: return "BadPattern";
    case RuleErrorKind::MissingExternal: return "MissingExternal";
    case RuleErrorKind::NonFiniteResult: return "NonFiniteResult";
    case RuleErrorKind::StatsMismatch: return "StatsMismatch";
    case RuleErrorKind::EmptyRuleSet: return "EmptyRuleSet";
    case RuleErrorKind::SubsetTooLarge: return "SubsetTooLarge";
  }
  return "RuleError";
}

namespace {

std::string format_error(RuleErrorKind kind, const std::string& message, std::size_t line,
                         std::size_t column) {
  std::string out(to_string(kind));
  if (line > 0) {
    out += " at line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
  }
  return out + ": " + message;
}

}  // namespace

RuleError::RuleError(RuleErrorKind kind, std::string subject, const std::string& message,
                     std::size_t line, std::size_t column)
    : std::runtime_error(format_error(kind, message, line, column)),
      kind_(kind),
      subject_(std::move(subject)),
      line_(line),
      column_(column) {}

bool operator==(const RuleSet& a, const RuleSet& b) {
  if (a.task_id != b.task_id || a.rules.size() != b.rules.size() ||
      a.externals.size() != b.externals.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.externals.size(); ++i) {
    if (a.externals[i].id != b.externals[i].id || a.externals[i].unit != b.externals[i].unit) return false;
  }
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const Rule& x = a.rules[i];
    const Rule& y = b.rules[i];
    if (x.id != y.id || x.kind != y.kind || x.provenance != y.provenance ||
        !equal(*x.expression, *y.expression)) {
      return false;
    }
  }
  return true;
}

namespace {

using detail::Token;
using detail::TokenKind;

// Strips a trailing '#' comment that is not inside a string literal.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool is_keyword(const Token& t, std::string_view word) {
  return t.kind == TokenKind::Identifier && t.text == word;
}

bool is_reserved(std::string_view word) {
  static const std::set<std::string_view> kReserved{
      "rule", "numeric", "external", "unit", "and", "or", "not", "substructure", "count",
      "task", "provenance"};
  return kReserved.count(word) > 0;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line, const std::set<std::string>& externals)
      : tokens_(std::move(tokens)), line_(line), externals_(externals) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool at_end() const { return peek().kind == TokenKind::End; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw RuleError(RuleErrorKind::SyntaxError, at.text, message, line_, at.column);
  }

  const Token& expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return advance();
  }

  std::string expect_identifier(const char* what) {
    const Token& t = expect(TokenKind::Identifier, what);
    if (is_reserved(t.text)) fail(t, "'" + t.text + "' is a reserved word");
    return t.text;
  }

  ExprPtr parse_expression() { return parse_or(); }

  void require_type(const ExprPtr& e, ValueType type, const Token& at, const char* context) const {
    if (e->type() != type) {
      fail(at, std::string(context) + " needs a " +
                   (type == ValueType::Boolean ? "boolean" : "numeric") + " operand");
    }
  }

 private:
  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (is_keyword(peek(), "or")) {
      const Token op = advance();
      ExprPtr rhs = parse_and();
      require_type(lhs, ValueType::Boolean, op, "'or'");
      require_type(rhs, ValueType::Boolean, op, "'or'");
      lhs = make_binary(ExprKind::Or, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (is_keyword(peek(), "and")) {
      const Token op = advance();
      ExprPtr rhs = parse_not();
      require_type(lhs, ValueType::Boolean, op, "'and'");
      require_type(rhs, ValueType::Boolean, op, "'and'");
      lhs = make_binary(ExprKind::And, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (is_keyword(peek(), "not")) {
      const Token op = advance();
      ExprPtr operand = parse_not();
      require_type(operand, ValueType::Boolean, op, "'not'");
      return make_unary(ExprKind::Not, operand);
    }
    return parse_comparison();
  }

  static std::optional<ExprKind> comparison_kind(TokenKind k) {
    switch (k) {
      case TokenKind::Less: return ExprKind::Less;
      case TokenKind::LessEqual: return ExprKind::LessEqual;
      case TokenKind::Greater: return ExprKind::Greater;
      case TokenKind::GreaterEqual: return ExprKind::GreaterEqual;
      case TokenKind::EqualEqual: return ExprKind::Equal;
      case TokenKind::NotEqual: return ExprKind::NotEqual;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_sum();
    if (auto kind = comparison_kind(peek().kind)) {
      const Token op = advance();
      ExprPtr rhs = parse_sum();
      require_type(lhs, ValueType::Numeric, op, "comparison");
      require_type(rhs, ValueType::Numeric, op, "comparison");
      if (comparison_kind(peek().kind)) fail(peek(), "comparisons do not chain; use 'and'");
      return make_binary(*kind, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const Token op = advance();
      ExprPtr rhs = parse_product();
      require_type(lhs, ValueType::Numeric, op, "arithmetic");
      require_type(rhs, ValueType::Numeric, op, "arithmetic");
      lhs = make_binary(op.kind == TokenKind::Plus ? ExprKind::Add : ExprKind::Subtract, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
      const Token op = advance();
      ExprPtr rhs = parse_unary();
      require_type(lhs, ValueType::Numeric, op, "arithmetic");
      require_type(rhs, ValueType::Numeric, op, "arithmetic");
      lhs = make_binary(op.kind == TokenKind::Star ? ExprKind::Multiply : ExprKind::Divide, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek().kind == TokenKind::Minus) {
      const Token op = advance();
      ExprPtr operand = parse_unary();
      require_type(operand, ValueType::Numeric, op, "unary '-'");
      // Fold "-3" into a literal so printed negative numbers read back identically.
      if (operand->kind == ExprKind::Number) return make_number(-operand->number);
      return make_unary(ExprKind::Negate, operand);
    }
    return parse_primary();
  }

  ExprPtr parse_pattern_call(ExprKind kind) {
    expect(TokenKind::LParen, "'('");
    const Token text = expect(TokenKind::String, "a quoted SMILES pattern");
    expect(TokenKind::RParen, "')'");
    std::shared_ptr<const chem::Molecule> pattern;
    try {
      pattern = std::make_shared<const chem::Molecule>(chem::parse_smiles(text.text));
    } catch (const chem::SmilesError& e) {
      throw RuleError(RuleErrorKind::BadPattern, text.text, e.what(), line_, text.column);
    }
    std::size_t heavy = 0;
    for (const auto& a : pattern->atoms()) heavy += a.is_hydrogen() ? 0 : 1;
    if (heavy > chem::kMaxPatternHeavyAtoms) {
      throw RuleError(RuleErrorKind::BadPattern, text.text, "pattern exceeds 32 heavy atoms", line_,
                      text.column);
    }
    return make_substructure(kind, text.text, std::move(pattern));
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: advance(); return make_number(t.number);
      case TokenKind::LParen: {
        advance();
        ExprPtr inner = parse_expression();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::Identifier: {
        if (t.text == "substructure") {
          advance();
          return parse_pattern_call(ExprKind::Substructure);
        }
        if (t.text == "count") {
          advance();
          return parse_pattern_call(ExprKind::SubstructureCount);
        }
        if (is_reserved(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        const Token name = advance();
        if (auto id = chem::find_descriptor(name.text)) return make_descriptor(*id);
        if (externals_.count(name.text)) return make_external(name.text);
        throw RuleError(RuleErrorKind::UnknownDescriptor, name.text,
                        "unknown descriptor '" + name.text + "'", line_, name.column);
      }
      case TokenKind::End: fail(t, "unexpected end of rule");
      default: fail(t, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  const std::set<std::string>& externals_;
};

std::vector<std::string_view> split_lines(std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

RuleSet parse_rules(std::string_view source) {
  const auto lines = split_lines(source);

  // Pass 1: external declarations, so rules may reference them in any order.
  RuleSet ruleset;
  std::set<std::string> externals;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto tokens = detail::tokenize_line(strip_comment(lines[n]), n + 1);
    if (!is_keyword(tokens[0], "external")) continue;
    LineParser p(std::move(tokens), n + 1, externals);
    p.advance();
    const std::string id = p.expect_identifier("an external descriptor name");
    if (chem::find_descriptor(id)) p.fail(p.peek(), "'" + id + "' shadows a shipped descriptor");
    std::string unit;
    if (is_keyword(p.peek(), "unit")) {
      p.advance();
      unit = p.expect(TokenKind::String, "a quoted unit").text;
    }
    if (!p.at_end()) p.fail(p.peek(), "unexpected trailing input");
    if (!externals.insert(id).second) {
      throw RuleError(RuleErrorKind::DuplicateRuleId, id, "external '" + id + "' declared twice", n + 1);
    }
    ruleset.externals.push_back({id, unit});
  }

  Provenance provenance = Provenance::Scientific;
  std::set<std::string> ids;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto tokens = detail::tokenize_line(strip_comment(lines[n]), n + 1);
    if (tokens[0].kind == TokenKind::End || is_keyword(tokens[0], "external")) continue;
    LineParser p(std::move(tokens), n + 1, externals);
    const Token head = p.advance();
    if (is_keyword(head, "task")) {
      ruleset.task_id = p.expect_identifier("a task id");
      if (!p.at_end()) p.fail(p.peek(), "unexpected trailing input");
      continue;
    }
    if (is_keyword(head, "provenance")) {
      const std::string value = p.expect(TokenKind::Identifier, "scientific or data_pattern").text;
      if (value == "scientific") {
        provenance = Provenance::Scientific;
      } else if (value == "data_pattern") {
        provenance = Provenance::DataPattern;
      } else {
        p.fail(head, "provenance must be scientific or data_pattern");
      }
      if (!p.at_end()) p.fail(p.peek(), "unexpected trailing input");
      continue;
    }
    if (!is_keyword(head, "rule")) p.fail(head, "expected 'rule', 'external', 'task' or 'provenance'");

    Rule rule;
    rule.provenance = provenance;
    const Token id_token = p.peek();
    rule.id = p.expect_identifier("a rule id");
    p.expect(TokenKind::Colon, "':'");
    const Token body_start = p.peek();
    if (is_keyword(body_start, "numeric")) {
      p.advance();
      rule.kind = RuleKind::Numeric;
    }
    rule.expression = p.parse_expression();
    if (!p.at_end()) p.fail(p.peek(), "unexpected trailing input");
    if (rule.kind == RuleKind::Numeric) {
      p.require_type(rule.expression, ValueType::Numeric, body_start, "a numeric rule");
    } else {
      p.require_type(rule.expression, ValueType::Boolean, body_start,
                     "a predicate rule (prefix 'numeric' for values)");
    }
    if (!ids.insert(rule.id).second) {
      throw RuleError(RuleErrorKind::DuplicateRuleId, rule.id, "rule id '" + rule.id + "' used twice",
                      n + 1, id_token.column);
    }
    ruleset.rules.push_back(std::move(rule));
  }
  return ruleset;
}

std::string serialize_rules(const RuleSet& ruleset) {
  std::ostringstream out;
  if (!ruleset.task_id.empty()) out << "task " << ruleset.task_id << "\n";
  for (const auto& ext : ruleset.externals) {
    out << "external " << ext.id << " unit \"";
    for (char c : ext.unit) {
      if (c == '"' || c == '\\') out << '\\';
      out << c;
    }
    out << "\"\n";
  }
  Provenance current = Provenance::Scientific;
  for (const auto& rule : ruleset.rules) {
    if (rule.provenance != current) {
      out << "provenance " << to_string(rule.provenance) << "\n";
      current = rule.provenance;
    }
    out << "rule " << rule.id << ": " << (rule.kind == RuleKind::Numeric ? "numeric " : "")
        << to_source(*rule.expression) << "\n";
  }
  return out.str();
}

nlohmann::ordered_json ruleset_to_json(const RuleSet& ruleset) {
  nlohmann::ordered_json externals = nlohmann::ordered_json::array();
  for (const auto& ext : ruleset.externals) {
    externals.push_back({{"id", ext.id}, {"unit", ext.unit}});
  }
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ruleset.rules.size(); ++i) {
    const Rule& r = ruleset.rules[i];
    nlohmann::ordered_json entry;
    entry["index"] = i;
    entry["id"] = r.id;
    entry["kind"] = std::string(to_string(r.kind));
    entry["provenance"] = std::string(to_string(r.provenance));
    entry["source"] = to_source(*r.expression);
    entry["expression"] = to_json(*r.expression);
    rules.push_back(std::move(entry));
  }
  nlohmann::ordered_json out;
  out["task_id"] = ruleset.task_id;
  out["externals"] = std::move(externals);
  out["rules"] = std::move(rules);
  return out;
}

}  // namespace mvmol::rules
