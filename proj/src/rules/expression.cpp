#include "mvmol/rules/expression.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace mvmol::rules {

namespace {

// Binding strength used by both the parser and the printer.
int precedence(ExprKind kind) {
  switch (kind) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    case ExprKind::Less:
    case ExprKind::LessEqual:
    case ExprKind::Greater:
    case ExprKind::GreaterEqual:
    case ExprKind::Equal:
    case ExprKind::NotEqual: return 4;
    case ExprKind::Add:
    case ExprKind::Subtract: return 5;
    case ExprKind::Multiply:
    case ExprKind::Divide: return 6;
    case ExprKind::Negate: return 7;
    default: return 8;
  }
}

bool is_comparison(ExprKind k) { return precedence(k) == 4; }

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), end);
}

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view op_name(ExprKind kind) {
  switch (kind) {
    case ExprKind::And: return "and";
    case ExprKind::Or: return "or";
    case ExprKind::Not: return "not";
    case ExprKind::Negate: return "neg";
    default: return operator_token(kind);
  }
}

}  // namespace

std::string_view operator_token(ExprKind kind) {
  switch (kind) {
    case ExprKind::Less: return "<";
    case ExprKind::LessEqual: return "<=";
    case ExprKind::Greater: return ">";
    case ExprKind::GreaterEqual: return ">=";
    case ExprKind::Equal: return "==";
    case ExprKind::NotEqual: return "!=";
    case ExprKind::And: return "and";
    case ExprKind::Or: return "or";
    case ExprKind::Not: return "not";
    case ExprKind::Add: return "+";
    case ExprKind::Subtract: return "-";
    case ExprKind::Multiply: return "*";
    case ExprKind::Divide: return "/";
    case ExprKind::Negate: return "-";
    default: return "";
  }
}

ValueType Expr::type() const {
  switch (kind) {
    case ExprKind::Substructure:
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Not: return ValueType::Boolean;
    default: return is_comparison(kind) ? ValueType::Boolean : ValueType::Numeric;
  }
}

ExprPtr make_number(double value) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Number;
  e->number = value;
  return e;
}

ExprPtr make_descriptor(chem::DescriptorId id) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Descriptor;
  e->descriptor = id;
  e->name = std::string(chem::descriptor_name(id));
  return e;
}

ExprPtr make_external(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::External;
  e->name = std::move(name);
  return e;
}

ExprPtr make_substructure(ExprKind kind, std::string pattern_text,
                          std::shared_ptr<const chem::Molecule> pattern) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->name = std::move(pattern_text);
  e->pattern = std::move(pattern);
  return e;
}

ExprPtr make_unary(ExprKind kind, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args.push_back(std::move(operand));
  return e;
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args.push_back(std::move(lhs));
  e->args.push_back(std::move(rhs));
  return e;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case ExprKind::Number:
      if (a.number != b.number) return false;
      break;
    case ExprKind::Descriptor:
    case ExprKind::External:
    case ExprKind::Substructure:
    case ExprKind::SubstructureCount:
      if (a.name != b.name) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

std::string to_source(const Expr& expr) {
  auto wrap = [](const Expr& child, bool paren) {
    std::string s = to_source(child);
    return paren ? "(" + s + ")" : s;
  };
  const int p = precedence(expr.kind);
  switch (expr.kind) {
    case ExprKind::Number: return format_number(expr.number);
    case ExprKind::Descriptor:
    case ExprKind::External: return expr.name;
    case ExprKind::Substructure: return "substructure(" + quote(expr.name) + ")";
    case ExprKind::SubstructureCount: return "count(" + quote(expr.name) + ")";
    case ExprKind::Not: return "not " + wrap(*expr.args[0], precedence(expr.args[0]->kind) < p);
    case ExprKind::Negate: return "-" + wrap(*expr.args[0], precedence(expr.args[0]->kind) < p);
    default: break;
  }
  // Binary operators are left-associative; comparisons do not chain.
  const Expr& lhs = *expr.args[0];
  const Expr& rhs = *expr.args[1];
  const bool comparison = is_comparison(expr.kind);
  const bool lhs_paren = comparison ? precedence(lhs.kind) <= p : precedence(lhs.kind) < p;
  const bool rhs_paren = precedence(rhs.kind) <= p;
  return wrap(lhs, lhs_paren) + " " + std::string(operator_token(expr.kind)) + " " + wrap(rhs, rhs_paren);
}

nlohmann::ordered_json to_json(const Expr& expr) {
  switch (expr.kind) {
    case ExprKind::Number: return {{"number", expr.number}};
    case ExprKind::Descriptor: return {{"descriptor", expr.name}};
    case ExprKind::External: return {{"external", expr.name}};
    case ExprKind::Substructure: return {{"substructure", expr.name}};
    case ExprKind::SubstructureCount: return {{"count", expr.name}};
    default: break;
  }
  nlohmann::ordered_json args = nlohmann::ordered_json::array();
  for (const auto& a : expr.args) args.push_back(to_json(*a));
  return {{"op", std::string(op_name(expr.kind))}, {"args", std::move(args)}};
}

}  // namespace mvmol::rules
