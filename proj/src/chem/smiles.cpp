#include "mvmol/chem/smiles.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "mvmol/chem/elements.hpp"
#include "mvmol/chem/rings.hpp"

namespace mvmol::chem {

std::string_view to_string(SmilesErrorKind kind) {
  switch (kind) {
    case SmilesErrorKind::EmptyInput: return "EmptyInput";
    case SmilesErrorKind::UnbalancedBranch: return "UnbalancedBranch";
    case SmilesErrorKind::UnclosedRingBond: return "UnclosedRingBond";
    case SmilesErrorKind::UnknownElement: return "UnknownElement";
    case SmilesErrorKind::MalformedBracketAtom: return "MalformedBracketAtom";
    case SmilesErrorKind::InvalidBond: return "InvalidBond";
    case SmilesErrorKind::UnexpectedCharacter: return "UnexpectedCharacter";
  }
  return "Unknown";
}

SmilesError::SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(offset) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      offset_(offset) {}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Bond symbol as written; '/' and '\' collapse to single.
struct PendingBond {
  BondOrder order;
  std::size_t offset;
};

struct OpenRing {
  int atom;
  std::optional<BondOrder> order;
  std::size_t offset;
};

class SmilesParser {
 public:
  SmilesParser(std::string_view text, std::size_t base) : text_(text), base_(base) {}

  Molecule parse(std::string source) {
    Molecule mol(std::move(source));
    mol_ = &mol;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev_ < 0) fail(SmilesErrorKind::UnbalancedBranch, pos_, "branch without a preceding atom");
        if (pending_) fail(SmilesErrorKind::InvalidBond, pending_->offset, "bond before '('");
        branches_.push_back({prev_, pos_});
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty()) fail(SmilesErrorKind::UnbalancedBranch, pos_, "unmatched ')'");
        if (pending_) fail(SmilesErrorKind::InvalidBond, pending_->offset, "dangling bond");
        prev_ = branches_.back().first;
        branches_.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\' || c == '$') {
        if (pending_) fail(SmilesErrorKind::InvalidBond, pos_, "two consecutive bond symbols");
        if (prev_ < 0) fail(SmilesErrorKind::InvalidBond, pos_, "bond without a preceding atom");
        if (c == '$') fail(SmilesErrorKind::InvalidBond, pos_, "quadruple bonds are not supported");
        pending_ = PendingBond{symbol_order(c), pos_};
        ++pos_;
      } else if (c == '.') {
        if (pending_) fail(SmilesErrorKind::InvalidBond, pending_->offset, "bond before '.'");
        prev_ = -1;
        ++pos_;
      } else if (is_digit(c) || c == '%') {
        ring_closure();
      } else if (c == '[') {
        add_atom(bracket_atom());
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        add_atom(organic_atom());
      } else {
        fail(SmilesErrorKind::UnexpectedCharacter, pos_, std::string("'") + c + "'");
      }
    }
    if (pending_) fail(SmilesErrorKind::InvalidBond, pending_->offset, "dangling bond at end of input");
    if (!branches_.empty()) fail(SmilesErrorKind::UnbalancedBranch, branches_.back().second, "unclosed '('");
    if (!rings_.empty()) {
      const auto first = rings_.begin();
      fail(SmilesErrorKind::UnclosedRingBond, first->second.offset,
           "ring bond " + std::to_string(first->first) + " never closed");
    }
    if (mol.empty()) fail(SmilesErrorKind::EmptyInput, 0, "no atoms");
    return mol;
  }

 private:
  [[noreturn]] void fail(SmilesErrorKind kind, std::size_t offset, const std::string& detail) const {
    throw SmilesError(kind, base_ + offset, detail);
  }

  static BondOrder symbol_order(char c) {
    switch (c) {
      case '=': return BondOrder::Double;
      case '#': return BondOrder::Triple;
      case ':': return BondOrder::Aromatic;
      default: return BondOrder::Single;
    }
  }

  BondOrder default_order(int a, int b) const {
    return (mol_->atom(a).aromatic && mol_->atom(b).aromatic) ? BondOrder::Aromatic
                                                              : BondOrder::Single;
  }

  void add_atom(const Atom& atom) {
    const int idx = mol_->add_atom(atom);
    if (prev_ >= 0) {
      const BondOrder order = pending_ ? pending_->order : default_order(prev_, idx);
      mol_->add_bond(prev_, idx, order);
    }
    pending_.reset();
    prev_ = idx;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() || !is_digit(text_[pos_ + 1]) || !is_digit(text_[pos_ + 2])) {
        fail(SmilesErrorKind::UnexpectedCharacter, pos_, "'%' must be followed by two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    if (prev_ < 0) fail(SmilesErrorKind::InvalidBond, start, "ring bond without a preceding atom");

    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_[number] = OpenRing{prev_, pending_ ? std::optional(pending_->order) : std::nullopt, start};
      pending_.reset();
      return;
    }
    const OpenRing open = it->second;
    rings_.erase(it);
    std::optional<BondOrder> order = open.order;
    if (pending_) {
      if (order && *order != pending_->order) {
        fail(SmilesErrorKind::InvalidBond, pending_->offset, "conflicting ring-closure bond symbols");
      }
      order = pending_->order;
    }
    pending_.reset();
    if (open.atom == prev_) fail(SmilesErrorKind::InvalidBond, start, "ring bond closes onto itself");
    if (mol_->find_bond(open.atom, prev_) >= 0) {
      fail(SmilesErrorKind::InvalidBond, start, "ring bond duplicates an existing bond");
    }
    mol_->add_bond(open.atom, prev_, order ? *order : default_order(open.atom, prev_));
  }

  Atom organic_atom() {
    const std::size_t start = pos_;
    Atom atom;
    const char c = text_[pos_];
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    std::string_view symbol;
    if (c == 'C' && next == 'l') {
      symbol = "Cl";
    } else if (c == 'B' && next == 'r') {
      symbol = "Br";
    } else {
      switch (c) {
        case 'B': case 'C': case 'N': case 'O': case 'P': case 'S': case 'F': case 'I':
          symbol = text_.substr(pos_, 1);
          break;
        case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
          atom.aromatic = true;
          symbol = text_.substr(pos_, 1);
          break;
        default:
          fail(SmilesErrorKind::UnknownElement, start,
               std::string("'") + c + "' is not in the organic subset (use a bracket atom)");
      }
    }
    pos_ += symbol.size();
    std::string upper(symbol);
    upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
    atom.atomic_number = find_element(upper)->atomic_number;
    return atom;
  }

  Atom bracket_atom() {
    const std::size_t open = pos_;
    ++pos_;  // '['
    Atom atom;
    atom.bracket = true;

    auto at_end = [&] { return pos_ >= text_.size(); };
    auto malformed = [&](const std::string& why) { fail(SmilesErrorKind::MalformedBracketAtom, open, why); };

    if (!at_end() && is_digit(text_[pos_])) {
      int iso = 0;
      while (!at_end() && is_digit(text_[pos_])) {
        iso = iso * 10 + (text_[pos_] - '0');
        if (iso > 999) malformed("isotope out of range");
        ++pos_;
      }
      atom.isotope = iso;
    }
    if (at_end()) malformed("missing element symbol");

    // Element symbol.
    const std::size_t sym_start = pos_;
    const char c = text_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      static constexpr std::array<std::string_view, 8> kAromatic{"se", "as", "te", "b", "c", "n", "o", "p"};
      std::string_view matched;
      for (auto cand : kAromatic) {
        if (text_.substr(pos_, cand.size()) == cand) {
          matched = cand;
          break;
        }
      }
      if (matched.empty() && c == 's') matched = "s";
      if (matched.empty()) fail(SmilesErrorKind::UnknownElement, sym_start, "unknown aromatic symbol");
      std::string upper(matched);
      upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
      atom.atomic_number = find_element(upper)->atomic_number;
      atom.aromatic = true;
      pos_ += matched.size();
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      const ElementInfo* info = nullptr;
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        info = find_element(text_.substr(pos_, 2));
        if (info) pos_ += 2;
      }
      if (!info) {
        info = find_element(text_.substr(pos_, 1));
        if (!info) fail(SmilesErrorKind::UnknownElement, sym_start, "unknown element");
        pos_ += 1;
      }
      atom.atomic_number = info->atomic_number;
    } else if (c == '*') {
      fail(SmilesErrorKind::UnknownElement, sym_start, "wildcard atoms are not supported");
    } else {
      malformed("missing element symbol");
    }

    // Chirality: @, @@, @TH1, @AL2, @SP3, @TB10, @OH25.
    if (!at_end() && text_[pos_] == '@') {
      ++pos_;
      if (!at_end() && text_[pos_] == '@') {
        ++pos_;
      } else if (!at_end() && std::isupper(static_cast<unsigned char>(text_[pos_])) &&
                 pos_ + 1 < text_.size() && std::isupper(static_cast<unsigned char>(text_[pos_ + 1])) &&
                 text_[pos_] != 'H') {
        pos_ += 2;
        while (!at_end() && is_digit(text_[pos_])) ++pos_;
      }
    }

    int hcount = 0;
    if (!at_end() && text_[pos_] == 'H') {
      ++pos_;
      hcount = 1;
      if (!at_end() && is_digit(text_[pos_])) {
        hcount = 0;
        while (!at_end() && is_digit(text_[pos_])) {
          hcount = hcount * 10 + (text_[pos_] - '0');
          if (hcount > 99) malformed("hydrogen count out of range");
          ++pos_;
        }
      }
    }
    atom.explicit_h = hcount;

    if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      ++pos_;
      int magnitude = 1;
      if (!at_end() && is_digit(text_[pos_])) {
        magnitude = 0;
        while (!at_end() && is_digit(text_[pos_])) {
          magnitude = magnitude * 10 + (text_[pos_] - '0');
          if (magnitude > 99) malformed("charge out of range");
          ++pos_;
        }
      } else {
        while (!at_end() && text_[pos_] == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }

    if (!at_end() && text_[pos_] == ':') {
      ++pos_;
      if (at_end() || !is_digit(text_[pos_])) malformed("atom class needs digits");
      while (!at_end() && is_digit(text_[pos_])) ++pos_;
    }

    if (at_end() || text_[pos_] != ']') malformed("expected ']'");
    ++pos_;
    atom.implicit_h = hcount;
    return atom;
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
  Molecule* mol_ = nullptr;
  int prev_ = -1;
  std::optional<PendingBond> pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, OpenRing> rings_;
};

struct Valences {
  int atomic_number;
  std::array<int, 3> values;
  int count;
};

constexpr std::array<Valences, 10> kDefaultValences{{
    {5, {3, 0, 0}, 1},  {6, {4, 0, 0}, 1},  {7, {3, 5, 0}, 2},  {8, {2, 0, 0}, 1},
    {9, {1, 0, 0}, 1},  {15, {3, 5, 0}, 2}, {16, {2, 4, 6}, 3}, {17, {1, 0, 0}, 1},
    {35, {1, 0, 0}, 1}, {53, {1, 0, 0}, 1},
}};

const Valences* default_valences(int atomic_number) {
  for (const auto& v : kDefaultValences) {
    if (v.atomic_number == atomic_number) return &v;
  }
  return nullptr;
}

}  // namespace

Molecule parse_smiles_graph(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  if (begin == end) throw SmilesError(SmilesErrorKind::EmptyInput, 0, "input is empty");
  const std::string_view body = text.substr(begin, end - begin);
  SmilesParser parser(body, begin);
  return parser.parse(std::string(body));
}

Molecule assign_implicit_hydrogens(Molecule mol) {
  for (int i = 0; i < static_cast<int>(mol.atom_count()); ++i) {
    Atom& atom = mol.atom(i);
    if (atom.bracket) {
      atom.implicit_h = atom.explicit_h.value_or(0);
      atom.valence_clamped = false;
      continue;
    }
    const Valences* allowed = default_valences(atom.atomic_number);
    atom.valence_clamped = false;
    if (!allowed) {
      atom.implicit_h = 0;
      continue;
    }
    int bond_sum = 0;
    bool has_aromatic_bond = false;
    for (const auto& nb : mol.neighbors(i)) {
      const BondOrder order = mol.bond(nb.bond).order;
      bond_sum += valence_contribution(order);
      has_aromatic_bond = has_aromatic_bond || order == BondOrder::Aromatic;
    }
    int h = -1;
    for (int k = 0; k < allowed->count; ++k) {
      if (allowed->values[static_cast<std::size_t>(k)] >= bond_sum) {
        h = allowed->values[static_cast<std::size_t>(k)] - bond_sum;
        break;
      }
    }
    if (h < 0) {
      atom.implicit_h = 0;
      atom.valence_clamped = true;
      continue;
    }
    // An aromatic atom donates one valence to its ring's pi system, which is
    // what a Kekule assignment of the aromatic bonds would consume.
    if (atom.aromatic && has_aromatic_bond && h > 0) --h;
    atom.implicit_h = h;
  }
  return mol;
}

Molecule parse_smiles(std::string_view text) {
  return perceive_aromaticity(assign_implicit_hydrogens(parse_smiles_graph(text)));
}

}  // namespace mvmol::chem
