#include "mvmol/rules/prompts.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mvmol/common/rng.hpp"
#include "mvmol/rules/ruleset.hpp"

namespace mvmol::rules {
namespace {

std::string count_phrase(std::size_t n) {
  return std::to_string(n) + (n == 1 ? " rule" : " rules");
}

// The task slot is a clause ("predict if ..."); close it with a period unless
// the caller already did.
std::string as_sentence_tail(std::string_view text) {
  std::string out(text);
  const char last = out.back();
  if (last != '.' && last != '?' && last != '!') out.push_back('.');
  return out;
}

std::string format_label(double label) {
  if (std::floor(label) == label && std::abs(label) < 1e15) {
    return std::to_string(static_cast<long long>(label));
  }
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), label);
  return std::string(buf.data(), end);
}

}  // namespace

std::string build_scientific_rule_prompt(std::string_view task_description, std::size_t rule_count) {
  if (task_description.empty()) throw std::invalid_argument("task description is empty");
  if (rule_count == 0) throw std::invalid_argument("rule count must be positive");
  return "Assume you are an experienced Chemist. Please come up with " + count_phrase(rule_count) +
         (rule_count == 1 ? " that is important to " : " that are important to ") +
         as_sentence_tail(task_description);
}

std::string build_data_rule_prompt(std::span<const LabeledPair> subset, std::string_view label_meaning,
                                   std::size_t rule_count) {
  if (subset.empty()) throw std::invalid_argument("data subset is empty");
  if (label_meaning.empty()) throw std::invalid_argument("label meaning is empty");
  if (rule_count == 0) throw std::invalid_argument("rule count must be positive");
  const std::string x(label_meaning);
  std::string out = "Assume you are a very experienced Chemist. In the following data, with label 1, it means "
                    "the smiles string is " + x + ". With label 0, it means the smiles string is not " + x +
                    ". Please infer step-by-step to come up with " + count_phrase(rule_count) +
                    (rule_count == 1 ? " that directly relates" : " that directly relate") +
                    " the properties/structures of a molecule to predict if it can be " + x + ".\n";
  for (const auto& pair : subset) {
    out += pair.smiles + " " + format_label(pair.label) + "\n";
  }
  return out;
}

std::vector<std::vector<LabeledPair>> sample_data_subsets(std::span<const LabeledPair> records,
                                                          std::size_t k, std::size_t m,
                                                          std::uint64_t seed) {
  if (m > records.size()) {
    throw RuleError(RuleErrorKind::SubsetTooLarge, std::to_string(m),
                    "subset size " + std::to_string(m) + " exceeds " + std::to_string(records.size()) +
                        " records");
  }
  Rng rng(seed);
  std::vector<std::size_t> order(records.size());
  std::vector<std::vector<LabeledPair>> subsets;
  subsets.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates: the first m slots are a uniform draw without replacement.
    std::vector<LabeledPair> subset;
    subset.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng.uniform_index(order.size() - i);
      std::swap(order[i], order[j]);
      subset.push_back(records[order[i]]);
    }
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

}  // namespace mvmol::rules
