#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mvmol::rules {

struct LabeledPair {
  std::string smiles;
  double label = 0.0;
};

inline constexpr std::size_t kDefaultSubsetCount = 5;
inline constexpr std::size_t kDefaultSubsetSize = 20;

/// "Assume you are an experienced Chemist. ..." with count and task filled in.
/// Throws std::invalid_argument for an empty task or a zero count.
std::string build_scientific_rule_prompt(std::string_view task_description, std::size_t rule_count);

/// Persona paragraph followed by one "<smiles> <label>" line per pair.
/// label_meaning fills the "it means the smiles string is {X}" slot.
std::string build_data_rule_prompt(std::span<const LabeledPair> subset, std::string_view label_meaning,
                                   std::size_t rule_count);

/// K independent draws of m distinct records each. Throws RuleError(SubsetTooLarge)
/// when m exceeds the record count.
std::vector<std::vector<LabeledPair>> sample_data_subsets(std::span<const LabeledPair> records,
                                                          std::size_t k, std::size_t m,
                                                          std::uint64_t seed);

}  // namespace mvmol::rules
