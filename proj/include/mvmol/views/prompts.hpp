#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mvmol::views {

enum class View { Structure, Task };

std::string_view to_string(View view);

/// Template body with named "{slot}" placeholders.
struct PromptTemplate {
  View view = View::Structure;
  std::vector<std::string> slots;
  std::string text;

  /// Throws std::invalid_argument if a slot is missing or empty.
  std::string render(const std::map<std::string, std::string, std::less<>>& values) const;
};

/// The three structure insight questions, in concatenation order.
const std::array<std::string, 3>& default_structure_questions();

/// "{question} {smiles}" for each question, same order.
std::vector<std::string> build_structure_prompts(std::string_view smiles);
std::vector<std::string> build_structure_prompts(std::string_view smiles,
                                                 const std::vector<std::string>& questions);

enum class WrapperStyle { GalacticaSmilesTags, Plain };

std::string_view to_string(WrapperStyle style);
WrapperStyle parse_wrapper_style(std::string_view text);

PromptTemplate task_template(WrapperStyle style);

std::string build_task_prompt(std::string_view smiles, std::string_view task_question,
                              WrapperStyle style = WrapperStyle::GalacticaSmilesTags);

}  // namespace mvmol::views
