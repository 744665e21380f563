#include "mvmol/views/prompts.hpp"

#include <stdexcept>

namespace mvmol::views {

std::string_view to_string(View view) { return view == View::Structure ? "structure" : "task"; }

std::string PromptTemplate::render(const std::map<std::string, std::string, std::less<>>& values) const {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('{', pos);
    if (open == std::string::npos) break;
    const std::size_t close = text.find('}', open);
    if (close == std::string::npos) break;
    const std::string_view name(text.data() + open + 1, close - open - 1);
    auto it = values.find(name);
    if (it == values.end() || it->second.empty()) {
      throw std::invalid_argument("prompt slot '" + std::string(name) + "' is not filled");
    }
    out.append(text, pos, open - pos);
    out += it->second;
    pos = close + 1;
  }
  out.append(text, pos);
  return out;
}

const std::array<std::string, 3>& default_structure_questions() {
  static const std::array<std::string, 3> kQuestions{
      "How does the molecule’s 3D shape change in different environments, and what are the effects "
      "of these changes?",
      "What are the key intermolecular forces that govern the behavior of this molecule in various "
      "contexts?",
      "How does the molecule contribute to the overall chemical equilibrium in its different "
      "environments?",
  };
  return kQuestions;
}

std::vector<std::string> build_structure_prompts(std::string_view smiles) {
  const auto& q = default_structure_questions();
  return build_structure_prompts(smiles, std::vector<std::string>(q.begin(), q.end()));
}

std::vector<std::string> build_structure_prompts(std::string_view smiles,
                                                 const std::vector<std::string>& questions) {
  if (smiles.empty()) throw std::invalid_argument("SMILES is empty");
  std::vector<std::string> prompts;
  prompts.reserve(questions.size());
  for (const auto& q : questions) {
    PromptTemplate t{View::Structure, {"question", "smiles"}, "{question} {smiles}"};
    prompts.push_back(t.render({{"question", q}, {"smiles", std::string(smiles)}}));
  }
  return prompts;
}

std::string_view to_string(WrapperStyle style) {
  return style == WrapperStyle::GalacticaSmilesTags ? "galactica_smiles_tags" : "plain";
}

WrapperStyle parse_wrapper_style(std::string_view text) {
  if (text == "galactica_smiles_tags") return WrapperStyle::GalacticaSmilesTags;
  if (text == "plain") return WrapperStyle::Plain;
  throw std::invalid_argument("unknown wrapper style '" + std::string(text) + "'");
}

PromptTemplate task_template(WrapperStyle style) {
  if (style == WrapperStyle::GalacticaSmilesTags) {
    return {View::Task,
            {"smiles", "question"},
            "Here is a SMILES formula: [START_I_SMILES]{smiles}[END_I_SMILES]\n\nQuestion: {question}"};
  }
  return {View::Task, {"smiles", "question"}, "Here is a SMILES formula: {smiles}\n\nQuestion: {question}"};
}

std::string build_task_prompt(std::string_view smiles, std::string_view task_question, WrapperStyle style) {
  return task_template(style).render(
      {{"smiles", std::string(smiles)}, {"question", std::string(task_question)}});
}

}  // namespace mvmol::views
