#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/data/dataset.hpp"
#include "mvmol/data/split.hpp"
#include "mvmol/model/train.hpp"
#include "mvmol/views/embed.hpp"
#include "mvmol/views/prompts.hpp"

namespace mvmol::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProviderSettings {
  std::string kind = "mock";  // "mock" or "http"
  std::size_t dim = 64;       // mock only
  std::uint64_t seed = 0;     // mock only
  // http only. Values may contain ${VAR}, expanded from the environment when
  // the provider is built and never written back to disk.
  std::string url;
  std::string model;
  std::string auth_env;
  std::size_t timeout_s = 60;
  std::size_t batch_size = 32;
  std::size_t max_retries = 5;
  std::size_t max_in_flight = 1;
  std::filesystem::path cache_dir;  // empty: <out>/cache
};

struct PromptSettings {
  std::string task_description;       // scientific rule prompt
  std::size_t rule_count = 20;
  std::string label_meaning;          // data rule prompt; defaults to the dataset name
  std::size_t data_rule_count = 3;
  std::size_t subset_count = 5;
  std::size_t subset_size = 20;
  std::uint64_t subset_seed = 0;
};

struct RunConfig {
  std::filesystem::path config_path;
  std::filesystem::path dataset_path;
  data::DatasetSpec dataset;
  std::filesystem::path rules_path;  // may be empty when the rule view is off
  ProviderSettings provider;
  std::array<bool, 3> views{true, true, true};  // structure, task, rule
  views::WrapperStyle wrapper = views::WrapperStyle::GalacticaSmilesTags;
  std::vector<std::string> structure_questions;  // empty: the three defaults
  std::string task_question;                     // empty: dataset.task_question
  model::TrainConfig train;
  std::vector<std::uint64_t> seeds{0};
  data::SplitFractions split;
  std::filesystem::path out_dir;
  PromptSettings prompts;

  /// Throws ConfigError: no view enabled, rule view on without a rules file,
  /// empty seed list, or an invalid train block.
  void validate() const;
  std::string effective_task_question() const;
};

/// Sections: [dataset] (path plus either spec = "file" or inline spec keys),
/// [rules], [provider], [views], [train] (seeds = [...] and TrainConfig keys),
/// [split], [output], [prompts]. Relative paths resolve against base_dir.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// TOML file, or a JSON file whose "config" member is a resolved snapshot
/// (as stored in a run manifest).
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved form with absolute paths; config_from_json reads it back.
nlohmann::ordered_json config_to_json(const RunConfig& config);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> views;  // "struct,task,rule" subset
  std::optional<std::filesystem::path> out;
  std::optional<std::string> provider;  // only "mock" is accepted
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// "struct,task" -> {true, true, false}. Accepts struct|structure, task, rule|rules.
std::array<bool, 3> parse_view_list(std::string_view text);

/// Replaces ${NAME} with the environment value. Throws ConfigError if unset.
std::string expand_env(std::string_view text);

}  // namespace mvmol::pipeline
