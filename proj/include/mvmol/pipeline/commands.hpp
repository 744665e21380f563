#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvmol/data/evaluate.hpp"
#include "mvmol/model/contributions.hpp"
#include "mvmol/pipeline/config.hpp"
#include "mvmol/views/provider.hpp"

namespace mvmol::pipeline {

/// Any stage failure. The message already carries file/line context.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FeaturizeResult {
  std::size_t records = 0;
  std::size_t rejects = 0;
  std::size_t rules = 0;  // 0 when no rules file is configured
  std::size_t train = 0, valid = 0, test = 0;
};

/// Loads and splits the dataset, evaluates the rules on every record and
/// z-scores numeric rules with statistics fitted on the training split.
FeaturizeResult cmd_featurize(const RunConfig& config, std::ostream& log);

struct EmbedResult {
  std::size_t records = 0;
  views::EmbedStats stats;
};

std::unique_ptr<views::EmbeddingProvider> make_provider(const ProviderSettings& settings);

/// Embeds three structure prompts and one task prompt per record for the
/// enabled views. `provider` overrides the configured one (used in tests).
EmbedResult cmd_embed(const RunConfig& config, std::ostream& log, views::EmbeddingProvider* provider = nullptr);

struct TrainSeedResult {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
  double best_metric = 0.0;
  std::string metric_name;
};

std::vector<TrainSeedResult> cmd_train(const RunConfig& config, std::ostream& log);

struct EvaluateResult {
  std::string metric;
  std::vector<data::MetricsReport> per_seed;  // test split, seed order
  data::SeedSummary summary;                  // over per-seed task means
};

EvaluateResult cmd_evaluate(const RunConfig& config, std::ostream& log);

/// Gate weights over every record, one report per seed.
std::vector<model::ContributionReport> cmd_contributions(const RunConfig& config, std::ostream& log);

enum class PromptKind { Structure, Task, RulesScientific, RulesData };
PromptKind parse_prompt_kind(std::string_view text);  // structure, task, rules-sci, rules-data

/// Writes prompt text files under <out>/prompts and returns their paths.
/// With `smiles` set, structure and task prompts cover only that molecule
/// and the dataset is not read.
std::vector<std::filesystem::path> cmd_prompts(const RunConfig& config, PromptKind kind, std::ostream& log,
                                               const std::optional<std::string>& smiles = std::nullopt);

}  // namespace mvmol::pipeline
