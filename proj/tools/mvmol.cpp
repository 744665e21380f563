// Command-line front end for the staged pipeline:
//   featurize -> embed -> train -> evaluate -> contributions, plus prompts.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mvmol/pipeline/artifacts.hpp"
#include "mvmol/pipeline/commands.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> views;
  std::optional<std::string> out;
  std::optional<std::string> provider;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "Run config (TOML, or a manifest.json)")->required();
  sub->add_option("--seed", f.seed, "Use this single seed instead of the configured list");
  sub->add_option("--views", f.views, "Enabled views, e.g. struct,task,rule");
  sub->add_option("--out", f.out, "Run directory");
  sub->add_option("--provider", f.provider, "Embedding provider override (mock)");
}

mvmol::pipeline::RunConfig resolve(const CommonFlags& f) {
  auto config = mvmol::pipeline::load_config(f.config);
  mvmol::pipeline::Overrides o;
  o.seed = f.seed;
  o.views = f.views;
  if (f.out) o.out = *f.out;
  o.provider = f.provider;
  mvmol::pipeline::apply_overrides(config, o);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mvmol: multi-view molecular property prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mvmol::pipeline::kToolVersion);

  CommonFlags flags;
  std::string prompt_kind;
  std::optional<std::string> smiles;

  auto* featurize = app.add_subcommand("featurize", "Load, split and evaluate rule features");
  auto* embed = app.add_subcommand("embed", "Embed structure and task prompts");
  auto* train = app.add_subcommand("train", "Train one model per seed");
  auto* evaluate = app.add_subcommand("evaluate", "Score checkpoints on the test split");
  auto* contributions = app.add_subcommand("contributions", "Export per-molecule view weights");
  auto* prompts = app.add_subcommand("prompts", "Write prompt text files");
  for (auto* sub : {featurize, embed, train, evaluate, contributions, prompts}) add_common(sub, flags);
  prompts->add_option("kind", prompt_kind, "structure | task | rules-sci | rules-data")
      ->required()
      ->check(CLI::IsMember({"structure", "task", "rules-sci", "rules-data"}));
  prompts->add_option("--smiles", smiles, "Single molecule instead of the dataset");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = resolve(flags);
    namespace p = mvmol::pipeline;
    if (featurize->parsed()) {
      p::cmd_featurize(config, std::cout);
    } else if (embed->parsed()) {
      p::cmd_embed(config, std::cout);
    } else if (train->parsed()) {
      p::cmd_train(config, std::cout);
    } else if (evaluate->parsed()) {
      p::cmd_evaluate(config, std::cout);
    } else if (contributions->parsed()) {
      p::cmd_contributions(config, std::cout);
    } else {
      p::cmd_prompts(config, p::parse_prompt_kind(prompt_kind), std::cout, smiles);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
