#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mvmol/common/io.hpp"
#include "mvmol/model/checkpoint.hpp"
#include "mvmol/pipeline/artifacts.hpp"
#include "mvmol/pipeline/commands.hpp"

namespace mvmol::pipeline {
namespace {

namespace fs = std::filesystem;

constexpr const char* kToyCsv =
    "smiles,p_np\n"
    "CCO,0\n"
    "c1ccccc1O,1\n"
    "C1CCCCC1N,1\n"
    "c1ccncc1C,0\n"
    "CC(=O)Oc1ccccc1C(=O)O,1\n"
    "C1CC1C(=O)O,0\n"
    "c1ccc2ccccc2c1,1\n"
    "CCCCN,0\n"
    "C1CCOC1,1\n"
    "c1ccsc1,0\n";

constexpr const char* kThreeRules =
    "rule arom: aromatic_ring_count >= 1\n"
    "rule mw: numeric molecular_weight\n"
    "rule hbd: numeric hbd_count\n";

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("mvmol_pipeline_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir_);
    write("toy.csv", kToyCsv);
    write("toy.rules", kThreeRules);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { write_file_atomic(dir_ / name, text); }

  nlohmann::json base_json() const {
    return nlohmann::json::parse(R"({
      "dataset": {"path": "toy.csv", "name": "BBBP", "task_kind": "classification", "label_columns": ["p_np"],
                  "task_question": "Can the molecule penetrate the blood-brain barrier?"},
      "rules": {"path": "toy.rules"},
      "provider": {"kind": "mock", "dim": 8},
      "train": {"seeds": [0], "max_epochs": 5, "patience": 5, "hidden_dim": 4, "mlp_widths": [4]},
      "output": {"dir": "run"},
      "prompts": {"task_description": "predict blood-brain barrier penetration",
                  "subset_count": 2, "subset_size": 3, "subset_seed": 7}
    })");
  }

  RunConfig config(const nlohmann::json& j) const { return config_from_json(j, dir_); }
  RunConfig config() const { return config(base_json()); }

  fs::path dir_;
  std::ostringstream log_;
};

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST_F(PipelineTest, FeaturizeWritesOneColumnPerRule) {
  const auto c = config();
  const auto r = cmd_featurize(c, log_);
  EXPECT_EQ(r.records, 10u);
  EXPECT_EQ(r.rules, 3u);
  const RunLayout layout{c.out_dir};
  const auto m = read_matrix(layout.rule_features());
  EXPECT_EQ(m.rows, 10u);
  EXPECT_EQ(m.cols, 3u);
  const auto raw = read_matrix(layout.rule_raw());
  EXPECT_DOUBLE_EQ(raw(0, 0), 0.0);  // ethanol has no aromatic ring
  EXPECT_DOUBLE_EQ(raw(1, 0), 1.0);
  EXPECT_TRUE(fs::exists(layout.manifest()));
  EXPECT_TRUE(fs::exists(layout.split()));
}

TEST_F(PipelineTest, NumericRulesAreStandardizedOnTrainingRows) {
  const auto c = config();
  cmd_featurize(c, log_);
  const RunLayout layout{c.out_dir};
  const auto split = nlohmann::json::parse(read_file_text(layout.split()));
  const auto m = read_matrix(layout.rule_features());
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i : split.at("train").get<std::vector<std::size_t>>()) {
    sum += m(i, 1);
    ++n;
  }
  EXPECT_NEAR(sum / static_cast<double>(n), 0.0, 1e-12);
}

TEST_F(PipelineTest, MissingExternalNamesTheRule) {
  write("ext.rules", "external logp unit \"log units\"\nrule lipophilic: logp > 2\n");
  auto j = base_json();
  j["rules"]["path"] = "ext.rules";
  const std::string msg = message_of([&] { cmd_featurize(config(j), log_); });
  EXPECT_NE(msg.find("lipophilic"), std::string::npos) << msg;
  EXPECT_NE(msg.find("logp"), std::string::npos) << msg;
}

TEST_F(PipelineTest, EmptyRuleFileIsRejected) {
  write("empty.rules", "# nothing here\n");
  auto j = base_json();
  j["rules"]["path"] = "empty.rules";
  const std::string msg = message_of([&] { cmd_featurize(config(j), log_); });
  EXPECT_NE(msg.find("EmptyRuleSet"), std::string::npos) << msg;
}

TEST_F(PipelineTest, RuleSyntaxErrorCarriesFileAndLine) {
  write("bad.rules", "rule ok: ring_count > 0\nrule bad: ring_count >\n");
  auto j = base_json();
  j["rules"]["path"] = "bad.rules";
  const std::string msg = message_of([&] { cmd_featurize(config(j), log_); });
  EXPECT_NE(msg.find("bad.rules:2"), std::string::npos) << msg;
}

TEST_F(PipelineTest, MockEmbedFillsCacheAndRerunIsFree) {
  auto j = base_json();
  write("five.csv", "smiles,p_np\nCCO,0\nc1ccccc1,1\nCCN,0\nC1CCCCC1,1\nCC(=O)O,0\n");
  j["dataset"]["path"] = "five.csv";
  const auto c = config(j);
  const auto first = cmd_embed(c, log_);
  EXPECT_EQ(first.records, 5u);
  EXPECT_EQ(first.stats.new_entries, 20u);  // three structure prompts and one task prompt each
  EXPECT_EQ(read_matrix(RunLayout{c.out_dir}.structure_view()).cols, 3u * 8u);
  EXPECT_EQ(read_matrix(RunLayout{c.out_dir}.task_view()).cols, 8u);
  const auto second = cmd_embed(c, log_);
  EXPECT_EQ(second.stats.new_entries, 0u);
  EXPECT_EQ(second.stats.remote_calls, 0u);
  EXPECT_EQ(second.stats.cache_hits, 20u);
}

TEST_F(PipelineTest, UnreachableProviderIsReported) {
  auto j = base_json();
  j["provider"] = {{"kind", "http"}, {"url", "http://127.0.0.1:1/v1/embeddings"}, {"model", "m"},
                   {"max_retries", 0}, {"timeout_s", 2}};
  const std::string msg = message_of([&] { cmd_embed(config(j), log_); });
  EXPECT_NE(msg.find("ProviderUnreachable"), std::string::npos) << msg;
}

TEST_F(PipelineTest, TrainWithoutArtifactsNamesTheMissingStage) {
  const std::string msg = message_of([&] { cmd_train(config(), log_); });
  EXPECT_NE(msg.find("run `embed` first"), std::string::npos) << msg;
}

TEST_F(PipelineTest, DisabledRuleViewHasNoRuleProjection) {
  auto j = base_json();
  j["views"] = {{"rule", false}};
  const auto c = config(j);
  cmd_embed(c, log_);
  cmd_train(c, log_);
  const RunLayout layout{c.out_dir};
  const auto m = model::load_checkpoint(layout.checkpoint(0), layout.checkpoint_sidecar(0));
  EXPECT_FALSE(m.active[2]);
  const auto sidecar = nlohmann::json::parse(read_file_text(layout.checkpoint_sidecar(0)));
  EXPECT_EQ(sidecar.dump().find("proj.rule"), std::string::npos);
}

TEST_F(PipelineTest, TwoSeedsGiveTwoCheckpoints) {
  auto j = base_json();
  j["train"]["seeds"] = {3, 4};
  const auto c = config(j);
  cmd_featurize(c, log_);
  cmd_embed(c, log_);
  const auto results = cmd_train(c, log_);
  ASSERT_EQ(results.size(), 2u);
  const RunLayout layout{c.out_dir};
  EXPECT_TRUE(fs::exists(layout.checkpoint(3)));
  EXPECT_TRUE(fs::exists(layout.checkpoint(4)));
  EXPECT_NE(read_file_text(layout.checkpoint(3)), read_file_text(layout.checkpoint(4)));
}

TEST_F(PipelineTest, EvaluateAndContributionsAfterTraining) {
  // Twenty molecules so the scaffold split leaves both classes in the test set.
  std::string csv = "smiles,p_np\n";
  const char* rings[] = {"c1ccccc1", "C1CCCCC1", "c1ccncc1", "C1CCOC1", "c1ccsc1"};
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 4; ++k) csv += std::string(rings[i]) + std::string(k + 1, 'C') + "," + std::to_string(k % 2) + "\n";
  }
  write("twenty.csv", csv);
  auto j = base_json();
  j["dataset"]["path"] = "twenty.csv";
  j["split"] = {{"train", 0.6}, {"valid", 0.2}, {"test", 0.2}};
  j["train"]["seeds"] = {0, 1};
  const auto c = config(j);
  cmd_featurize(c, log_);
  cmd_embed(c, log_);
  cmd_train(c, log_);
  const auto ev = cmd_evaluate(c, log_);
  EXPECT_EQ(ev.metric, "roc_auc");
  EXPECT_EQ(ev.per_seed.size(), 2u);
  const RunLayout layout{c.out_dir};
  const auto metrics = nlohmann::json::parse(read_file_text(layout.metrics()));
  EXPECT_EQ(metrics.at("per_seed").size(), 2u);
  EXPECT_DOUBLE_EQ(metrics.at("mean").get<double>(), ev.summary.mean);

  const auto reports = cmd_contributions(c, log_);
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& row : reports[0].per_molecule) EXPECT_NEAR(row[0] + row[1] + row[2], 1.0, 1e-12);
  const std::string table = read_file_text(layout.contributions_csv(0));
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 21);
}

TEST_F(PipelineTest, ScientificRulePrompt) {
  const auto files = cmd_prompts(config(), PromptKind::RulesScientific, log_);
  ASSERT_EQ(files.size(), 1u);
  EXPECT_NE(read_file_text(files[0]).find("come up with 20 rules"), std::string::npos);
}

TEST_F(PipelineTest, TaskPromptForSingleMolecule) {
  auto j = base_json();
  j["views"] = {{"wrapper", "galactica_smiles_tags"}};
  const auto files = cmd_prompts(config(j), PromptKind::Task, log_, std::string("CCO"));
  ASSERT_EQ(files.size(), 1u);
  EXPECT_NE(read_file_text(files[0]).find("[START_I_SMILES]CCO[END_I_SMILES]"), std::string::npos);
}

TEST_F(PipelineTest, StructurePromptsThreePerMolecule) {
  const auto files = cmd_prompts(config(), PromptKind::Structure, log_);
  EXPECT_EQ(files.size(), 30u);
}

TEST_F(PipelineTest, DataRulePromptsAreDeterministic) {
  const auto c = config();
  const auto files = cmd_prompts(c, PromptKind::RulesData, log_);
  ASSERT_EQ(files.size(), 2u);
  const std::string a = read_file_text(files[0]), b = read_file_text(files[1]);
  // Header line plus three "smiles label" lines, each newline-terminated.
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 4);
  cmd_prompts(c, PromptKind::RulesData, log_);
  EXPECT_EQ(read_file_text(files[0]), a);
  EXPECT_EQ(read_file_text(files[1]), b);
}

TEST_F(PipelineTest, DataRulePromptsUseOnlyTrainingMolecules) {
  auto j = base_json();
  j["prompts"]["subset_size"] = 8;
  j["prompts"]["subset_count"] = 1;
  const auto c = config(j);
  cmd_featurize(c, log_);
  const auto split = nlohmann::json::parse(read_file_text(RunLayout{c.out_dir}.split()));
  const auto files = cmd_prompts(c, PromptKind::RulesData, log_);
  const std::string text = read_file_text(files.at(0));
  std::vector<std::string> smiles;
  std::istringstream in(kToyCsv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) smiles.push_back(line.substr(0, line.find(',')));
  for (const char* part : {"valid", "test"}) {
    for (std::size_t i : split.at(part).get<std::vector<std::size_t>>()) {
      EXPECT_EQ(text.find("\n" + smiles[i] + " "), std::string::npos) << smiles[i];
    }
  }
}

TEST_F(PipelineTest, ManifestRecordsEachStage) {
  const auto c = config();
  cmd_featurize(c, log_);
  cmd_embed(c, log_);
  const auto manifest = nlohmann::json::parse(read_file_text(RunLayout{c.out_dir}.manifest()));
  EXPECT_EQ(manifest.at("tool_version"), kToolVersion);
  ASSERT_TRUE(manifest.at("stages").contains("featurize"));
  ASSERT_TRUE(manifest.at("stages").contains("embed"));
  const auto& arts = manifest.at("stages").at("featurize").at("artifacts");
  EXPECT_EQ(arts.at("features/rule.bin"), file_sha256(RunLayout{c.out_dir}.rule_features()));
  // A manifest is itself a loadable config.
  const auto again = load_config(RunLayout{c.out_dir}.manifest());
  EXPECT_EQ(again.dataset_path, c.dataset_path);
  EXPECT_EQ(again.seeds, c.seeds);
}

TEST_F(PipelineTest, OverridesReplaceSeedsViewsAndOutput) {
  auto c = config();
  Overrides o;
  o.seed = 9;
  o.views = "struct,rule";
  o.out = dir_ / "elsewhere";
  apply_overrides(c, o);
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{9});
  EXPECT_EQ(c.views, (std::array<bool, 3>{true, false, true}));
  EXPECT_EQ(c.out_dir, (dir_ / "elsewhere").lexically_normal());
  o = {};
  o.provider = "http";
  EXPECT_THROW(apply_overrides(c, o), ConfigError);
  EXPECT_THROW(parse_view_list("struct,graph"), ConfigError);
}

TEST_F(PipelineTest, ConfigRejectsUnknownKeysAndBadQuestionLists) {
  auto j = base_json();
  j["train"]["learning_rat"] = 0.1;
  EXPECT_THROW(config(j), ConfigError);
  j = base_json();
  j["views"] = {{"structure_questions", {"only one"}}};
  EXPECT_THROW(config(j).validate(), ConfigError);
}

TEST_F(PipelineTest, TomlConfigMatchesJson) {
  write("run.toml",
        "[dataset]\npath = \"toy.csv\"\nname = \"BBBP\"\ntask_kind = \"classification\"\nlabel_columns = [\"p_np\"]\n"
        "task_question = \"Can the molecule penetrate the blood-brain barrier?\"\n"
        "[rules]\npath = \"toy.rules\"\n[provider]\nkind = \"mock\"\ndim = 8\n"
        "[train]\nseeds = [0]\nmax_epochs = 5\npatience = 5\nhidden_dim = 4\nmlp_widths = [4]\n[output]\ndir = \"run\"\n"
        "[prompts]\ntask_description = \"predict blood-brain barrier penetration\"\n"
        "subset_count = 2\nsubset_size = 3\nsubset_seed = 7\n");
  const auto from_toml = load_config(dir_ / "run.toml");
  EXPECT_EQ(config_to_json(from_toml).dump(), config_to_json(config()).dump());
}

}  // namespace
}  // namespace mvmol::pipeline
