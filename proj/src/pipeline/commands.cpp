#include "mvmol/pipeline/commands.hpp"

#include <charconv>
#include <map>

#include "mvmol/common/io.hpp"
#include "mvmol/data/csv.hpp"
#include "mvmol/model/checkpoint.hpp"
#include "mvmol/pipeline/artifacts.hpp"
#include "mvmol/rules/evaluate.hpp"
#include "mvmol/rules/normalize.hpp"
#include "mvmol/rules/prompts.hpp"
#include "mvmol/views/assemble.hpp"
#include "mvmol/views/cache.hpp"

namespace mvmol::pipeline {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& what) { throw PipelineError(what); }

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Inputs {
  data::LoadedDataset dataset;
  data::DatasetSplit split;
};

data::LoadedDataset load_records(const RunConfig& c) {
  try {
    return data::load_dataset(c.dataset_path, c.dataset);
  } catch (const data::DataError& e) {
    fail(c.dataset_path.string() + ": " + e.what());
  }
}

Inputs load_inputs(const RunConfig& c) {
  Inputs in;
  in.dataset = load_records(c);
  try {
    in.split = data::scaffold_split(in.dataset.records, c.split);
  } catch (const data::DataError& e) {
    fail(c.dataset_path.string() + ": " + e.what());
  }
  return in;
}

rules::RuleSet load_ruleset(const fs::path& path) {
  std::string text;
  try {
    text = read_file_text(path);
  } catch (const std::runtime_error& e) {
    fail(e.what());
  }
  rules::RuleSet rs;
  try {
    rs = rules::parse_rules(text);
  } catch (const rules::RuleError& e) {
    std::string where = path.string();
    if (e.line() > 0) where += ":" + std::to_string(e.line());
    if (e.column() > 0) where += ":" + std::to_string(e.column());
    fail(where + ": " + e.what());
  }
  if (rs.empty()) fail(path.string() + ": EmptyRuleSet: the rule file declares no rules");
  return rs;
}

rules::ExternalValues externals_of(const data::Record& r) {
  return rules::ExternalValues(r.externals.begin(), r.externals.end());
}

const std::array<fs::path, 3> view_paths(const RunLayout& layout) {
  return {layout.structure_view(), layout.task_view(), layout.rule_features()};
}

constexpr std::array<const char*, 3> kUpstream{"embed", "embed", "featurize"};

/// Full-dataset table from the stage artifacts; inactive views get zero columns.
model::FeatureTable build_table(const RunConfig& c, const Inputs& in, const RunLayout& layout) {
  const std::size_t n = in.dataset.records.size();
  model::FeatureTable t;
  const auto paths = view_paths(layout);
  for (std::size_t v = 0; v < 3; ++v) {
    if (!c.views[v]) {
      t.views[v] = model::Matrix(n, 0);
      continue;
    }
    if (!fs::exists(paths[v])) {
      fail("missing " + std::string(model::view_name(v)) + " view artifact " + paths[v].string() + "; run `" +
           kUpstream[v] + "` first");
    }
    t.views[v] = read_matrix(paths[v]);
    if (t.views[v].rows != n) {
      fail(paths[v].string() + " has " + std::to_string(t.views[v].rows) + " rows but the dataset has " +
           std::to_string(n) + " records; rerun `" + kUpstream[v] + "`");
    }
  }
  const std::size_t tasks = c.dataset.task_count();
  t.targets = model::Matrix(n, tasks);
  t.mask.assign(n * tasks, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < tasks; ++k) {
      const auto& label = in.dataset.records[r].labels[k];
      if (label) {
        t.targets(r, k) = *label;
        t.mask[r * tasks + k] = 1;
      }
    }
  }
  return t;
}

model::ModelShape shape_for(const RunConfig& c, const model::FeatureTable& t) {
  model::ModelShape s;
  for (std::size_t v = 0; v < 3; ++v) s.input_dims[v] = t.views[v].cols;
  s.active = c.views;
  s.hidden_dim = c.train.hidden_dim;
  s.mlp_widths = c.train.mlp_widths;
  s.task_count = c.dataset.task_count();
  if (c.dataset.task_kind == model::TaskKind::Regression) {
    if (s.task_count != 1) fail("regression datasets must have exactly one label column");
    s.head = model::HeadKind::LinearScalar;
  } else {
    s.head = s.task_count == 1 ? model::HeadKind::SigmoidScalar : model::HeadKind::SigmoidMultitask;
  }
  return s;
}

nlohmann::ordered_json train_snapshot(const RunConfig& c, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["learning_rate"] = c.train.learning_rate;
  j["beta1"] = c.train.beta1;
  j["beta2"] = c.train.beta2;
  j["adam_eps"] = c.train.adam_eps;
  j["batch_size"] = c.train.batch_size;
  j["max_epochs"] = c.train.max_epochs;
  j["patience"] = c.train.patience;
  j["init_scale"] = c.train.init_scale;
  j["dataset"] = c.dataset.name;
  j["label_columns"] = c.dataset.label_columns;
  return j;
}

model::FusionModel load_seed_model(const RunLayout& layout, std::uint64_t seed, const model::FeatureTable& t,
                                   const RunConfig& c) {
  if (!fs::exists(layout.checkpoint(seed))) {
    fail("missing checkpoint " + layout.checkpoint(seed).string() + "; run `train` first");
  }
  model::FusionModel m;
  try {
    m = model::load_checkpoint(layout.checkpoint(seed), layout.checkpoint_sidecar(seed));
  } catch (const std::exception& e) {
    fail(layout.checkpoint(seed).string() + ": " + e.what());
  }
  for (std::size_t v = 0; v < 3; ++v) {
    if (m.active[v] != c.views[v] || (m.active[v] && m.input_dims[v] != t.views[v].cols)) {
      fail(layout.checkpoint(seed).string() + " was trained with different views than the current config");
    }
  }
  return m;
}

views::EmbedOptions embed_options(const ProviderSettings& s) {
  views::EmbedOptions o;
  o.batch_size = s.batch_size;
  o.max_retries = s.max_retries;
  o.max_in_flight = s.max_in_flight;
  return o;
}

void write_text(const fs::path& path, const std::string& text, std::vector<fs::path>& written) {
  write_file_atomic(path, text);
  written.push_back(path);
}

}  // namespace

// ---- featurize -------------------------------------------------------------

FeaturizeResult cmd_featurize(const RunConfig& c, std::ostream& log) {
  c.validate();
  const RunLayout layout{c.out_dir};
  const Inputs in = load_inputs(c);
  const auto& records = in.dataset.records;
  std::vector<fs::path> artifacts;

  write_text(layout.rejects(), data::rejects_csv(in.dataset.rejects), artifacts);
  nlohmann::ordered_json split;
  split["records"] = records.size();
  split["fractions"] = {c.split.train, c.split.valid, c.split.test};
  split["train"] = in.split.train;
  split["valid"] = in.split.valid;
  split["test"] = in.split.test;
  write_json(layout.split(), split);
  artifacts.push_back(layout.split());

  FeaturizeResult result{records.size(), in.dataset.rejects.size(), 0, in.split.train.size(), in.split.valid.size(),
                         in.split.test.size()};
  std::vector<fs::path> inputs{c.dataset_path};

  if (!c.rules_path.empty()) {
    const rules::RuleSet rs = load_ruleset(c.rules_path);
    inputs.push_back(c.rules_path);
    std::vector<rules::RuleFeatureVector> raw;
    raw.reserve(records.size());
    for (const auto& rec : records) {
      try {
        raw.push_back(rules::evaluate_rules(rs, rec.molecule, externals_of(rec)));
      } catch (const rules::RuleError& e) {
        fail(c.dataset_path.string() + ":" + std::to_string(rec.line) + " (" + rec.smiles + "): " + e.what());
      }
    }
    std::vector<rules::RuleFeatureVector> train_rows;
    for (std::size_t i : in.split.train) train_rows.push_back(raw[i]);
    const auto stats = rules::fit_normalization(rs, train_rows);

    model::Matrix raw_m(records.size(), rs.size()), norm_m(records.size(), rs.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto norm = rules::apply_normalization(stats, raw[r]);
      std::copy(raw[r].values.begin(), raw[r].values.end(), raw_m.row(r).begin());
      std::copy(norm.values.begin(), norm.values.end(), norm_m.row(r).begin());
    }
    write_matrix(layout.rule_raw(), raw_m);
    write_matrix(layout.rule_features(), norm_m);
    nlohmann::ordered_json ns;
    ns["fitted_on"] = "train";
    ns["rule_count"] = stats.rule_count;
    std::vector<std::string> ids;
    for (const auto& rule : rs.rules) ids.push_back(rule.id);
    ns["rule_ids"] = ids;
    ns["columns"] = stats.columns;
    ns["mean"] = stats.mean;
    ns["std"] = stats.std;
    write_json(layout.normalization(), ns);
    write_json(layout.ruleset_json(), rules::ruleset_to_json(rs));
    artifacts.insert(artifacts.end(),
                     {layout.rule_raw(), layout.rule_features(), layout.normalization(), layout.ruleset_json()});
    result.rules = rs.size();
  }

  log << "featurize: " << result.records << " records, " << result.rejects << " rejected, " << result.rules
      << " rule features; split " << result.train << "/" << result.valid << "/" << result.test << "\n";
  if (result.rejects > 0) {
    log << "warning: " << result.rejects << " row(s) rejected, see " << layout.rejects().string() << "\n";
  }
  record_stage(layout, "featurize", config_to_json(c), inputs, artifacts);
  return result;
}

// ---- embed -----------------------------------------------------------------

std::unique_ptr<views::EmbeddingProvider> make_provider(const ProviderSettings& s) {
  if (s.kind == "mock") return std::make_unique<views::MockProvider>(s.dim, s.seed);
  views::HttpProviderConfig hc;
  hc.url = expand_env(s.url);
  hc.model = expand_env(s.model);
  hc.auth_env = s.auth_env;
  hc.timeout = std::chrono::seconds(s.timeout_s);
  return std::make_unique<views::HttpProvider>(hc);
}

EmbedResult cmd_embed(const RunConfig& c, std::ostream& log, views::EmbeddingProvider* provider) {
  c.validate();
  const RunLayout layout{c.out_dir};
  if (!c.views[0] && !c.views[1]) {
    log << "embed: structure and task views are both disabled, nothing to do\n";
    return {};
  }
  const data::LoadedDataset ds = load_records(c);
  const std::size_t n = ds.records.size();
  std::unique_ptr<views::EmbeddingProvider> owned;
  if (!provider) {
    owned = make_provider(c.provider);
    provider = owned.get();
  }
  views::EmbeddingCache cache(c.provider.cache_dir.empty() ? layout.cache() : c.provider.cache_dir);
  views::Embedder embedder(*provider, &cache, embed_options(c.provider));
  std::vector<fs::path> artifacts;

  try {
    if (c.views[0]) {
      std::vector<std::string> prompts;
      prompts.reserve(3 * n);
      for (const auto& rec : ds.records) {
        const auto p = c.structure_questions.empty() ? views::build_structure_prompts(rec.smiles)
                                                     : views::build_structure_prompts(rec.smiles, c.structure_questions);
        prompts.insert(prompts.end(), p.begin(), p.end());
      }
      const auto emb = embedder.embed(prompts, views::View::Structure);
      model::Matrix m;
      for (std::size_t r = 0; r < n; ++r) {
        const auto v = views::assemble_structure_view(std::span(emb).subspan(3 * r, 3)).vector;
        if (r == 0) m = model::Matrix(n, v.size());
        std::copy(v.begin(), v.end(), m.row(r).begin());
      }
      write_matrix(layout.structure_view(), m);
      artifacts.push_back(layout.structure_view());
    }
    if (c.views[1]) {
      const std::string question = c.effective_task_question();
      if (question.empty()) fail("the task view needs a task question ([views] task_question or dataset task_question)");
      std::vector<std::string> prompts;
      prompts.reserve(n);
      for (const auto& rec : ds.records) prompts.push_back(views::build_task_prompt(rec.smiles, question, c.wrapper));
      const auto emb = embedder.embed(prompts, views::View::Task);
      model::Matrix m(n, emb.front().dim);
      for (std::size_t r = 0; r < n; ++r) std::copy(emb[r].vector.begin(), emb[r].vector.end(), m.row(r).begin());
      write_matrix(layout.task_view(), m);
      artifacts.push_back(layout.task_view());
    }
  } catch (const views::EmbedError& e) {
    const auto& s = embedder.stats();
    fail(std::string(e.what()) + " (after " + std::to_string(s.remote_calls) + " provider call(s), " +
         std::to_string(s.retries) + " retry(ies))");
  }
  cache.flush();

  const auto& s = embedder.stats();
  log << "embed: " << n << " molecules, " << s.prompts << " prompts, " << s.cache_hits << " cache hits, "
      << s.remote_calls << " provider calls, " << s.retries << " retries, " << s.new_entries << " new cache entries\n";
  record_stage(layout, "embed", config_to_json(c), {c.dataset_path}, artifacts);
  return {n, s};
}

// ---- train -----------------------------------------------------------------

std::vector<TrainSeedResult> cmd_train(const RunConfig& c, std::ostream& log) {
  c.validate();
  const RunLayout layout{c.out_dir};
  const Inputs in = load_inputs(c);
  const model::FeatureTable full = build_table(c, in, layout);
  const model::FeatureTable train_t = full.subset(in.split.train);
  const model::FeatureTable valid_t = full.subset(in.split.valid);
  const model::ModelShape shape = shape_for(c, full);

  std::vector<TrainSeedResult> results;
  std::vector<fs::path> artifacts;
  for (std::uint64_t seed : c.seeds) {
    model::TrainConfig tc = c.train;
    tc.seed = seed;
    model::TrainResult tr;
    try {
      tr = model::train(model::initialize_model(shape, seed, tc.init_scale), train_t, valid_t, tc);
    } catch (const model::ModelError& e) {
      fail("seed " + std::to_string(seed) + ": " + e.what());
    }
    fs::create_directories(layout.seed_dir(seed));
    model::save_checkpoint(tr.model, layout.checkpoint(seed), layout.checkpoint_sidecar(seed), train_snapshot(c, seed));
    std::string lines, timing;
    for (const auto& rec : tr.log) {
      lines += model::log_line(rec, tr.metric_name) + "\n";
      timing += "{\"epoch\":" + std::to_string(rec.epoch) + ",\"wall_ms\":" + fmt(rec.wall_ms) + "}\n";
    }
    write_file_atomic(layout.train_log(seed), lines);
    write_file_atomic(layout.timing_log(seed), timing);
    artifacts.insert(artifacts.end(),
                     {layout.checkpoint(seed), layout.checkpoint_sidecar(seed), layout.train_log(seed)});
    results.push_back({seed, tr.log.size(), tr.best_epoch, tr.best_metric, tr.metric_name});
    log << "train: seed " << seed << ", " << tr.log.size() << " epochs, best " << tr.metric_name << " "
        << fmt(tr.best_metric) << " at epoch " << tr.best_epoch << (tr.stopped_early ? " (early stop)" : "") << "\n";
  }
  record_stage(layout, "train", config_to_json(c), {c.dataset_path}, artifacts);
  return results;
}

// ---- evaluate --------------------------------------------------------------

EvaluateResult cmd_evaluate(const RunConfig& c, std::ostream& log) {
  c.validate();
  const RunLayout layout{c.out_dir};
  const Inputs in = load_inputs(c);
  const model::FeatureTable full = build_table(c, in, layout);
  const model::FeatureTable test_t = full.subset(in.split.test);

  EvaluateResult result;
  std::vector<double> means;
  std::vector<fs::path> artifacts;
  std::map<std::string, std::vector<double>> per_task;
  for (std::uint64_t seed : c.seeds) {
    const auto m = load_seed_model(layout, seed, full, c);
    auto report = data::evaluate_model(m, test_t, c.dataset.label_columns);
    result.metric = report.metric;
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["split"] = "test";
    j["molecules"] = test_t.rows();
    const auto body = data::report_to_json(report);
    for (auto& [k, v] : body.items()) j[k] = v;
    write_json(layout.seed_metrics(seed), j);
    artifacts.push_back(layout.seed_metrics(seed));
    for (const auto& t : report.tasks) {
      if (t.value) per_task[t.task].push_back(*t.value);
    }
    for (const auto& t : report.tasks) {
      if (!t.flag.empty()) log << "warning: seed " << seed << ", task " << t.task << " not evaluable (" << t.flag << ")\n";
    }
    if (report.mean) means.push_back(*report.mean);
    result.per_seed.push_back(std::move(report));
  }
  if (means.empty()) fail("no task in the test split has both classes; nothing to report");
  result.summary = data::summarize_seeds(means);

  nlohmann::ordered_json j;
  j["metric"] = result.metric;
  j["split"] = "test";
  j["seeds"] = c.seeds;
  j["per_seed"] = result.summary.values;
  j["mean"] = result.summary.mean;
  j["std"] = result.summary.std;
  auto tasks = nlohmann::ordered_json::array();
  for (const auto& name : c.dataset.label_columns) {
    nlohmann::ordered_json t;
    t["task"] = name;
    const auto it = per_task.find(name);
    if (it == per_task.end()) {
      t["mean"] = nullptr;
      t["std"] = nullptr;
      t["seeds_evaluable"] = 0;
    } else {
      const auto s = data::summarize_seeds(it->second);
      t["mean"] = s.mean;
      t["std"] = s.std;
      t["seeds_evaluable"] = it->second.size();
    }
    tasks.push_back(std::move(t));
  }
  j["tasks"] = tasks;
  write_json(layout.metrics(), j);
  artifacts.push_back(layout.metrics());
  log << "evaluate: test " << result.metric << " " << fmt(result.summary.mean) << " +- " << fmt(result.summary.std)
      << " over " << means.size() << " seed(s)\n";
  record_stage(layout, "evaluate", config_to_json(c), {c.dataset_path}, artifacts);
  return result;
}

// ---- contributions ---------------------------------------------------------

std::vector<model::ContributionReport> cmd_contributions(const RunConfig& c, std::ostream& log) {
  c.validate();
  const RunLayout layout{c.out_dir};
  const Inputs in = load_inputs(c);
  const model::FeatureTable full = build_table(c, in, layout);
  std::vector<model::ContributionReport> out;
  std::vector<fs::path> artifacts;
  for (std::uint64_t seed : c.seeds) {
    const auto m = load_seed_model(layout, seed, full, c);
    auto report = model::component_contributions(m, full);
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["molecules"] = full.rows();
    nlohmann::ordered_json mean, active;
    for (std::size_t v = 0; v < 3; ++v) {
      mean[std::string(model::view_name(v))] = report.mean[v];
      active[std::string(model::view_name(v))] = report.active[v];
    }
    j["active"] = active;
    j["mean"] = mean;
    write_json(layout.contributions(seed), j);

    std::string csv = "row,line,smiles,structure,task,rule\n";
    for (std::size_t r = 0; r < full.rows(); ++r) {
      const auto& rec = in.dataset.records[r];
      const auto& a = report.per_molecule[r];
      csv += data::csv_line({std::to_string(r), std::to_string(rec.line), rec.smiles, fmt(a[0]), fmt(a[1]), fmt(a[2])}) +
             "\n";
    }
    write_file_atomic(layout.contributions_csv(seed), csv);
    artifacts.insert(artifacts.end(), {layout.contributions(seed), layout.contributions_csv(seed)});
    log << "contributions: seed " << seed << ", structure " << fmt(report.mean[0]) << ", task " << fmt(report.mean[1])
        << ", rule " << fmt(report.mean[2]) << "\n";
    out.push_back(std::move(report));
  }
  record_stage(layout, "contributions", config_to_json(c), {c.dataset_path}, artifacts);
  return out;
}

// ---- prompts ---------------------------------------------------------------

PromptKind parse_prompt_kind(std::string_view text) {
  if (text == "structure") return PromptKind::Structure;
  if (text == "task") return PromptKind::Task;
  if (text == "rules-sci") return PromptKind::RulesScientific;
  if (text == "rules-data") return PromptKind::RulesData;
  fail("unknown prompt kind '" + std::string(text) + "' (expected structure, task, rules-sci, rules-data)");
}

std::vector<fs::path> cmd_prompts(const RunConfig& c, PromptKind kind, std::ostream& log,
                                  const std::optional<std::string>& smiles) {
  const RunLayout layout{c.out_dir};
  const fs::path dir = layout.prompts();
  std::vector<fs::path> written;
  std::vector<fs::path> inputs;

  auto molecules = [&]() {
    std::vector<std::pair<std::string, std::string>> out;  // file stem, smiles
    if (smiles) {
      out.emplace_back("input", *smiles);
      return out;
    }
    const auto ds = load_records(c);
    inputs.push_back(c.dataset_path);
    for (std::size_t r = 0; r < ds.records.size(); ++r) out.emplace_back("mol" + std::to_string(r), ds.records[r].smiles);
    return out;
  };

  try {
    switch (kind) {
      case PromptKind::Structure:
        for (const auto& [stem, s] : molecules()) {
          const auto p = c.structure_questions.empty() ? views::build_structure_prompts(s)
                                                       : views::build_structure_prompts(s, c.structure_questions);
          for (std::size_t k = 0; k < p.size(); ++k) {
            write_text(dir / "structure" / (stem + "_q" + std::to_string(k + 1) + ".txt"), p[k], written);
          }
        }
        break;
      case PromptKind::Task: {
        const std::string question = c.effective_task_question();
        if (question.empty()) fail("task prompts need a task question ([views] task_question or dataset task_question)");
        for (const auto& [stem, s] : molecules()) {
          write_text(dir / "task" / (stem + ".txt"), views::build_task_prompt(s, question, c.wrapper), written);
        }
        break;
      }
      case PromptKind::RulesScientific:
        if (c.prompts.task_description.empty()) fail("rules-sci needs [prompts] task_description");
        write_text(dir / "rules_scientific.txt",
                   rules::build_scientific_rule_prompt(c.prompts.task_description, c.prompts.rule_count), written);
        break;
      case PromptKind::RulesData: {
        // Subsets come from the training split only, so test labels never reach the rule author.
        const Inputs in = load_inputs(c);
        inputs.push_back(c.dataset_path);
        std::vector<rules::LabeledPair> pairs;
        for (std::size_t i : in.split.train) {
          const auto& rec = in.dataset.records[i];
          if (rec.labels[0]) pairs.push_back({rec.smiles, *rec.labels[0]});
        }
        const std::string meaning = c.prompts.label_meaning.empty() ? c.dataset.name : c.prompts.label_meaning;
        if (meaning.empty()) fail("rules-data needs [prompts] label_meaning or a dataset name");
        const auto subsets =
            rules::sample_data_subsets(pairs, c.prompts.subset_count, c.prompts.subset_size, c.prompts.subset_seed);
        for (std::size_t k = 0; k < subsets.size(); ++k) {
          write_text(dir / ("rules_data_" + std::to_string(k + 1) + ".txt"),
                     rules::build_data_rule_prompt(subsets[k], meaning, c.prompts.data_rule_count), written);
        }
        break;
      }
    }
  } catch (const rules::RuleError& e) {
    fail(e.what());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  log << "prompts: wrote " << written.size() << " file(s) under " << dir.string() << "\n";
  record_stage(layout, "prompts", config_to_json(c), inputs, written);
  return written;
}

}  // namespace mvmol::pipeline
