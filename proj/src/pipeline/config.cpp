#include "mvmol/pipeline/config.hpp"

#include <cstdlib>
#include <set>

#include "mvmol/common/io.hpp"

namespace mvmol::pipeline {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

fs::path resolve(const fs::path& base, const std::string& value) {
  if (value.empty()) return {};
  fs::path p(value);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

void reject_unknown(const nlohmann::json& section, const std::string& name, const std::set<std::string>& known) {
  if (!section.is_object()) fail("[" + name + "] must be a table");
  for (const auto& [key, _] : section.items()) {
    if (!known.contains(key)) fail("unknown key '" + key + "' in [" + name + "]");
  }
}

template <typename T>
void read(const nlohmann::json& section, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(std::string("key '") + key + "' has the wrong type");
  }
}

void read_train(const nlohmann::json& t, RunConfig& c) {
  reject_unknown(t, "train", {"seeds", "learning_rate", "beta1", "beta2", "adam_eps", "batch_size", "max_epochs",
                              "patience", "init_scale", "hidden_dim", "mlp_widths"});
  read(t, "seeds", c.seeds);
  read(t, "learning_rate", c.train.learning_rate);
  read(t, "beta1", c.train.beta1);
  read(t, "beta2", c.train.beta2);
  read(t, "adam_eps", c.train.adam_eps);
  read(t, "batch_size", c.train.batch_size);
  read(t, "max_epochs", c.train.max_epochs);
  read(t, "patience", c.train.patience);
  read(t, "init_scale", c.train.init_scale);
  read(t, "hidden_dim", c.train.hidden_dim);
  read(t, "mlp_widths", c.train.mlp_widths);
}

void read_provider(const nlohmann::json& p, const fs::path& base, RunConfig& c) {
  reject_unknown(p, "provider", {"kind", "dim", "seed", "url", "model", "auth_env", "timeout_s", "batch_size",
                                 "max_retries", "max_in_flight", "cache_dir"});
  auto& s = c.provider;
  read(p, "kind", s.kind);
  read(p, "dim", s.dim);
  read(p, "seed", s.seed);
  read(p, "url", s.url);
  read(p, "model", s.model);
  read(p, "auth_env", s.auth_env);
  read(p, "timeout_s", s.timeout_s);
  read(p, "batch_size", s.batch_size);
  read(p, "max_retries", s.max_retries);
  read(p, "max_in_flight", s.max_in_flight);
  std::string cache;
  read(p, "cache_dir", cache);
  s.cache_dir = resolve(base, cache);
  if (s.kind != "mock" && s.kind != "http") fail("provider kind must be \"mock\" or \"http\"");
  if (s.kind == "mock" && s.dim == 0) fail("mock provider dim must be positive");
  if (s.kind == "http" && (s.url.empty() || s.model.empty())) fail("http provider needs url and model");
  if (s.batch_size == 0 || s.max_in_flight == 0) fail("provider batch_size and max_in_flight must be positive");
}

}  // namespace

void RunConfig::validate() const {
  if (!views[0] && !views[1] && !views[2]) fail("at least one view must be enabled");
  if (views[2] && rules_path.empty()) fail("the rule view is enabled but [rules] path is not set");
  if (seeds.empty()) fail("seed list is empty");
  if (!structure_questions.empty() && structure_questions.size() != 3) {
    fail("[views] structure_questions must list exactly 3 questions");
  }
  if (dataset_path.empty()) fail("[dataset] path is required");
  if (out_dir.empty()) fail("[output] dir is required");
  try {
    train.validate();
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

std::string RunConfig::effective_task_question() const {
  return task_question.empty() ? dataset.task_question : task_question;
}

std::array<bool, 3> parse_view_list(std::string_view text) {
  std::array<bool, 3> out{false, false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    if (item == "struct" || item == "structure") {
      out[0] = true;
    } else if (item == "task") {
      out[1] = true;
    } else if (item == "rule" || item == "rules") {
      out[2] = true;
    } else {
      fail("unknown view '" + std::string(item) + "' (expected struct, task, rule)");
    }
    start = end + 1;
  }
  return out;
}

std::string expand_env(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, 2) == "${") {
      const std::size_t close = text.find('}', i + 2);
      if (close == std::string_view::npos) fail("unterminated ${ in '" + std::string(text) + "'");
      const std::string name(text.substr(i + 2, close - i - 2));
      const char* value = std::getenv(name.c_str());
      if (!value) fail("environment variable " + name + " is not set");
      out += value;
      i = close + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

RunConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) fail("expected a table at the top level");
  reject_unknown(j, "top level", {"dataset", "rules", "provider", "views", "train", "split", "output", "prompts"});
  const fs::path base = fs::absolute(base_dir);
  RunConfig c;

  if (!j.contains("dataset")) fail("[dataset] section is required");
  {
    nlohmann::json d = j.at("dataset");
    if (!d.is_object()) fail("[dataset] must be a table");
    std::string path;
    read(d, "path", path);
    c.dataset_path = resolve(base, path);
    std::string spec_file;
    read(d, "spec", spec_file);
    d.erase("path");
    d.erase("spec");
    try {
      if (!spec_file.empty()) {
        if (!d.empty()) fail("[dataset] takes either spec = \"file\" or inline spec keys, not both");
        c.dataset = data::load_dataset_spec(resolve(base, spec_file));
      } else {
        c.dataset = data::dataset_spec_from_json(d);
      }
    } catch (const data::DataError& e) {
      fail(e.what());
    }
  }

  if (j.contains("rules")) {
    const auto& r = j.at("rules");
    reject_unknown(r, "rules", {"path"});
    std::string path;
    read(r, "path", path);
    c.rules_path = resolve(base, path);
  }
  if (j.contains("provider")) read_provider(j.at("provider"), base, c);

  if (j.contains("views")) {
    const auto& v = j.at("views");
    reject_unknown(v, "views", {"structure", "task", "rule", "wrapper", "structure_questions", "task_question"});
    read(v, "structure", c.views[0]);
    read(v, "task", c.views[1]);
    read(v, "rule", c.views[2]);
    std::string wrapper(views::to_string(c.wrapper));
    read(v, "wrapper", wrapper);
    try {
      c.wrapper = views::parse_wrapper_style(wrapper);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    read(v, "structure_questions", c.structure_questions);
    read(v, "task_question", c.task_question);
  }
  if (j.contains("train")) read_train(j.at("train"), c);

  if (j.contains("split")) {
    const auto& s = j.at("split");
    reject_unknown(s, "split", {"train", "valid", "test"});
    read(s, "train", c.split.train);
    read(s, "valid", c.split.valid);
    read(s, "test", c.split.test);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, "output", {"dir"});
    std::string dir;
    read(o, "dir", dir);
    c.out_dir = resolve(base, dir);
  }
  if (j.contains("prompts")) {
    const auto& p = j.at("prompts");
    reject_unknown(p, "prompts", {"task_description", "rule_count", "label_meaning", "data_rule_count",
                                  "subset_count", "subset_size", "subset_seed"});
    read(p, "task_description", c.prompts.task_description);
    read(p, "rule_count", c.prompts.rule_count);
    read(p, "label_meaning", c.prompts.label_meaning);
    read(p, "data_rule_count", c.prompts.data_rule_count);
    read(p, "subset_count", c.prompts.subset_count);
    read(p, "subset_size", c.prompts.subset_size);
    read(p, "subset_seed", c.prompts.subset_seed);
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file_text(path);
  } catch (const std::runtime_error& e) {
    fail(e.what());
  }
  RunConfig c;
  const fs::path base = fs::absolute(path).parent_path();
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(path.string() + ": " + e.what());
    }
    c = config_from_json(j.contains("config") ? j.at("config") : j, base);
  } else {
    try {
      c = config_from_json(toml_to_json(text, path.string()), base);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::runtime_error& e) {
      fail(e.what());
    }
  }
  c.config_path = fs::absolute(path);
  return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  auto dataset = nlohmann::ordered_json::object();
  dataset["path"] = c.dataset_path.string();
  const auto spec = data::dataset_spec_to_json(c.dataset);
  for (auto& [k, v] : spec.items()) dataset[k] = v;
  j["dataset"] = dataset;
  j["rules"] = {{"path", c.rules_path.string()}};
  const auto& p = c.provider;
  nlohmann::ordered_json prov;
  prov["kind"] = p.kind;
  if (p.kind == "mock") {
    prov["dim"] = p.dim;
    prov["seed"] = p.seed;
  } else {
    prov["url"] = p.url;  // unexpanded
    prov["model"] = p.model;
    prov["auth_env"] = p.auth_env;
    prov["timeout_s"] = p.timeout_s;
  }
  prov["batch_size"] = p.batch_size;
  prov["max_retries"] = p.max_retries;
  prov["max_in_flight"] = p.max_in_flight;
  prov["cache_dir"] = p.cache_dir.string();
  j["provider"] = prov;
  nlohmann::ordered_json v;
  v["structure"] = c.views[0];
  v["task"] = c.views[1];
  v["rule"] = c.views[2];
  v["wrapper"] = std::string(views::to_string(c.wrapper));
  v["structure_questions"] = c.structure_questions;
  v["task_question"] = c.task_question;
  j["views"] = v;
  nlohmann::ordered_json t;
  t["seeds"] = c.seeds;
  t["learning_rate"] = c.train.learning_rate;
  t["beta1"] = c.train.beta1;
  t["beta2"] = c.train.beta2;
  t["adam_eps"] = c.train.adam_eps;
  t["batch_size"] = c.train.batch_size;
  t["max_epochs"] = c.train.max_epochs;
  t["patience"] = c.train.patience;
  t["init_scale"] = c.train.init_scale;
  t["hidden_dim"] = c.train.hidden_dim;
  t["mlp_widths"] = c.train.mlp_widths;
  j["train"] = t;
  j["split"] = {{"train", c.split.train}, {"valid", c.split.valid}, {"test", c.split.test}};
  j["output"] = {{"dir", c.out_dir.string()}};
  nlohmann::ordered_json pr;
  pr["task_description"] = c.prompts.task_description;
  pr["rule_count"] = c.prompts.rule_count;
  pr["label_meaning"] = c.prompts.label_meaning;
  pr["data_rule_count"] = c.prompts.data_rule_count;
  pr["subset_count"] = c.prompts.subset_count;
  pr["subset_size"] = c.prompts.subset_size;
  pr["subset_seed"] = c.prompts.subset_seed;
  j["prompts"] = pr;
  return j;
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.seed) c.seeds = {*o.seed};
  if (o.views) c.views = parse_view_list(*o.views);
  if (o.out) c.out_dir = fs::absolute(*o.out).lexically_normal();
  if (o.provider) {
    if (*o.provider != "mock") fail("--provider accepts only \"mock\"; configure http providers in the file");
    c.provider.kind = "mock";
  }
}

}  // namespace mvmol::pipeline
