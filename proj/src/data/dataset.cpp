#include "mvmol/data/dataset.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "mvmol/chem/scaffold.hpp"
#include "mvmol/chem/smiles.hpp"
#include "mvmol/common/io.hpp"
#include "mvmol/data/csv.hpp"

namespace mvmol::data {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void invalid_spec(const std::string& what) { throw DataError(DataErrorKind::InvalidSpec, "dataset spec: " + what); }

}  // namespace

std::string_view to_string(DataErrorKind kind) {
  switch (kind) {
    case DataErrorKind::MissingColumn: return "MissingColumn";
    case DataErrorKind::FileUnreadable: return "FileUnreadable";
    case DataErrorKind::AllRowsRejected: return "AllRowsRejected";
    case DataErrorKind::TooFewScaffolds: return "TooFewScaffolds";
    case DataErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "?";
}

DataError::DataError(DataErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void DatasetSpec::validate() const {
  if (label_columns.empty()) invalid_spec("at least one label column is required");
  if (smiles_column.empty()) invalid_spec("smiles_column is empty");
  std::set<std::string> seen{smiles_column};
  for (const auto& c : label_columns) {
    if (!seen.insert(c).second) invalid_spec("column '" + c + "' listed twice");
  }
  for (const auto& c : external_columns) {
    if (!seen.insert(c).second) invalid_spec("column '" + c + "' listed twice");
  }
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') invalid_spec("unusable delimiter");
}

DatasetSpec dataset_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) invalid_spec("expected an object");
  static const std::set<std::string> known{"name",          "task_kind",           "smiles_column",
                                           "label_columns", "external_columns",    "missing_label_token",
                                           "delimiter",     "task_question"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) invalid_spec("unknown key '" + key + "'");
  }
  DatasetSpec spec;
  try {
    spec.name = j.value("name", std::string{});
    spec.task_kind = model::parse_task_kind(j.value("task_kind", std::string("classification")));
    spec.smiles_column = j.value("smiles_column", std::string("smiles"));
    if (j.contains("label_columns")) {
      const auto& lc = j.at("label_columns");
      spec.label_columns = lc.is_string() ? std::vector<std::string>{lc.get<std::string>()}
                                          : lc.get<std::vector<std::string>>();
    }
    spec.external_columns = j.value("external_columns", std::vector<std::string>{});
    spec.missing_label_token = j.value("missing_label_token", std::string{});
    spec.task_question = j.value("task_question", std::string{});
    const std::string delim = j.value("delimiter", std::string(","));
    if (delim == "\\t" || delim == "tab") {
      spec.delimiter = '\t';
    } else if (delim.size() == 1) {
      spec.delimiter = delim[0];
    } else {
      invalid_spec("delimiter must be a single character");
    }
  } catch (const nlohmann::json::exception& e) {
    invalid_spec(e.what());
  } catch (const std::invalid_argument& e) {
    invalid_spec(e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::ordered_json dataset_spec_to_json(const DatasetSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["task_kind"] = model::to_string(spec.task_kind);
  j["smiles_column"] = spec.smiles_column;
  j["label_columns"] = spec.label_columns;
  j["external_columns"] = spec.external_columns;
  j["missing_label_token"] = spec.missing_label_token;
  j["delimiter"] = std::string(1, spec.delimiter);
  j["task_question"] = spec.task_question;
  return j;
}

DatasetSpec load_dataset_spec(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file_text(path);
  } catch (const std::runtime_error& e) {
    throw DataError(DataErrorKind::FileUnreadable, e.what());
  }
  try {
    if (path.extension() == ".json") return dataset_spec_from_json(nlohmann::json::parse(text));
    return dataset_spec_from_json(toml_to_json(text, path.string()));
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    invalid_spec(path.string() + ": " + e.what());
  }
  return {};
}

Record make_record(std::string smiles, std::vector<std::optional<double>> labels) {
  Record r;
  r.molecule = chem::parse_smiles(smiles);
  r.scaffold_key = chem::canonical_key(chem::murcko_scaffold(r.molecule));
  r.smiles = std::move(smiles);
  r.labels = std::move(labels);
  return r;
}

LoadedDataset parse_dataset(std::string_view csv_text, const DatasetSpec& spec) {
  spec.validate();
  CsvTable table;
  try {
    table = parse_csv(csv_text, spec.delimiter);
  } catch (const std::runtime_error& e) {
    throw DataError(DataErrorKind::FileUnreadable, e.what());
  }
  auto require = [&](const std::string& name) {
    const std::size_t idx = table.column(name);
    if (idx == std::string::npos) throw DataError(DataErrorKind::MissingColumn, "column '" + name + "' not in header");
    return idx;
  };
  const std::size_t smiles_col = require(spec.smiles_column);
  std::vector<std::size_t> label_cols, ext_cols;
  for (const auto& c : spec.label_columns) label_cols.push_back(require(c));
  for (const auto& c : spec.external_columns) ext_cols.push_back(require(c));

  LoadedDataset out;
  out.file_rows = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    const std::string smiles(trim(row[smiles_col]));
    auto reject = [&](const std::string& error) { out.rejects.push_back({line, smiles, error}); };

    std::vector<std::optional<double>> labels;
    std::string problem;
    for (std::size_t t = 0; t < label_cols.size() && problem.empty(); ++t) {
      const std::string_view cell = trim(row[label_cols[t]]);
      if (cell.empty() || (!spec.missing_label_token.empty() && cell == spec.missing_label_token)) {
        labels.emplace_back();
        continue;
      }
      const auto v = parse_real(cell);
      if (!v) {
        problem = "label '" + spec.label_columns[t] + "' is not a number: " + std::string(cell);
      } else if (spec.task_kind == model::TaskKind::Classification && *v != 0.0 && *v != 1.0) {
        problem = "label '" + spec.label_columns[t] + "' is not 0 or 1: " + std::string(cell);
      } else {
        labels.push_back(*v);
      }
    }
    std::map<std::string, double, std::less<>> externals;
    for (std::size_t e = 0; e < ext_cols.size() && problem.empty(); ++e) {
      const auto v = parse_real(row[ext_cols[e]]);
      if (!v) {
        problem = "external '" + spec.external_columns[e] + "' is missing or not a number";
      } else {
        externals.emplace(spec.external_columns[e], *v);
      }
    }
    if (!problem.empty()) {
      reject(problem);
      continue;
    }
    try {
      Record rec = make_record(smiles, std::move(labels));
      rec.externals = std::move(externals);
      rec.line = line;
      out.records.push_back(std::move(rec));
    } catch (const chem::SmilesError& e) {
      reject(e.what());
    }
  }
  if (out.records.empty()) {
    throw DataError(DataErrorKind::AllRowsRejected,
                    std::to_string(out.rejects.size()) + " of " + std::to_string(out.file_rows) + " rows rejected");
  }
  return out;
}

LoadedDataset load_dataset(const std::filesystem::path& path, const DatasetSpec& spec) {
  std::string text;
  try {
    text = read_file_text(path);
  } catch (const std::runtime_error& e) {
    throw DataError(DataErrorKind::FileUnreadable, e.what());
  }
  return parse_dataset(text, spec);
}

std::string rejects_csv(const std::vector<Reject>& rejects) {
  std::string out = "line,smiles,error\n";
  for (const auto& r : rejects) out += csv_line({std::to_string(r.line), r.smiles, r.error}) + "\n";
  return out;
}

}  // namespace mvmol::data
