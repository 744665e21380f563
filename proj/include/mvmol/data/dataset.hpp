#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/chem/molecule.hpp"
#include "mvmol/model/fusion_model.hpp"

namespace mvmol::data {

enum class DataErrorKind { MissingColumn, FileUnreadable, AllRowsRejected, TooFewScaffolds, InvalidSpec };

std::string_view to_string(DataErrorKind kind);

class DataError : public std::runtime_error {
 public:
  DataError(DataErrorKind kind, const std::string& message);
  DataErrorKind kind() const { return kind_; }

 private:
  DataErrorKind kind_;
};

struct DatasetSpec {
  std::string name;
  model::TaskKind task_kind = model::TaskKind::Classification;
  std::string smiles_column = "smiles";
  std::vector<std::string> label_columns;
  std::vector<std::string> external_columns;
  std::string missing_label_token;  // an empty cell always counts as missing too
  char delimiter = ',';
  std::string task_question;        // used by the task-view prompt

  std::size_t task_count() const { return label_columns.size(); }
  /// Throws DataError(InvalidSpec).
  void validate() const;
};

/// Keys: name, task_kind, smiles_column, label_columns, external_columns,
/// missing_label_token, delimiter (one character), task_question.
DatasetSpec dataset_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json dataset_spec_to_json(const DatasetSpec& spec);

/// .json files are read as JSON; anything else as TOML with the same keys.
DatasetSpec load_dataset_spec(const std::filesystem::path& path);

struct Record {
  std::string smiles;
  std::vector<std::optional<double>> labels;
  std::map<std::string, double, std::less<>> externals;
  std::string scaffold_key;
  std::size_t line = 0;  // physical line in the source file, 0 if synthetic
  chem::Molecule molecule;
};

/// Parses the SMILES and fills molecule and scaffold_key. Throws chem::SmilesError.
Record make_record(std::string smiles, std::vector<std::optional<double>> labels = {});

struct Reject {
  std::size_t line = 0;
  std::string smiles;
  std::string error;
};

struct LoadedDataset {
  std::vector<Record> records;
  std::vector<Reject> rejects;
  std::size_t file_rows = 0;  // data rows in the file, header excluded
};

/// Rows with unparseable SMILES, a classification label outside {0,1}, a
/// non-numeric label or a missing external value go to rejects.
LoadedDataset parse_dataset(std::string_view csv_text, const DatasetSpec& spec);
LoadedDataset load_dataset(const std::filesystem::path& path, const DatasetSpec& spec);

/// "line,smiles,error" with a header row.
std::string rejects_csv(const std::vector<Reject>& rejects);

}  // namespace mvmol::data
