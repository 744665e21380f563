#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/model/matrix.hpp"

namespace mvmol::pipeline {

inline constexpr const char* kToolVersion = "0.1.0";

/// "MVMOLMAT", u32 version 1, u64 rows, u64 cols, rows*cols little-endian f64.
std::vector<std::uint8_t> encode_matrix(const model::Matrix& m);
model::Matrix decode_matrix(const std::vector<std::uint8_t>& bytes);  // throws std::runtime_error

void write_matrix(const std::filesystem::path& path, const model::Matrix& m);
model::Matrix read_matrix(const std::filesystem::path& path);

/// Pretty JSON with a trailing newline, written atomically.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

std::string file_sha256(const std::filesystem::path& path);

/// Layout of one run directory.
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path split() const { return root / "split.json"; }
  std::filesystem::path rejects() const { return root / "rejects.csv"; }
  std::filesystem::path rule_raw() const { return root / "features" / "rule_raw.bin"; }
  std::filesystem::path rule_features() const { return root / "features" / "rule.bin"; }
  std::filesystem::path normalization() const { return root / "features" / "normalization.json"; }
  std::filesystem::path ruleset_json() const { return root / "features" / "rules.json"; }
  std::filesystem::path structure_view() const { return root / "views" / "structure.bin"; }
  std::filesystem::path task_view() const { return root / "views" / "task.bin"; }
  std::filesystem::path cache() const { return root / "cache"; }
  std::filesystem::path seed_dir(std::uint64_t seed) const { return root / "models" / ("seed_" + std::to_string(seed)); }
  std::filesystem::path checkpoint(std::uint64_t seed) const { return seed_dir(seed) / "model.bin"; }
  std::filesystem::path checkpoint_sidecar(std::uint64_t seed) const { return seed_dir(seed) / "model.json"; }
  std::filesystem::path train_log(std::uint64_t seed) const { return seed_dir(seed) / "train_log.jsonl"; }
  std::filesystem::path timing_log(std::uint64_t seed) const { return seed_dir(seed) / "timing.jsonl"; }
  std::filesystem::path seed_metrics(std::uint64_t seed) const { return seed_dir(seed) / "metrics.json"; }
  std::filesystem::path metrics() const { return root / "metrics.json"; }
  std::filesystem::path contributions(std::uint64_t seed) const { return seed_dir(seed) / "contributions.json"; }
  std::filesystem::path contributions_csv(std::uint64_t seed) const { return seed_dir(seed) / "contributions.csv"; }
  std::filesystem::path prompts() const { return root / "prompts"; }
};

/// Merges one stage into manifest.json: the resolved config snapshot, input
/// digests and each artifact's path and digest. Timestamps live only here.
void record_stage(const RunLayout& layout, const std::string& stage, const nlohmann::ordered_json& config,
                  const std::vector<std::filesystem::path>& inputs,
                  const std::vector<std::filesystem::path>& artifacts);

}  // namespace mvmol::pipeline
