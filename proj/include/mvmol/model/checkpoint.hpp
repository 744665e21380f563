#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/model/fusion_model.hpp"

namespace mvmol::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary tensor file: "MVMOLCKP", u32 version, u32 tensor count, then per tensor
/// u32 name length, name bytes, u32 rows, u32 cols and rows*cols little-endian f64.
std::vector<std::uint8_t> encode_checkpoint(const FusionModel& model);

/// Shapes, head and layer activations; `config` is stored verbatim under "config".
nlohmann::ordered_json checkpoint_sidecar(const FusionModel& model, const nlohmann::ordered_json& config = {});

/// Rebuilds a model from the sidecar and checks every tensor header against it.
/// Throws ModelError(BadCheckpoint) on any disagreement.
FusionModel decode_checkpoint(const std::vector<std::uint8_t>& bytes, const nlohmann::json& sidecar);

void save_checkpoint(const FusionModel& model, const std::filesystem::path& bin_path,
                     const std::filesystem::path& json_path, const nlohmann::ordered_json& config = {});
FusionModel load_checkpoint(const std::filesystem::path& bin_path, const std::filesystem::path& json_path);

}  // namespace mvmol::model
