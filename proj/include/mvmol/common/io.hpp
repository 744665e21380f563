#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace mvmol {

/// Whole file as bytes. Throws std::runtime_error naming the path.
std::string read_file_text(const std::filesystem::path& path);

/// Writes to a temporary sibling, then renames over the target. Creates the
/// parent directory if needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// TOML document converted to JSON (tables become objects, arrays stay
/// arrays). Throws std::runtime_error with the TOML parse position.
nlohmann::json toml_to_json(std::string_view text, const std::string& source_name = "");

}  // namespace mvmol
