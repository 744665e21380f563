#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace mvmol {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> bytes);
Sha256Digest sha256(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Digest of a file's contents; throws std::runtime_error if unreadable.
Sha256Digest sha256_file(const std::string& path);

}  // namespace mvmol
