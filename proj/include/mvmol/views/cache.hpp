#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mvmol/common/digest.hpp"

namespace mvmol::views {

struct CacheKey {
  std::string provider_id;
  std::string model_id;
  Sha256Digest prompt_hash{};

  /// Hex SHA-256 of provider_id, NUL, model_id, NUL, prompt_hash bytes.
  std::string file_stem() const;
};

/// Content-addressed store: <dir>/<file_stem>.bin per entry plus <dir>/index.json.
/// Loads are lock-free file reads; stores are serialized and atomic (write + rename).
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path dir);
  ~EmbeddingCache();

  EmbeddingCache(const EmbeddingCache&) = delete;
  EmbeddingCache& operator=(const EmbeddingCache&) = delete;

  std::optional<std::vector<double>> load(const CacheKey& key) const;
  void store(const CacheKey& key, const std::vector<double>& vector);

  /// Dimension recorded for a (provider, model) pair, if any entry exists.
  std::optional<std::size_t> known_dim(const std::string& provider_id, const std::string& model_id) const;

  std::size_t size() const;
  /// Rewrites index.json. Also called from the destructor.
  void flush();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct IndexEntry {
    std::string provider_id;
    std::string model_id;
    std::string prompt_sha256;
    std::size_t dim = 0;
    std::string created_at;
  };

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<std::string, IndexEntry> index_;
  bool dirty_ = false;
};

/// Entry file codec, exposed for the format tests.
std::vector<std::uint8_t> encode_cache_entry(const std::vector<double>& vector);
std::vector<double> decode_cache_entry(const std::vector<std::uint8_t>& bytes);

}  // namespace mvmol::views
