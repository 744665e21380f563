#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvmol/common/digest.hpp"
#include "mvmol/views/cache.hpp"
#include "mvmol/views/prompts.hpp"
#include "mvmol/views/provider.hpp"

namespace mvmol::views {

struct ViewEmbedding {
  std::vector<double> vector;
  std::size_t dim = 0;
  std::string provider_id;
  std::string model_id;
  Sha256Digest prompt_hash{};
  View view = View::Structure;
};

struct EmbedOptions {
  std::size_t batch_size = 32;
  std::size_t max_retries = 5;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_cap{30000};
  std::size_t max_in_flight = 1;
  /// Replaced in tests to observe waits without sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct EmbedStats {
  std::size_t prompts = 0;
  std::size_t cache_hits = 0;
  std::size_t remote_calls = 0;  // embed_batch invocations, retries included
  std::size_t retries = 0;
  std::size_t new_entries = 0;
};

/// Cache-first embedding with retry. Remembers the dimension of its provider's
/// model across calls and raises DimMismatch if a response disagrees.
class Embedder {
 public:
  Embedder(EmbeddingProvider& provider, EmbeddingCache* cache, EmbedOptions options = {});

  std::vector<ViewEmbedding> embed(std::span<const std::string> prompts, View view);

  const EmbedStats& stats() const { return stats_; }

 private:
  std::vector<std::vector<double>> call_with_retry(std::span<const std::string> batch);
  void check_dim(std::size_t dim);
  std::mutex& stats_mutex() { return mutex_; }

  EmbeddingProvider& provider_;
  EmbeddingCache* cache_;
  EmbedOptions options_;
  EmbedStats stats_;
  std::optional<std::size_t> dim_;
  std::mutex mutex_;  // guards stats_ and dim_ while batches run concurrently
};

/// One-shot helper around Embedder.
std::vector<ViewEmbedding> embed(EmbeddingProvider& provider, std::span<const std::string> prompts,
                                 View view, EmbeddingCache* cache = nullptr, EmbedOptions options = {});

}  // namespace mvmol::views
