#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvmol::views {

enum class EmbedErrorKind { ProviderUnreachable, ProviderError, DimMismatch, RateLimited, WrongCount };

std::string_view to_string(EmbedErrorKind kind);

class EmbedError : public std::runtime_error {
 public:
  EmbedError(EmbedErrorKind kind, const std::string& message, int status = 0,
             std::optional<std::chrono::milliseconds> retry_after = std::nullopt);

  EmbedErrorKind kind() const { return kind_; }
  /// HTTP status for ProviderError / RateLimited, else 0.
  int status() const { return status_; }
  std::optional<std::chrono::milliseconds> retry_after() const { return retry_after_; }

 private:
  EmbedErrorKind kind_;
  int status_;
  std::optional<std::chrono::milliseconds> retry_after_;
};

/// One remote round trip per embed_batch call. Implementations must be safe to
/// call from several threads at once.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string provider_id() const = 0;
  virtual std::string model_id() const = 0;
  /// One vector per prompt, same order.
  virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> prompts) = 0;
};

/// Unit-norm pseudo-embedding derived from SHA-256 blocks over (seed, block, prompt).
std::vector<double> mock_embed(std::string_view prompt, std::size_t dim, std::uint64_t seed);

class MockProvider : public EmbeddingProvider {
 public:
  MockProvider(std::size_t dim, std::uint64_t seed);

  std::string provider_id() const override { return "mock"; }
  std::string model_id() const override;
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> prompts) override;

  /// Number of embed_batch calls and prompts served, for cache tests.
  std::size_t call_count() const { return calls_.load(); }
  std::size_t prompt_count() const { return prompts_.load(); }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> prompts_{0};
};

struct HttpProviderConfig {
  std::string url;             // e.g. https://api.example.com/v1/embeddings
  std::string model;
  std::string auth_env;        // name of the variable holding the bearer token; may be empty
  std::chrono::seconds timeout{60};
};

/// POST {"model": m, "input": [...]} and read {"data": [{"index", "embedding"}]}.
class HttpProvider : public EmbeddingProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

  std::string provider_id() const override;
  std::string model_id() const override { return config_.model; }
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> prompts) override;

 private:
  HttpProviderConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace mvmol::views
