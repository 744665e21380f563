#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mvmol/common/digest.hpp"
#include "mvmol/views/provider.hpp"

namespace mvmol::views {

std::string_view to_string(EmbedErrorKind kind) {
  switch (kind) {
    case EmbedErrorKind::ProviderUnreachable: return "ProviderUnreachable";
    case EmbedErrorKind::ProviderError: return "ProviderError";
    case EmbedErrorKind::DimMismatch: return "DimMismatch";
    case EmbedErrorKind::RateLimited: return "RateLimited";
    case EmbedErrorKind::WrongCount: return "WrongCount";
  }
  return "EmbedError";
}

EmbedError::EmbedError(EmbedErrorKind kind, const std::string& message, int status,
                       std::optional<std::chrono::milliseconds> retry_after)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      status_(status),
      retry_after_(retry_after) {}

namespace {

void put_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

// Open interval (0, 1): never feeds log(0).
double open_unit(std::uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

std::vector<double> mock_embed(std::string_view prompt, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("mock_embed: dim must be positive");
  std::vector<double> v;
  v.reserve(dim + 3);
  std::vector<std::uint8_t> message;
  for (std::uint64_t block = 0; v.size() < dim; ++block) {
    message.clear();
    put_u64_le(message, seed);
    put_u64_le(message, block);
    message.insert(message.end(), prompt.begin(), prompt.end());
    const Sha256Digest d = sha256(message);
    // Four words, two Box-Muller pairs.
    for (int pair = 0; pair < 2; ++pair) {
      const double u1 = open_unit(get_u64_le(d.data() + 16 * pair));
      const double u2 = open_unit(get_u64_le(d.data() + 16 * pair + 8));
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double theta = 2.0 * std::numbers::pi * u2;
      v.push_back(r * std::cos(theta));
      v.push_back(r * std::sin(theta));
    }
  }
  v.resize(dim);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

MockProvider::MockProvider(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw std::invalid_argument("mock provider dim must be positive");
}

std::string MockProvider::model_id() const {
  return "mock-d" + std::to_string(dim_) + "-s" + std::to_string(seed_);
}

std::vector<std::vector<double>> MockProvider::embed_batch(std::span<const std::string> prompts) {
  ++calls_;
  prompts_ += prompts.size();
  std::vector<std::vector<double>> out;
  out.reserve(prompts.size());
  for (const auto& p : prompts) out.push_back(mock_embed(p, dim_, seed_));
  return out;
}

}  // namespace mvmol::views
