#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <nlohmann/json.hpp>

#include "mvmol/views/provider.hpp"

namespace mvmol::views {
namespace {

constexpr std::size_t kExcerptLength = 200;

std::string excerpt(const std::string& body) {
  return body.size() <= kExcerptLength ? body : body.substr(0, kExcerptLength) + "...";
}

// Retry-After is either delta-seconds or an HTTP date; only the former is honored.
std::optional<std::chrono::milliseconds> parse_retry_after(const httplib::Result& res) {
  if (!res->has_header("Retry-After")) return std::nullopt;
  const std::string value = res->get_header_value("Retry-After");
  char* end = nullptr;
  const double seconds = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || seconds < 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

}  // namespace

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
  const std::size_t scheme_end = config_.url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("provider url needs a scheme: " + config_.url);
  }
  const std::size_t path_start = config_.url.find('/', scheme_end + 3);
  origin_ = config_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
}

std::string HttpProvider::provider_id() const { return "http:" + config_.url; }

std::vector<std::vector<double>> HttpProvider::embed_batch(std::span<const std::string> prompts) {
  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  if (!config_.auth_env.empty()) {
    if (const char* token = std::getenv(config_.auth_env.c_str())) client.set_bearer_token_auth(token);
  }

  nlohmann::json body;
  body["model"] = config_.model;
  body["input"] = std::vector<std::string>(prompts.begin(), prompts.end());
  const auto res = client.Post(path_, body.dump(), "application/json");
  if (!res) {
    throw EmbedError(EmbedErrorKind::ProviderUnreachable,
                     config_.url + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 429) {
    throw EmbedError(EmbedErrorKind::RateLimited, "HTTP 429 from " + config_.url, res->status,
                     parse_retry_after(res));
  }
  if (res->status < 200 || res->status >= 300) {
    throw EmbedError(EmbedErrorKind::ProviderError,
                     "HTTP " + std::to_string(res->status) + ": " + excerpt(res->body), res->status);
  }

  std::vector<std::vector<double>> out(prompts.size());
  std::vector<bool> seen(prompts.size(), false);
  try {
    const auto reply = nlohmann::json::parse(res->body);
    const auto& data = reply.at("data");
    if (data.size() != prompts.size()) {
      throw EmbedError(EmbedErrorKind::WrongCount, "sent " + std::to_string(prompts.size()) +
                                                       " prompts, received " + std::to_string(data.size()),
                       res->status);
    }
    for (const auto& item : data) {
      const auto index = item.at("index").get<std::size_t>();
      if (index >= out.size() || seen[index]) {
        throw EmbedError(EmbedErrorKind::ProviderError, "bad or repeated index " + std::to_string(index),
                         res->status);
      }
      seen[index] = true;
      out[index] = item.at("embedding").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw EmbedError(EmbedErrorKind::ProviderError,
                     std::string("malformed response (") + e.what() + "): " + excerpt(res->body), res->status);
  }
  return out;
}

}  // namespace mvmol::views
