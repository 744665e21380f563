#include "mvmol/views/cache.hpp"

#include <bit>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mvmol::views {
namespace {

constexpr char kMagic[8] = {'M', 'V', 'M', 'O', 'L', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path, bool& found) {
  std::ifstream in(path, std::ios::binary);
  found = static_cast<bool>(in);
  if (!found) return {};
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::string CacheKey::file_stem() const {
  std::vector<std::uint8_t> bytes;
  bytes.insert(bytes.end(), provider_id.begin(), provider_id.end());
  bytes.push_back(0);
  bytes.insert(bytes.end(), model_id.begin(), model_id.end());
  bytes.push_back(0);
  bytes.insert(bytes.end(), prompt_hash.begin(), prompt_hash.end());
  return to_hex(sha256(bytes));
}

std::vector<std::uint8_t> encode_cache_entry(const std::vector<double>& vector) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(vector.size()));
  for (double x : vector) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  return out;
}

std::vector<double> decode_cache_entry(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw std::runtime_error("cache entry: bad magic");
  }
  if (get_u32(bytes.data() + 8) != kVersion) throw std::runtime_error("cache entry: unsupported version");
  const std::uint32_t dim = get_u32(bytes.data() + 12);
  if (bytes.size() != 16 + 8 * static_cast<std::size_t>(dim)) {
    throw std::runtime_error("cache entry: truncated");
  }
  std::vector<double> out(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[16 + 8 * k + i];
    out[k] = std::bit_cast<double>(bits);
  }
  return out;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  std::ifstream in(dir_ / "index.json");
  if (!in) return;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& [stem, e] : j.at("entries").items()) {
      index_[stem] = {e.at("provider"), e.at("model"), e.at("prompt_sha256"), e.at("dim"),
                      e.value("created_at", "")};
    }
  } catch (const nlohmann::json::exception& e) {
    // A damaged index only loses dimension hints; entries stay readable.
    index_.clear();
  }
}

EmbeddingCache::~EmbeddingCache() {
  try {
    flush();
  } catch (...) {
  }
}

std::optional<std::vector<double>> EmbeddingCache::load(const CacheKey& key) const {
  bool found = false;
  const auto bytes = read_file(dir_ / (key.file_stem() + ".bin"), found);
  if (!found) return std::nullopt;
  return decode_cache_entry(bytes);
}

void EmbeddingCache::store(const CacheKey& key, const std::vector<double>& vector) {
  const std::string stem = key.file_stem();
  const auto bytes = encode_cache_entry(vector);
  std::ostringstream tmp_name;
  tmp_name << stem << ".tmp." << std::this_thread::get_id();
  const auto tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
  }
  std::lock_guard lock(mutex_);
  std::filesystem::rename(tmp, dir_ / (stem + ".bin"));
  auto [it, inserted] = index_.try_emplace(stem);
  if (inserted) {
    it->second = {key.provider_id, key.model_id, to_hex(key.prompt_hash), vector.size(), utc_now()};
    dirty_ = true;
  }
}

std::optional<std::size_t> EmbeddingCache::known_dim(const std::string& provider_id,
                                                     const std::string& model_id) const {
  std::lock_guard lock(mutex_);
  for (const auto& [stem, e] : index_) {
    if (e.provider_id == provider_id && e.model_id == model_id) return e.dim;
  }
  return std::nullopt;
}

std::size_t EmbeddingCache::size() const {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() == ".bin") ++n;
  }
  return n;
}

void EmbeddingCache::flush() {
  std::lock_guard lock(mutex_);
  if (!dirty_) return;
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (const auto& [stem, e] : index_) {
    entries[stem] = {{"provider", e.provider_id},
                     {"model", e.model_id},
                     {"prompt_sha256", e.prompt_sha256},
                     {"dim", e.dim},
                     {"created_at", e.created_at}};
  }
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["entries"] = std::move(entries);
  const auto tmp = dir_ / "index.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write cache index");
  }
  std::filesystem::rename(tmp, dir_ / "index.json");
  dirty_ = false;
}

}  // namespace mvmol::views
