#include "mvmol/pipeline/artifacts.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstring>
#include <ctime>
#include <stdexcept>

#include "mvmol/common/digest.hpp"
#include "mvmol/common/io.hpp"

namespace mvmol::pipeline {
namespace {

namespace fs = std::filesystem;

constexpr char kMagic[8] = {'M', 'V', 'M', 'O', 'L', 'M', 'A', 'T'};
constexpr std::uint32_t kMatrixVersion = 1;

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  const auto bits = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::little) {
    out.insert(out.end(), bits.begin(), bits.end());
  } else {
    out.insert(out.end(), bits.rbegin(), bits.rend());
  }
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  if (in.size() - pos < sizeof(T)) throw std::runtime_error("matrix file truncated");
  std::array<std::uint8_t, sizeof(T)> bits;
  std::memcpy(bits.data(), in.data() + pos, sizeof(T));
  if constexpr (std::endian::native != std::endian::little) std::reverse(bits.begin(), bits.end());
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::uint8_t> encode_matrix(const model::Matrix& m) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  put(out, kMatrixVersion);
  put(out, static_cast<std::uint64_t>(m.rows));
  put(out, static_cast<std::uint64_t>(m.cols));
  out.reserve(out.size() + m.data.size() * 8);
  for (double v : m.data) put(out, v);
  return out;
}

model::Matrix decode_matrix(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw std::runtime_error("not a matrix file");
  std::size_t pos = 8;
  if (get<std::uint32_t>(bytes, pos) != kMatrixVersion) throw std::runtime_error("unsupported matrix file version");
  const auto rows = get<std::uint64_t>(bytes, pos);
  const auto cols = get<std::uint64_t>(bytes, pos);
  if (cols != 0 && rows > (bytes.size() - pos) / 8 / cols) throw std::runtime_error("matrix file truncated");
  if (bytes.size() - pos != rows * cols * 8) throw std::runtime_error("matrix file size disagrees with its header");
  model::Matrix m(rows, cols);
  for (double& v : m.data) v = get<double>(bytes, pos);
  return m;
}

void write_matrix(const fs::path& path, const model::Matrix& m) {
  const auto bytes = encode_matrix(m);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

model::Matrix read_matrix(const fs::path& path) {
  const std::string text = read_file_text(path);
  try {
    return decode_matrix(std::vector<std::uint8_t>(text.begin(), text.end()));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

std::string file_sha256(const fs::path& path) { return to_hex(sha256_file(path.string())); }

void record_stage(const RunLayout& layout, const std::string& stage, const nlohmann::ordered_json& config,
                  const std::vector<fs::path>& inputs, const std::vector<fs::path>& artifacts) {
  nlohmann::ordered_json manifest;
  if (fs::exists(layout.manifest())) {
    try {
      manifest = nlohmann::ordered_json::parse(read_file_text(layout.manifest()));
    } catch (const std::exception&) {
      manifest = nlohmann::ordered_json::object();  // unreadable manifest: start over
    }
  }
  manifest["format"] = "mvmol-run-manifest";
  manifest["version"] = 1;
  manifest["tool_version"] = kToolVersion;
  manifest["config"] = config;
  nlohmann::ordered_json entry;
  entry["completed_at"] = utc_now();
  auto in = nlohmann::ordered_json::object();
  for (const auto& p : inputs) in[p.string()] = file_sha256(p);
  entry["inputs"] = in;
  auto out = nlohmann::ordered_json::object();
  for (const auto& p : artifacts) {
    out[fs::relative(p, layout.root).generic_string()] = file_sha256(p);
  }
  entry["artifacts"] = out;
  manifest["stages"][stage] = entry;
  write_json(layout.manifest(), manifest);
}

}  // namespace mvmol::pipeline
