#include "mvmol/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace mvmol::model {
namespace {

constexpr char kMagic[8] = {'M', 'V', 'M', 'O', 'L', 'C', 'K', 'P'};

[[noreturn]] void bad(const std::string& what) { throw ModelError(ModelErrorKind::BadCheckpoint, what); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Reader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (bytes.size() - pos < n) bad("checkpoint file is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[pos + i];
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[pos + i];
    pos += 8;
    return std::bit_cast<double>(v);
  }
  std::string text(std::size_t n) {
    need(n);
    std::string s(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
    return s;
  }
};

// Row/column shape of a tensor as stored: biases are n x 1.
std::pair<std::size_t, std::size_t> stored_shape(const FusionModel& m, const std::string& name, std::size_t size) {
  auto matrix_shape = [&](const Matrix& w) { return std::pair{w.rows, w.cols}; };
  for (std::size_t v = 0; v < kViewCount; ++v) {
    if (name == "proj." + std::string(view_name(v)) + ".weight") return matrix_shape(m.proj_weight[v]);
  }
  if (name == "gate.weight") return matrix_shape(m.gate_weight);
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    if (name == "mlp." + std::to_string(l) + ".weight") return matrix_shape(m.layers[l].weight);
  }
  return {size, 1};
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const FusionModel& model) {
  validate_shapes(model);
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kCheckpointVersion);
  std::uint32_t count = 0;
  for_each_parameter(model, [&](const std::string&, std::span<const double>) { ++count; });
  put_u32(out, count);
  for_each_parameter(model, [&](const std::string& name, std::span<const double> p) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    const auto [rows, cols] = stored_shape(model, name, p.size());
    put_u32(out, static_cast<std::uint32_t>(rows));
    put_u32(out, static_cast<std::uint32_t>(cols));
    for (double x : p) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
  });
  return out;
}

nlohmann::ordered_json checkpoint_sidecar(const FusionModel& model, const nlohmann::ordered_json& config) {
  validate_shapes(model);
  nlohmann::ordered_json j;
  j["format"] = "mvmol-checkpoint";
  j["version"] = kCheckpointVersion;
  j["hidden_dim"] = model.hidden_dim;
  j["task_kind"] = std::string(to_string(model.task_kind()));
  j["head"] = std::string(to_string(model.head));
  j["task_count"] = model.task_count;
  nlohmann::ordered_json views = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < kViewCount; ++v) {
    views.push_back({{"name", std::string(view_name(v))}, {"active", model.active[v]}, {"input_dim", model.input_dims[v]}});
  }
  j["views"] = std::move(views);
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const auto& l : model.layers) {
    layers.push_back({{"in", l.weight.cols}, {"out", l.weight.rows}, {"activation", std::string(to_string(l.activation))}});
  }
  j["layers"] = std::move(layers);
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for_each_parameter(model, [&](const std::string& name, std::span<const double> p) {
    const auto [rows, cols] = stored_shape(model, name, p.size());
    tensors.push_back({{"name", name}, {"rows", rows}, {"cols", cols}});
  });
  j["tensors"] = std::move(tensors);
  j["parameter_count"] = parameter_count(model);
  j["config"] = config.is_null() ? nlohmann::ordered_json::object() : config;
  return j;
}

FusionModel decode_checkpoint(const std::vector<std::uint8_t>& bytes, const nlohmann::json& sidecar) {
  FusionModel m;
  try {
    if (sidecar.at("format") != "mvmol-checkpoint") bad("sidecar is not an mvmol checkpoint");
    if (sidecar.at("version").get<std::uint32_t>() != kCheckpointVersion) bad("unsupported sidecar version");
    m.hidden_dim = sidecar.at("hidden_dim").get<std::size_t>();
    m.head = parse_head_kind(sidecar.at("head").get<std::string>());
    m.task_count = sidecar.at("task_count").get<std::size_t>();
    const auto& views = sidecar.at("views");
    if (views.size() != kViewCount) bad("sidecar must list three views");
    for (std::size_t v = 0; v < kViewCount; ++v) {
      m.active[v] = views[v].at("active").get<bool>();
      m.input_dims[v] = views[v].at("input_dim").get<std::size_t>();
      if (m.active[v]) {
        m.proj_weight[v] = Matrix(m.hidden_dim, m.input_dims[v]);
        m.proj_bias[v].assign(m.hidden_dim, 0.0);
      }
    }
    m.gate_weight = Matrix(kViewCount, kViewCount * m.hidden_dim);
    m.gate_bias.assign(kViewCount, 0.0);
    for (const auto& l : sidecar.at("layers")) {
      const auto out = l.at("out").get<std::size_t>();
      m.layers.push_back({Matrix(out, l.at("in").get<std::size_t>()), std::vector<double>(out, 0.0),
                          parse_activation(l.at("activation").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed sidecar: ") + e.what());
  }
  try {
    validate_shapes(m);
  } catch (const ModelError& e) {
    bad(std::string("sidecar shapes inconsistent: ") + e.what());
  }

  Reader r{bytes};
  if (r.text(8) != std::string(kMagic, 8)) bad("bad magic");
  if (r.u32() != kCheckpointVersion) bad("unsupported checkpoint version");
  std::size_t expected = 0;
  for_each_parameter(m, [&](const std::string&, std::span<double>) { ++expected; });
  if (r.u32() != expected) bad("tensor count differs from sidecar");
  for_each_parameter(m, [&](const std::string& name, std::span<double> p) {
    const std::string got = r.text(r.u32());
    if (got != name) bad("expected tensor '" + name + "', found '" + got + "'");
    const std::size_t rows = r.u32();
    const std::size_t cols = r.u32();
    if (std::pair{rows, cols} != stored_shape(m, name, p.size())) bad("shape of '" + name + "' differs from sidecar");
    for (double& x : p) x = r.f64();
  });
  if (r.pos != bytes.size()) bad("trailing bytes after last tensor");
  return m;
}

void save_checkpoint(const FusionModel& model, const std::filesystem::path& bin_path,
                     const std::filesystem::path& json_path, const nlohmann::ordered_json& config) {
  const auto bytes = encode_checkpoint(model);
  std::ofstream bin(bin_path, std::ios::binary | std::ios::trunc);
  bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  std::ofstream json(json_path, std::ios::trunc);
  json << checkpoint_sidecar(model, config).dump(2) << "\n";
  if (!bin || !json) throw ModelError(ModelErrorKind::BadCheckpoint, "cannot write " + bin_path.string());
}

FusionModel load_checkpoint(const std::filesystem::path& bin_path, const std::filesystem::path& json_path) {
  std::ifstream bin(bin_path, std::ios::binary);
  std::ifstream json(json_path);
  if (!bin || !json) bad("cannot open " + bin_path.string() + " / " + json_path.string());
  const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(bin), {});
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("sidecar is not JSON: ") + e.what());
  }
  return decode_checkpoint(bytes, sidecar);
}

}  // namespace mvmol::model
