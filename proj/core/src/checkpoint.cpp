#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "romanlens/error.hpp"
#include "romanlens/model.hpp"

namespace romanlens {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'R', 'L', 'N', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T read_le(const char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<unsigned char*>(&value);
    std::reverse(bytes, bytes + sizeof(T));
  }
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<unsigned char*>(&value);
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

std::string layer_name(std::size_t i, const char* leaf) {
  return "layers." + std::to_string(i) + "." + leaf;
}

json config_to_json(const ModelConfig& c) {
  return {{"n_layers", c.n_layers},       {"dim", c.dim},
          {"n_heads", c.n_heads},         {"n_kv_heads", c.n_kv_heads},
          {"mlp_hidden", c.mlp_hidden},   {"vocab_size", c.vocab_size},
          {"rope_theta", c.rope_theta},   {"norm_eps", c.norm_eps},
          {"max_seq_len", c.max_seq_len}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  try {
    c.n_layers = j.at("n_layers").get<std::size_t>();
    c.dim = j.at("dim").get<std::size_t>();
    c.n_heads = j.at("n_heads").get<std::size_t>();
    c.n_kv_heads = j.at("n_kv_heads").get<std::size_t>();
    c.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
    c.vocab_size = j.at("vocab_size").get<std::size_t>();
    c.rope_theta = j.at("rope_theta").get<float>();
    c.norm_eps = j.at("norm_eps").get<float>();
    c.max_seq_len = j.at("max_seq_len").get<std::size_t>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("checkpoint config is incomplete: ") + e.what());
  }
  return c;
}

}  // namespace

void ModelConfig::validate() const {
  if (dim == 0 || n_heads == 0 || n_kv_heads == 0 || mlp_hidden == 0 || vocab_size == 0 ||
      max_seq_len == 0) {
    fail(ErrorKind::Shape, "model config fields must be positive");
  }
  if (dim % n_heads != 0) fail(ErrorKind::Shape, "dim must be divisible by n_heads");
  if (n_heads % n_kv_heads != 0) fail(ErrorKind::Shape, "n_heads must be divisible by n_kv_heads");
  if (head_dim() % 2 != 0) fail(ErrorKind::Shape, "head dim must be even for rotary embeddings");
  if (!(rope_theta > 0.0f) || !(norm_eps > 0.0f)) {
    fail(ErrorKind::Shape, "rope_theta and norm_eps must be positive");
  }
}

std::vector<std::string> Checkpoint::tensor_names(std::size_t n_layers) {
  std::vector<std::string> names{"tok_embed"};
  for (std::size_t i = 0; i < n_layers; ++i) {
    for (const char* leaf : {"attn_norm", "wq", "wk", "wv", "wo", "mlp_norm", "w_gate", "w_up",
                             "w_down"}) {
      names.push_back(layer_name(i, leaf));
    }
  }
  names.emplace_back("final_norm");
  names.emplace_back("unembed");
  return names;
}

std::vector<std::size_t> Checkpoint::expected_dims(const ModelConfig& c, const std::string& name) {
  const std::size_t d = c.dim;
  const std::size_t kv = c.n_kv_heads * c.head_dim();
  if (name == "tok_embed" || name == "unembed") return {c.vocab_size, d};
  if (name == "final_norm") return {d};
  const auto dot = name.rfind('.');
  const std::string leaf = dot == std::string::npos ? name : name.substr(dot + 1);
  if (leaf == "attn_norm" || leaf == "mlp_norm") return {d};
  if (leaf == "wq" || leaf == "wo") return {d, d};
  if (leaf == "wk" || leaf == "wv") return {kv, d};
  if (leaf == "w_gate" || leaf == "w_up") return {c.mlp_hidden, d};
  if (leaf == "w_down") return {d, c.mlp_hidden};
  fail(ErrorKind::Format, "unknown tensor name '" + name + "'");
}

Checkpoint::Checkpoint(ModelConfig config, std::map<std::string, Tensor> tensors)
    : config_(config), tensors_(std::move(tensors)) {
  config_.validate();
  const auto names = tensor_names(config_.n_layers);
  const std::set<std::string> expected(names.begin(), names.end());
  for (const auto& [name, t] : tensors_) {
    if (!expected.count(name)) fail(ErrorKind::Format, "unexpected tensor '" + name + "'");
  }
  for (const auto& name : names) {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) {
      fail(ErrorKind::IncompleteCheckpoint, "checkpoint is missing tensor '" + name + "'");
    }
    if (it->second.dims() != expected_dims(config_, name)) {
      fail(ErrorKind::Shape, "tensor '" + name + "' has dims inconsistent with the config");
    }
    if (!it->second.all_finite()) {
      fail(ErrorKind::NumericInput, "tensor '" + name + "' contains non-finite values");
    }
  }
}

const Tensor& Checkpoint::tensor(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    fail(ErrorKind::IncompleteCheckpoint, "checkpoint is missing tensor '" + name + "'");
  }
  return it->second;
}

Checkpoint Checkpoint::random(const ModelConfig& config, std::uint64_t seed, float unembed_scale) {
  config.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::map<std::string, Tensor> tensors;
  for (const auto& name : tensor_names(config.n_layers)) {
    Tensor t(expected_dims(config, name));
    const bool is_norm = t.rank() == 1;
    float scale = 1.0f;
    if (name == "unembed") {
      scale = unembed_scale / std::sqrt(static_cast<float>(config.dim));
    } else if (!is_norm && name != "tok_embed") {
      scale = 1.0f / std::sqrt(static_cast<float>(t.dim(1)));
    }
    for (float& x : t.data()) {
      x = is_norm ? 1.0f + 0.1f * normal(rng) : scale * normal(rng);
    }
    tensors.emplace(name, std::move(t));
  }
  return Checkpoint(config, std::move(tensors));
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto names = Checkpoint::tensor_names(ckpt.config().n_layers);
  json directory = json::array();
  std::uint64_t offset = 0;
  for (const auto& name : names) {
    const Tensor& t = ckpt.tensor(name);
    directory.push_back({{"name", name}, {"dims", t.dims()}, {"byte_offset", offset}});
    offset += t.size() * sizeof(float);
  }
  const std::string header =
      json{{"config", config_to_json(ckpt.config())}, {"tensors", directory}}.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint64_t>(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& name : names) {
    for (float x : ckpt.tensor(name).data()) write_le<float>(out, x);
  }
  if (!out) fail(ErrorKind::Io, "failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open checkpoint " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  constexpr std::size_t kPreamble = 4 + 4 + 8;
  if (bytes.size() < kPreamble) fail(ErrorKind::Format, "checkpoint is truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorKind::Format, "checkpoint has wrong magic bytes");
  }
  const auto version = read_le<std::uint32_t>(bytes.data() + 4);
  if (version != kVersion) {
    fail(ErrorKind::Format, "unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = read_le<std::uint64_t>(bytes.data() + 8);
  if (header_len > bytes.size() - kPreamble) fail(ErrorKind::Format, "checkpoint header is truncated");

  json header;
  try {
    header = json::parse(bytes.substr(kPreamble, header_len));
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  if (!header.is_object() || !header.contains("config") || !header.contains("tensors") ||
      !header["tensors"].is_array()) {
    fail(ErrorKind::Format, "checkpoint header needs 'config' and 'tensors'");
  }
  const ModelConfig config = config_from_json(header["config"]);
  config.validate();

  const std::size_t payload_start = kPreamble + header_len;
  const std::size_t payload_size = bytes.size() - payload_start;
  std::map<std::string, Tensor> tensors;
  for (const auto& entry : header["tensors"]) {
    std::string name;
    std::vector<std::size_t> dims;
    std::uint64_t offset = 0;
    try {
      name = entry.at("name").get<std::string>();
      dims = entry.at("dims").get<std::vector<std::size_t>>();
      offset = entry.at("byte_offset").get<std::uint64_t>();
    } catch (const json::exception& e) {
      fail(ErrorKind::Format, std::string("bad tensor directory entry: ") + e.what());
    }
    if (dims != Checkpoint::expected_dims(config, name)) {
      fail(ErrorKind::Shape, "tensor '" + name + "' has dims inconsistent with the config");
    }
    std::size_t count = 1;
    for (auto d : dims) count *= d;
    const std::uint64_t nbytes = count * sizeof(float);
    if (offset > payload_size || nbytes > payload_size - offset) {
      fail(ErrorKind::Format, "checkpoint is truncated inside tensor '" + name + "'");
    }
    std::vector<float> data(count);
    const char* src = bytes.data() + payload_start + offset;
    for (std::size_t i = 0; i < count; ++i) data[i] = read_le<float>(src + i * sizeof(float));
    if (!tensors.emplace(name, Tensor(std::move(dims), std::move(data))).second) {
      fail(ErrorKind::Format, "duplicate tensor '" + name + "'");
    }
  }
  return Checkpoint(config, std::move(tensors));
}

}  // namespace romanlens
