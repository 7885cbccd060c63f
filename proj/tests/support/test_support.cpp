#include "test_support.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "romanlens/error.hpp"

namespace romanlens::testing {

std::filesystem::path data_dir() { return ROMANLENS_DATA_DIR; }

std::filesystem::path data_file(const std::string& relative) { return data_dir() / relative; }

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("romanlens-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

ModelConfig tiny_config(std::size_t n_layers, std::size_t dim, std::size_t vocab_size,
                        std::size_t n_heads, std::size_t n_kv_heads, std::size_t mlp_hidden,
                        std::size_t max_seq_len) {
  ModelConfig c;
  c.n_layers = n_layers;
  c.dim = dim;
  c.n_heads = n_heads;
  c.n_kv_heads = n_kv_heads;
  c.mlp_hidden = mlp_hidden == 0 ? 2 * dim : mlp_hidden;
  c.vocab_size = vocab_size;
  c.max_seq_len = max_seq_len;
  return c;
}

std::vector<TokenId> random_tokens(std::mt19937_64& rng, std::size_t n, std::size_t vocab_size) {
  std::uniform_int_distribution<TokenId> pick(0, static_cast<TokenId>(vocab_size - 1));
  std::vector<TokenId> out(n);
  for (auto& t : out) t = pick(rng);
  return out;
}

std::vector<float> random_probs(std::mt19937_64& rng, std::size_t n, bool allow_zeros) {
  std::exponential_distribution<double> draw(1.0);
  std::bernoulli_distribution zero(allow_zeros ? 0.25 : 0.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = zero(rng) ? 0.0 : draw(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(w[i] / total);
  return out;
}

Vocabulary fixture_vocab(const std::vector<std::string>& surfaces) {
  return Vocabulary(std::string(kDefaultSpaceMarker), surfaces);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace romanlens::testing
