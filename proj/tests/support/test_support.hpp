#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "romanlens/model.hpp"
#include "romanlens/numerics.hpp"
#include "romanlens/tokenizer.hpp"

namespace romanlens::testing {

std::filesystem::path data_dir();
std::filesystem::path data_file(const std::string& relative);

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

ModelConfig tiny_config(std::size_t n_layers, std::size_t dim, std::size_t vocab_size,
                        std::size_t n_heads = 4, std::size_t n_kv_heads = 2,
                        std::size_t mlp_hidden = 0, std::size_t max_seq_len = 256);

std::vector<TokenId> random_tokens(std::mt19937_64& rng, std::size_t n, std::size_t vocab_size);

// Random point of the probability simplex, optionally with some exact zeros.
std::vector<float> random_probs(std::mt19937_64& rng, std::size_t n, bool allow_zeros = false);

Vocabulary fixture_vocab(const std::vector<std::string>& surfaces);

std::string read_text(const std::filesystem::path& path);
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace romanlens::testing
