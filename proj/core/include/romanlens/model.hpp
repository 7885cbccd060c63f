#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "romanlens/numerics.hpp"
#include "romanlens/tokenizer.hpp"

namespace romanlens {

// Llama-family decoder configuration. `n_layers` counts transformer blocks,
// so a trace holds n_layers + 1 residual states per position.
struct ModelConfig {
  std::size_t n_layers = 0;
  std::size_t dim = 0;
  std::size_t n_heads = 0;
  std::size_t n_kv_heads = 0;
  std::size_t mlp_hidden = 0;
  std::size_t vocab_size = 0;
  float rope_theta = 10000.0f;
  float norm_eps = 1e-5f;
  std::size_t max_seq_len = 0;

  std::size_t head_dim() const noexcept { return n_heads == 0 ? 0 : dim / n_heads; }
  // Throws Error(Shape) when the invariants do not hold.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

class Checkpoint {
 public:
  Checkpoint(ModelConfig config, std::map<std::string, Tensor> tensors);

  const ModelConfig& config() const noexcept { return config_; }
  const Tensor& tensor(const std::string& name) const;
  const std::map<std::string, Tensor>& tensors() const noexcept { return tensors_; }

  // Canonical names in file order.
  static std::vector<std::string> tensor_names(std::size_t n_layers);
  static std::vector<std::size_t> expected_dims(const ModelConfig& config, const std::string& name);

  // Weights ~ N(0, 1 / fan_in); norm gains ~ 1 + N(0, 0.01). Unembedding rows use
  // `unembed_scale` so tests can control how peaked the lens distributions are.
  static Checkpoint random(const ModelConfig& config, std::uint64_t seed,
                           float unembed_scale = 1.0f);

 private:
  ModelConfig config_;
  std::map<std::string, Tensor> tensors_;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

struct ResidualTrace {
  // (n_layers + 1) x n_positions x dim; index 0 is the embedding output.
  Tensor states;
  // Logits at the last position, decoded from the final state.
  std::vector<float> final_logits;

  std::size_t n_states() const { return states.dim(0); }
  std::size_t n_positions() const { return states.dim(1); }
  std::size_t dim() const { return states.dim(2); }
  std::span<const float> state(std::size_t layer, std::size_t position) const;
};

struct PatchPlan {
  Tensor donor_states;  // (n_layers + 1) x dim
  std::size_t start_layer = 0;
  std::size_t target_position = 0;
};

ResidualTrace forward(std::span<const TokenId> tokens, const Checkpoint& ckpt);

// Like forward, but after every layer j' >= start_layer the residual at
// target_position is replaced by donor_states[j'] before the next layer runs.
ResidualTrace forward_patched(std::span<const TokenId> tokens, const Checkpoint& ckpt,
                              const PatchPlan& plan);

// U * rms_norm(h) with the final norm gain.
std::vector<float> unembed(const Checkpoint& ckpt, std::span<const float> hidden);

}  // namespace romanlens
