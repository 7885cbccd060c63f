#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "romanlens/model.hpp"
#include "romanlens/numerics.hpp"
#include "romanlens/tokenizer.hpp"

namespace romanlens {

/// Layer x position grid of decoded next-token distributions.
struct LensGrid {
  std::size_t n_layers = 0;  // rows, equals trace.n_states()
  std::size_t n_positions = 0;
  std::size_t vocab_size = 0;
  Tensor probs;  // n_layers x n_positions x vocab_size
  std::vector<double> entropies;
  std::vector<TokenId> argmax_tokens;

  Distribution distribution(std::size_t layer, std::size_t position) const;
  std::span<const float> probs_at(std::size_t layer, std::size_t position) const;
  double entropy_at(std::size_t layer, std::size_t position) const;
  TokenId argmax_at(std::size_t layer, std::size_t position) const;
};

LensGrid logit_lens(const ResidualTrace& trace, const Checkpoint& ckpt);

// Per-layer distributions at a single position; row j matches the grid cell
// (j, position) without decoding every other position.
std::vector<Distribution> lens_column(const ResidualTrace& trace, const Checkpoint& ckpt,
                                      std::size_t position);

struct LayerWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// Blue (low entropy) to red (high entropy) heatmap, layers descending.
void emit_heatmap(const LensGrid& grid, LayerWindow window, const Vocabulary& v,
                  const std::filesystem::path& out);

// (layer, position, argmax_id, argmax_prob, entropy)
void write_lens_csv(const LensGrid& grid, const std::filesystem::path& out);

struct Rgb {
  int r = 0, g = 0, b = 0;
};
Rgb entropy_color(double entropy, std::size_t vocab_size);

}  // namespace romanlens
