#include "reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace romanlens::testing {

namespace {

const float* weights(const Checkpoint& ckpt, std::size_t layer, const char* leaf) {
  return ckpt.tensor("layers." + std::to_string(layer) + "." + leaf).data().data();
}

std::vector<float> norm_row(const float* x, const float* gain, std::size_t d, float eps) {
  double ss = 0.0;
  for (std::size_t t = 0; t < d; ++t) ss += static_cast<double>(x[t]) * x[t];
  const double inv = 1.0 / std::sqrt(ss / static_cast<double>(d) + eps);
  std::vector<float> out(d);
  for (std::size_t t = 0; t < d; ++t) out[t] = static_cast<float>(x[t] * inv * gain[t]);
  return out;
}

std::vector<float> project(const float* w, std::size_t rows, std::size_t cols,
                           const std::vector<float>& x) {
  std::vector<float> y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += static_cast<double>(w[r * cols + c]) * x[c];
    y[r] = static_cast<float>(acc);
  }
  return y;
}

// Rotates pairs (t, t + hd/2) of every head by position-dependent angles.
void rotate(std::vector<float>& v, std::size_t heads, std::size_t hd, std::size_t pos,
            double theta) {
  const std::size_t half = hd / 2;
  for (std::size_t h = 0; h < heads; ++h) {
    float* base = v.data() + h * hd;
    for (std::size_t t = 0; t < half; ++t) {
      const double angle = static_cast<double>(pos) /
                           std::pow(theta, static_cast<double>(2 * t) / static_cast<double>(hd));
      const double a = base[t], b = base[t + half];
      base[t] = static_cast<float>(a * std::cos(angle) - b * std::sin(angle));
      base[t + half] = static_cast<float>(a * std::sin(angle) + b * std::cos(angle));
    }
  }
}

}  // namespace

std::vector<float> reference_block(const Checkpoint& ckpt, std::size_t layer,
                                   std::span<const float> h_in, std::size_t n) {
  const ModelConfig& c = ckpt.config();
  const std::size_t d = c.dim, hd = d / c.n_heads, kvd = c.n_kv_heads * hd;
  std::vector<float> h(h_in.begin(), h_in.end());

  std::vector<std::vector<float>> qs(n), ks(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xn = norm_row(h.data() + i * d, weights(ckpt, layer, "attn_norm"), d, c.norm_eps);
    qs[i] = project(weights(ckpt, layer, "wq"), d, d, xn);
    ks[i] = project(weights(ckpt, layer, "wk"), kvd, d, xn);
    vs[i] = project(weights(ckpt, layer, "wv"), kvd, d, xn);
    rotate(qs[i], c.n_heads, hd, i, c.rope_theta);
    rotate(ks[i], c.n_kv_heads, hd, i, c.rope_theta);
  }
  const std::size_t per_kv = c.n_heads / c.n_kv_heads;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<float> mixed(d);
    for (std::size_t head = 0; head < c.n_heads; ++head) {
      const std::size_t g = head / per_kv;
      std::vector<double> logit(i + 1);
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < hd; ++t) {
          s += static_cast<double>(qs[i][head * hd + t]) * ks[j][g * hd + t];
        }
        logit[j] = s / std::sqrt(static_cast<double>(hd));
      }
      const double top = *std::max_element(logit.begin(), logit.end());
      double z = 0.0;
      for (auto& l : logit) {
        l = std::exp(l - top);
        z += l;
      }
      for (std::size_t t = 0; t < hd; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += logit[j] * vs[j][g * hd + t];
        mixed[head * hd + t] = static_cast<float>(acc / z);
      }
    }
    const auto out = project(weights(ckpt, layer, "wo"), d, d, mixed);
    for (std::size_t t = 0; t < d; ++t) h[i * d + t] += out[t];
  }

  const std::size_t m = c.mlp_hidden;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xn = norm_row(h.data() + i * d, weights(ckpt, layer, "mlp_norm"), d, c.norm_eps);
    const auto gate = project(weights(ckpt, layer, "w_gate"), m, d, xn);
    const auto up = project(weights(ckpt, layer, "w_up"), m, d, xn);
    std::vector<float> act(m);
    for (std::size_t t = 0; t < m; ++t) {
      const double g = gate[t];
      act[t] = static_cast<float>(g / (1.0 + std::exp(-g)) * up[t]);
    }
    const auto out = project(weights(ckpt, layer, "w_down"), d, m, act);
    for (std::size_t t = 0; t < d; ++t) h[i * d + t] += out[t];
  }
  return h;
}

std::vector<float> reference_states(std::span<const TokenId> tokens, const Checkpoint& ckpt) {
  const ModelConfig& c = ckpt.config();
  const std::size_t n = tokens.size(), d = c.dim;
  std::vector<float> h(n * d);
  const float* embed = ckpt.tensor("tok_embed").data().data();
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(embed + tokens[i] * d, embed + (tokens[i] + 1) * d, h.begin() + i * d);
  }
  std::vector<float> states(h);
  for (std::size_t layer = 0; layer < c.n_layers; ++layer) {
    h = reference_block(ckpt, layer, h, n);
    states.insert(states.end(), h.begin(), h.end());
  }
  return states;
}

std::vector<double> reference_lens(const Checkpoint& ckpt, std::span<const float> hidden) {
  const ModelConfig& c = ckpt.config();
  const float* gain = ckpt.tensor("final_norm").data().data();
  const float* u = ckpt.tensor("unembed").data().data();
  double ss = 0.0;
  for (float x : hidden) ss += static_cast<double>(x) * x;
  const double inv = 1.0 / std::sqrt(ss / static_cast<double>(c.dim) + c.norm_eps);
  std::vector<double> normed(c.dim);
  for (std::size_t t = 0; t < c.dim; ++t) normed[t] = hidden[t] * inv * gain[t];
  std::vector<double> z(c.vocab_size);
  for (std::size_t r = 0; r < c.vocab_size; ++r) {
    double acc = 0.0;
    for (std::size_t t = 0; t < c.dim; ++t) acc += u[r * c.dim + t] * normed[t];
    z[r] = acc;
  }
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (auto& x : z) {
    x = std::exp(x - top);
    total += x;
  }
  for (auto& x : z) x /= total;
  return z;
}

}  // namespace romanlens::testing
