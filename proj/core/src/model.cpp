#include "romanlens/model.hpp"

#include <cmath>
#include <optional>

#include "romanlens/error.hpp"

namespace romanlens {

namespace {

struct Activations {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<float> h;  // n x d residual stream

  std::span<float> row(std::size_t i) { return std::span<float>(h).subspan(i * d, d); }
};

void apply_rope(std::span<float> head, std::size_t position, float theta) {
  const std::size_t half = head.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double freq = std::pow(static_cast<double>(theta),
                                 -2.0 * static_cast<double>(i) / static_cast<double>(head.size()));
    const double angle = static_cast<double>(position) * freq;
    const double c = std::cos(angle), s = std::sin(angle);
    const double x0 = head[i], x1 = head[i + half];
    head[i] = static_cast<float>(x0 * c - x1 * s);
    head[i + half] = static_cast<float>(x0 * s + x1 * c);
  }
}

void attention_block(const Checkpoint& ckpt, std::size_t layer, Activations& act) {
  const ModelConfig& c = ckpt.config();
  const std::string prefix = "layers." + std::to_string(layer) + ".";
  const auto& norm = ckpt.tensor(prefix + "attn_norm");
  const auto& wq = ckpt.tensor(prefix + "wq");
  const auto& wk = ckpt.tensor(prefix + "wk");
  const auto& wv = ckpt.tensor(prefix + "wv");
  const auto& wo = ckpt.tensor(prefix + "wo");

  const std::size_t n = act.n, d = act.d, hd = c.head_dim();
  const std::size_t kv_dim = c.n_kv_heads * hd;
  const std::size_t group = c.n_heads / c.n_kv_heads;

  std::vector<float> q(n * d), k(n * kv_dim), v(n * kv_dim);
  std::vector<float> xn(d);
  for (std::size_t i = 0; i < n; ++i) {
    rms_norm(act.row(i), norm.data(), c.norm_eps, xn);
    std::span<float> qi(q.data() + i * d, d);
    std::span<float> ki(k.data() + i * kv_dim, kv_dim);
    matvec(wq.data(), d, d, xn, qi);
    matvec(wk.data(), kv_dim, d, xn, ki);
    matvec(wv.data(), kv_dim, d, xn, std::span<float>(v.data() + i * kv_dim, kv_dim));
    for (std::size_t hh = 0; hh < c.n_heads; ++hh) apply_rope(qi.subspan(hh * hd, hd), i, c.rope_theta);
    for (std::size_t hh = 0; hh < c.n_kv_heads; ++hh) apply_rope(ki.subspan(hh * hd, hd), i, c.rope_theta);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  std::vector<float> mixed(d);
  std::vector<float> out(d);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t hh = 0; hh < c.n_heads; ++hh) {
      const std::size_t kvh = hh / group;
      const float* qh = q.data() + i * d + hh * hd;
      double max_score = -INFINITY;
      for (std::size_t j = 0; j <= i; ++j) {
        const float* kh = k.data() + j * kv_dim + kvh * hd;
        double dot = 0.0;
        for (std::size_t t = 0; t < hd; ++t) dot += static_cast<double>(qh[t]) * kh[t];
        scores[j] = dot * scale;
        max_score = std::max(max_score, scores[j]);
      }
      double total = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        scores[j] = std::exp(scores[j] - max_score);
        total += scores[j];
      }
      for (std::size_t t = 0; t < hd; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += scores[j] * v[j * kv_dim + kvh * hd + t];
        mixed[hh * hd + t] = static_cast<float>(acc / total);
      }
    }
    matvec(wo.data(), d, d, mixed, out);
    auto hi = act.row(i);
    for (std::size_t t = 0; t < d; ++t) hi[t] += out[t];
  }
}

void mlp_block(const Checkpoint& ckpt, std::size_t layer, Activations& act) {
  const ModelConfig& c = ckpt.config();
  const std::string prefix = "layers." + std::to_string(layer) + ".";
  const auto& norm = ckpt.tensor(prefix + "mlp_norm");
  const auto& w_gate = ckpt.tensor(prefix + "w_gate");
  const auto& w_up = ckpt.tensor(prefix + "w_up");
  const auto& w_down = ckpt.tensor(prefix + "w_down");

  const std::size_t d = act.d, hidden = c.mlp_hidden;
  std::vector<float> xn(d), gate(hidden), up(hidden), out(d);
  for (std::size_t i = 0; i < act.n; ++i) {
    auto hi = act.row(i);
    rms_norm(hi, norm.data(), c.norm_eps, xn);
    matvec(w_gate.data(), hidden, d, xn, gate);
    matvec(w_up.data(), hidden, d, xn, up);
    for (std::size_t t = 0; t < hidden; ++t) {
      const double g = gate[t];
      gate[t] = static_cast<float>(g / (1.0 + std::exp(-g)) * up[t]);
    }
    matvec(w_down.data(), d, hidden, gate, out);
    for (std::size_t t = 0; t < d; ++t) hi[t] += out[t];
  }
}

void check_tokens(std::span<const TokenId> tokens, const ModelConfig& c) {
  if (tokens.empty() || tokens.size() > c.max_seq_len) {
    fail(ErrorKind::Length, "sequence length " + std::to_string(tokens.size()) +
                                " outside [1, " + std::to_string(c.max_seq_len) + "]");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= c.vocab_size) {
      fail(ErrorKind::Range, "token id " + std::to_string(tokens[i]) + " at position " +
                                 std::to_string(i) + " exceeds vocabulary size");
    }
  }
}

void check_plan(const PatchPlan& plan, const ModelConfig& c, std::size_t n) {
  const std::vector<std::size_t> want{c.n_layers + 1, c.dim};
  if (plan.donor_states.dims() != want) {
    fail(ErrorKind::Plan, "donor states must be (n_layers + 1) x dim");
  }
  if (plan.start_layer > c.n_layers) {
    fail(ErrorKind::Plan, "patch start layer " + std::to_string(plan.start_layer) +
                              " exceeds final layer " + std::to_string(c.n_layers));
  }
  if (plan.target_position >= n) {
    fail(ErrorKind::Plan, "patch position " + std::to_string(plan.target_position) +
                              " outside a sequence of " + std::to_string(n));
  }
}

ResidualTrace run(std::span<const TokenId> tokens, const Checkpoint& ckpt,
                  const PatchPlan* plan) {
  const ModelConfig& c = ckpt.config();
  check_tokens(tokens, c);
  const std::size_t n = tokens.size(), d = c.dim;
  if (plan) check_plan(*plan, c, n);

  Activations act{n, d, std::vector<float>(n * d)};
  const auto& embed = ckpt.tensor("tok_embed");
  for (std::size_t i = 0; i < n; ++i) {
    auto src = embed.row(tokens[i]);
    std::copy(src.begin(), src.end(), act.row(i).begin());
  }

  ResidualTrace trace{Tensor({c.n_layers + 1, n, d}), {}};
  auto record = [&](std::size_t layer) {
    if (plan && layer >= plan->start_layer) {
      auto donor = plan->donor_states.row(layer);
      std::copy(donor.begin(), donor.end(), act.row(plan->target_position).begin());
    }
    std::copy(act.h.begin(), act.h.end(), trace.states.row(layer).begin());
  };

  record(0);
  for (std::size_t layer = 0; layer < c.n_layers; ++layer) {
    attention_block(ckpt, layer, act);
    mlp_block(ckpt, layer, act);
    record(layer + 1);
  }
  if (!trace.states.all_finite()) {
    fail(ErrorKind::NumericInput, "forward pass produced non-finite residuals");
  }
  trace.final_logits = unembed(ckpt, act.row(n - 1));
  return trace;
}

}  // namespace

std::span<const float> ResidualTrace::state(std::size_t layer, std::size_t position) const {
  if (layer >= n_states() || position >= n_positions()) {
    fail(ErrorKind::Range, "trace index out of range");
  }
  return states.data().subspan((layer * n_positions() + position) * dim(), dim());
}

ResidualTrace forward(std::span<const TokenId> tokens, const Checkpoint& ckpt) {
  return run(tokens, ckpt, nullptr);
}

ResidualTrace forward_patched(std::span<const TokenId> tokens, const Checkpoint& ckpt,
                              const PatchPlan& plan) {
  return run(tokens, ckpt, &plan);
}

std::vector<float> unembed(const Checkpoint& ckpt, std::span<const float> hidden) {
  const ModelConfig& c = ckpt.config();
  if (hidden.size() != c.dim) fail(ErrorKind::Shape, "hidden state size differs from model dim");
  std::vector<float> normed(c.dim);
  rms_norm(hidden, ckpt.tensor("final_norm").data(), c.norm_eps, normed);
  std::vector<float> logits(c.vocab_size);
  matvec(ckpt.tensor("unembed").data(), c.vocab_size, c.dim, normed, logits);
  for (float z : logits) {
    if (!std::isfinite(z)) fail(ErrorKind::NumericInput, "non-finite logit");
  }
  return logits;
}

}  // namespace romanlens
