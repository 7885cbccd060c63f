#include <benchmark/benchmark.h>

#include <random>

#include "romanlens/lens.hpp"
#include "romanlens/model.hpp"

using namespace romanlens;

namespace {

ModelConfig config(std::size_t layers, std::size_t dim) {
  ModelConfig c;
  c.n_layers = layers;
  c.dim = dim;
  c.n_heads = 4;
  c.n_kv_heads = 2;
  c.mlp_hidden = dim * 8 / 3;
  c.vocab_size = 4096;
  c.max_seq_len = 512;
  return c;
}

std::vector<TokenId> prompt(std::size_t n, std::size_t vocab) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<TokenId> pick(0, static_cast<TokenId>(vocab - 1));
  std::vector<TokenId> out(n);
  for (auto& t : out) t = pick(rng);
  return out;
}

void BM_Forward(benchmark::State& state) {
  const auto ckpt = Checkpoint::random(config(8, static_cast<std::size_t>(state.range(1))), 3);
  const auto tokens = prompt(static_cast<std::size_t>(state.range(0)), ckpt.config().vocab_size);
  for (auto _ : state) benchmark::DoNotOptimize(forward(tokens, ckpt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Args({16, 64})->Args({64, 64})->Args({64, 128})->Unit(benchmark::kMillisecond);

void BM_LogitLens(benchmark::State& state) {
  const auto ckpt = Checkpoint::random(config(8, 64), 4);
  const auto trace = forward(prompt(static_cast<std::size_t>(state.range(0)), 4096), ckpt);
  for (auto _ : state) benchmark::DoNotOptimize(logit_lens(trace, ckpt));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 9);
}
BENCHMARK(BM_LogitLens)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LensColumn(benchmark::State& state) {
  const auto ckpt = Checkpoint::random(config(8, 64), 5);
  const auto trace = forward(prompt(64, 4096), ckpt);
  for (auto _ : state) benchmark::DoNotOptimize(lens_column(trace, ckpt, 63));
}
BENCHMARK(BM_LensColumn)->Unit(benchmark::kMicrosecond);

void BM_PatchedForward(benchmark::State& state) {
  const auto ckpt = Checkpoint::random(config(8, 64), 6);
  const auto tokens = prompt(64, 4096);
  const auto trace = forward(tokens, ckpt);
  PatchPlan plan{Tensor({9, 64}), static_cast<std::size_t>(state.range(0)), 20};
  for (std::size_t l = 0; l < 9; ++l) {
    const auto s = trace.state(l, 5);
    std::copy(s.begin(), s.end(), plan.donor_states.row(l).begin());
  }
  for (auto _ : state) benchmark::DoNotOptimize(forward_patched(tokens, ckpt, plan));
}
BENCHMARK(BM_PatchedForward)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
