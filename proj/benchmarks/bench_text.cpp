#include <benchmark/benchmark.h>

#include <random>

#include "romanlens/numerics.hpp"
#include "romanlens/romanize.hpp"
#include "romanlens/tokenizer.hpp"

using namespace romanlens;

namespace {

const std::string kData = ROMANLENS_DATA_DIR;

void BM_Encode(benchmark::State& state) {
  const auto v = load_vocabulary(kData + "/vocab.json");
  std::string text;
  for (int i = 0; i < 20; ++i) text += "Français: \"fleur\" हिन्दी: \"फूल\"\n";
  for (auto _ : state) benchmark::DoNotOptimize(v.encode(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Encode);

void BM_Romanize(benchmark::State& state) {
  const auto s = load_scheme(kData + "/schemes/devanagari_natural.json");
  std::string text;
  for (int i = 0; i < 50; ++i) text += "मछली आम भाई गंध सूरज फूल ";
  for (auto _ : state) benchmark::DoNotOptimize(s.romanize(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Romanize);

void BM_Softmax(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<float> normal(0.0f, 3.0f);
  std::vector<float> logits(static_cast<std::size_t>(state.range(0)));
  for (auto& x : logits) x = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(softmax(logits));
}
BENCHMARK(BM_Softmax)->Arg(4096)->Arg(32000);

}  // namespace
