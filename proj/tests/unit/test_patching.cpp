#include <doctest.h>

#include <cmath>
#include <random>

#include "check_error.hpp"
#include "romanlens/patching.hpp"
#include "test_support.hpp"

using namespace romanlens;
using namespace romanlens::testing;

namespace {

const std::vector<std::string> kFastSwift{
    "f",  "fa",  "fas",  "fast",  "▁f",  "▁fa",  "▁fas",  "▁fast",  "s",
    "sw", "swi", "swif", "swift", "▁s", "▁sw", "▁swi", "▁swif", "▁swift"};

// 64 surfaces: the 18 fast/swift prefixes plus filler.
Vocabulary patch_vocab() {
  std::vector<std::string> surfaces = kFastSwift;
  for (const char* s : {"c", "co", "col", "cold", "▁c", "▁co", "▁col", "▁cold", "h", "ho", "hot",
                        "▁h", "▁ho", "▁hot", "x", "y", "z", "▁x", "▁y", "▁z", "a", "b", "d", "e",
                        "g", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r", "t", "u", "v", "w",
                        "▁a", "▁b", "▁d", "▁e", "▁g", "▁i", "▁j"}) {
    surfaces.emplace_back(s);
  }
  REQUIRE(surfaces.size() == 64);
  return fixture_vocab(surfaces);
}

Distribution mass_on(const Vocabulary& v, const std::vector<std::pair<std::string, float>>& mass) {
  std::vector<float> p(v.size(), 0.0f);
  float used = 0.0f;
  for (const auto& [s, m] : mass) {
    p[*v.find(s)] += m;
    used += m;
  }
  p[*v.find("z")] += 1.0f - used;
  return Distribution(p);
}

PromptSpec random_prompt(std::mt19937_64& rng, std::size_t n, std::size_t word_last,
                         std::size_t vocab_size, const std::string& id) {
  PromptSpec p;
  p.token_ids = random_tokens(rng, n, vocab_size);
  p.concept_id = id;
  p.answer_source_span = {word_last > 0 ? word_last - 1 : 0, word_last};
  p.prompt_end = n - 1;
  return p;
}

PatchExperiment raw_experiment(std::vector<PromptSpec> sources, PromptSpec target) {
  return PatchExperiment{std::move(sources), std::move(target), {"fast", {"fast", "swift"}},
                         {"cold", {"cold"}}, {"hot"}};
}

Tensor random_tensor(std::mt19937_64& rng, std::vector<std::size_t> dims) {
  Tensor t(std::move(dims));
  std::normal_distribution<float> normal;
  for (float& x : t.data()) x = normal(rng);
  return t;
}

double hand_kl(std::vector<double> a, std::vector<double> b) {
  double sa = 0.0, sb = 0.0;
  for (auto& x : a) sa += (x += kCurveSmoothing);
  for (auto& x : b) sb += (x += kCurveSmoothing);
  double kl = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) kl += a[i] / sa * std::log((a[i] / sa) / (b[i] / sb));
  return kl;
}

}  // namespace

TEST_CASE("fast and swift sum over their eighteen prefixes") {
  const auto v = patch_vocab();
  std::mt19937_64 rng(50);
  const Distribution dist(random_probs(rng, v.size()));
  double hand = 0.0;
  for (const auto& s : kFastSwift) hand += dist[*v.find(s)];
  const std::vector<std::string> synonyms{"swift"};
  CHECK(concept_probability(dist, "fast", synonyms, v) == doctest::Approx(hand).epsilon(1e-12));
  CHECK(v.scan(prefix_candidates(std::vector<std::string>{"fast", "swift"}, v.space_marker())).size() == 18);
}

TEST_CASE("concept probability hand sums") {
  const auto v = patch_vocab();
  const std::vector<std::string> synonyms{"swift"};
  CHECK(concept_probability(mass_on(v, {{"▁fa", 0.3f}, {"sw", 0.2f}}), "fast", synonyms, v) ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(concept_probability(mass_on(v, {{"x", 0.7f}}), "fast", synonyms, v) == 0.0);
  const std::vector<std::string> repeated{"fast", "fas"};
  CHECK(concept_probability(mass_on(v, {{"fa", 0.4f}}), "fast", repeated, v) ==
        doctest::Approx(0.4).epsilon(1e-6));
  CHECK_ERROR_KIND(concept_probability(mass_on(v, {}), "", synonyms, v), ErrorKind::Argument);
  CHECK_ERROR_KIND(concept_probability(Distribution(std::vector<float>{1.0f}), "fast", synonyms, v),
                   ErrorKind::Shape);
}

TEST_CASE("experiments reject shared prefixes and repeated concepts") {
  const auto v = patch_vocab();
  std::mt19937_64 rng(51);
  const auto p = random_prompt(rng, 6, 2, v.size(), "a");
  try {
    make_experiment({p}, p, {"fast", {"fast"}}, {"fan", {"fas"}}, {}, v);
    FAIL("expected a data error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Data);
    CHECK(std::string(e.what()).find("▁fa") != std::string::npos);
  }
  CHECK_ERROR_KIND(make_experiment({p}, p, {"fast", {"fast"}}, {"fast", {"cold"}}, {}, v),
                   ErrorKind::Data);
  CHECK_ERROR_KIND(make_experiment({}, p, {"fast", {"fast"}}, {"cold", {"cold"}}, {}, v),
                   ErrorKind::Argument);
  const auto ok = make_experiment({p}, p, {"fast", {"fast", "swift"}}, {"cold", {"cold"}}, {"hot"}, v);
  CHECK(ok.sources.size() == 1);
}

TEST_CASE("donor extraction reads the source trace") {
  const auto ckpt = Checkpoint::random(tiny_config(4, 32, 64), 52);
  std::mt19937_64 rng(53);
  const auto p = random_prompt(rng, 9, 4, 64, "a");
  const auto donor = extract_donor(p, ckpt);
  CHECK(donor.dims() == std::vector<std::size_t>{5, 32});
  const auto trace = forward(p.token_ids, ckpt);
  for (std::size_t l = 0; l < 5; ++l) {
    const auto want = trace.state(l, 4);
    const auto got = donor.row(l);
    CHECK(std::equal(got.begin(), got.end(), want.begin(), want.end()));
  }
  CHECK(extract_donor(p, ckpt) == donor);

  auto bad = p;
  bad.answer_source_span = {3, 40};
  CHECK_ERROR_KIND(extract_donor(bad, ckpt), ErrorKind::Spec);
}

TEST_CASE("mean donor matches an elementwise loop") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Tensor> donors;
    const std::size_t count = 1 + trial % 7;
    for (std::size_t i = 0; i < count; ++i) donors.push_back(random_tensor(rng, {3, 8}));
    const auto mean = mean_donor(donors);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 8; ++c) {
        double acc = 0.0;
        for (const auto& d : donors) acc += d.at({r, c});
        CHECK(std::abs(mean.at({r, c}) - acc / double(count)) <= 1e-6);
      }
    }
  }
  const auto x = random_tensor(rng, {2, 4});
  CHECK(mean_donor(std::vector<Tensor>{x}) == x);
  Tensor neg = x;
  for (float& f : neg.data()) f = -f;
  const auto cancelled = mean_donor(std::vector<Tensor>{x, neg});
  for (float f : cancelled.data()) CHECK(f == 0.0f);
  CHECK_ERROR_KIND(mean_donor(std::vector<Tensor>{}), ErrorKind::Argument);
  CHECK_ERROR_KIND(mean_donor(std::vector<Tensor>{x, random_tensor(rng, {2, 5})}), ErrorKind::Shape);
}

TEST_CASE("self patch leaves every point at the baseline") {
  const auto v = patch_vocab();
  const auto ckpt = Checkpoint::random(tiny_config(4, 32, 64), 55, 4.0f);
  std::mt19937_64 rng(56);
  const auto p = random_prompt(rng, 10, 5, 64, "fast");
  const auto curve = sweep(raw_experiment({p}, p), ckpt, v, PatchMode::Single);
  REQUIRE(curve.p_target.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(std::abs(curve.p_target[j] - curve.baseline_target) <= 1e-5);
    CHECK(std::abs(curve.p_source[j] - curve.baseline_source) <= 1e-5);
    CHECK(std::abs(curve.p_english[j] - curve.baseline_english) <= 1e-5);
  }
}

TEST_CASE("final-layer patch before the last token changes nothing") {
  const auto v = patch_vocab();
  const auto ckpt = Checkpoint::random(tiny_config(4, 32, 64), 57, 4.0f);
  std::mt19937_64 rng(58);
  const auto source = random_prompt(rng, 7, 3, 64, "fast");
  const auto target = random_prompt(rng, 11, 6, 64, "cold");
  const auto curve = sweep(raw_experiment({source}, target), ckpt, v, PatchMode::Single);
  CHECK(std::abs(curve.p_source[4] - curve.baseline_source) <= 1e-6);
  CHECK(std::abs(curve.p_target[4] - curve.baseline_target) <= 1e-6);
  CHECK(std::abs(curve.p_english[4] - curve.baseline_english) <= 1e-6);
}

TEST_CASE("multi with one source equals single bitwise") {
  const auto v = patch_vocab();
  const auto ckpt = Checkpoint::random(tiny_config(4, 32, 64), 59, 4.0f);
  std::mt19937_64 rng(60);
  const auto exp = raw_experiment({random_prompt(rng, 8, 2, 64, "fast")},
                                  random_prompt(rng, 9, 4, 64, "cold"));
  const auto single = sweep(exp, ckpt, v, PatchMode::Single);
  const auto multi = sweep(exp, ckpt, v, PatchMode::Multi);
  CHECK(single.p_source == multi.p_source);
  CHECK(single.p_target == multi.p_target);
  CHECK(single.p_english == multi.p_english);
  CHECK(multi.mode == PatchMode::Multi);
}

TEST_CASE("curves are probabilities with disjoint concept mass") {
  const auto v = patch_vocab();
  for (std::uint64_t seed = 61; seed < 69; ++seed) {
    const auto ckpt = Checkpoint::random(tiny_config(3, 16, 64, 2, 1), seed, 6.0f);
    std::mt19937_64 rng(seed);
    std::vector<PromptSpec> sources;
    for (int i = 0; i < 3; ++i) sources.push_back(random_prompt(rng, 6 + i, 3, 64, "fast"));
    const auto exp = raw_experiment(sources, random_prompt(rng, 8, 5, 64, "cold"));
    for (PatchMode mode : {PatchMode::Single, PatchMode::Multi}) {
      const auto c = sweep(exp, ckpt, v, mode);
      for (std::size_t j = 0; j < c.p_source.size(); ++j) {
        for (double p : {c.p_source[j], c.p_target[j], c.p_english[j]}) CHECK((p >= 0.0 && p <= 1.0));
        CHECK(c.p_source[j] + c.p_target[j] <= 1.0 + 1e-6);
      }
    }
  }
}

TEST_CASE("sweep on bundled translation prompts") {
  const auto dataset = load_dataset(data_file("concepts.jsonl"));
  const auto v = load_vocabulary(data_file("vocab.json"));
  const auto ckpt = Checkpoint::random(tiny_config(2, 16, v.size()), 70);
  auto index_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (dataset[i].concept_id == id) return i;
    }
    FAIL("missing concept " << id);
    return std::size_t{0};
  };
  const LanguageKey hi{"hi", Script::Native};
  std::vector<PromptSpec> sources;
  for (const char* src : {"fr", "de", "en"}) {
    sources.push_back(build_task_prompt(dataset, index_of("fish"), Task::Translation,
                                        {src, Script::Native}, hi, 0, v));
  }
  const auto target = build_task_prompt(dataset, index_of("sun"), Task::Translation,
                                        {"fr", Script::Native}, hi, 0, v);
  const auto& fish = dataset[index_of("fish")];
  const auto& sun = dataset[index_of("sun")];
  std::vector<std::string> english = fish.at({"en", Script::Native}).all_words();
  for (const auto& w : sun.at({"en", Script::Native}).all_words()) english.push_back(w);
  const auto exp = make_experiment(sources, target, {"fish", fish.at(hi).all_words()},
                                   {"sun", sun.at(hi).all_words()}, english, v);
  const auto curve = sweep(exp, ckpt, v, PatchMode::Multi);
  CHECK(curve.p_source.size() == 3);
  for (double p : curve.p_target) CHECK((p >= 0.0 && p <= 1.0));

  TempDir dir;
  write_curve_csv(std::vector<ConceptCurve>{curve}, dir / "curve.csv");
  const auto rows = read_csv(dir / "curve.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"mode", "layer_j", "p_source_concept_tgt",
                                            "p_target_concept_tgt", "p_english"});
  CHECK(rows[3][0] == "multi");
  CHECK(rows[3][1] == "2");
}

TEST_CASE("curve KL") {
  const std::vector<double> a{0.5, 0.5}, b{0.9, 0.1};
  CHECK(std::abs(compare_curves_kl(a, b) - 0.5108) <= 1e-3);
  CHECK(compare_curves_kl(a, a) == 0.0);
  const std::vector<double> scaled{0.1, 0.1};
  CHECK(compare_curves_kl(a, scaled) == doctest::Approx(0.0));
  const std::vector<double> zero{0.0, 0.0}, short_curve{1.0};
  CHECK_ERROR_KIND(compare_curves_kl(zero, a), ErrorKind::UndefinedStatistic);
  CHECK_ERROR_KIND(compare_curves_kl(a, short_curve), ErrorKind::Shape);

  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(6), y(6);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    CHECK(compare_curves_kl(x, y) == doctest::Approx(hand_kl(x, y)).epsilon(1e-9));
  }
}

TEST_CASE("patch mode names") {
  CHECK(parse_patch_mode("multi") == PatchMode::Multi);
  CHECK(to_string(PatchMode::Single) == "single");
  CHECK_ERROR_KIND(parse_patch_mode("both"), ErrorKind::Argument);
}
