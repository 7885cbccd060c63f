#include "romanlens/patching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>

#include "romanlens/error.hpp"
#include "romanlens/parallel.hpp"

namespace romanlens {

double prefix_mass(const Distribution& dist, std::span<const std::string> words,
                   const Vocabulary& v) {
  if (words.empty()) fail(ErrorKind::Argument, "no words to sum over");
  for (const auto& w : words) {
    if (w.empty()) fail(ErrorKind::Argument, "empty word in prefix summation");
  }
  if (dist.size() != v.size()) fail(ErrorKind::Shape, "distribution and vocabulary sizes differ");
  double total = 0.0;
  for (TokenId id : v.scan(prefix_candidates(words, v.space_marker()))) total += dist[id];
  return std::min(total, 1.0);
}

double concept_probability(const Distribution& dist, const std::string& word,
                           std::span<const std::string> synonyms, const Vocabulary& v) {
  if (word.empty()) fail(ErrorKind::Argument, "concept word is empty");
  std::vector<std::string> words{word};
  words.insert(words.end(), synonyms.begin(), synonyms.end());
  return prefix_mass(dist, words, v);
}

PatchExperiment make_experiment(std::vector<PromptSpec> sources, PromptSpec target,
                                ConceptWords source_concept, ConceptWords target_concept,
                                std::vector<std::string> english_words, const Vocabulary& v) {
  if (sources.empty()) fail(ErrorKind::Argument, "patch experiment needs at least one source");
  if (source_concept.concept_id == target_concept.concept_id) {
    fail(ErrorKind::Data, "source and target concept are both '" + source_concept.concept_id + "'");
  }
  if (source_concept.words.empty() || target_concept.words.empty()) {
    fail(ErrorKind::Argument, "concept word lists must be non-empty");
  }
  const auto src_ids = v.scan(prefix_candidates(source_concept.words, v.space_marker()));
  const auto tgt_ids = v.scan(prefix_candidates(target_concept.words, v.space_marker()));
  std::string overlap;
  for (TokenId id : src_ids) {
    if (tgt_ids.count(id)) overlap += (overlap.empty() ? "" : " ") + v.surface(id);
  }
  if (!overlap.empty()) {
    fail(ErrorKind::Data, "concepts '" + source_concept.concept_id + "' and '" +
                              target_concept.concept_id + "' share prefix tokens: " + overlap);
  }
  return PatchExperiment{std::move(sources), std::move(target), std::move(source_concept),
                         std::move(target_concept), std::move(english_words)};
}

Tensor extract_donor(const PromptSpec& source, const Checkpoint& ckpt) {
  const std::size_t n_s = source.source_position();
  if (source.token_ids.empty() || n_s >= source.token_ids.size() ||
      source.answer_source_span.first > n_s) {
    fail(ErrorKind::Spec, "source prompt for '" + source.concept_id + "' has no valid word span");
  }
  const ResidualTrace trace = forward(source.token_ids, ckpt);
  const std::size_t d = trace.dim();
  Tensor donor({trace.n_states(), d});
  for (std::size_t layer = 0; layer < trace.n_states(); ++layer) {
    auto src = trace.state(layer, n_s);
    std::copy(src.begin(), src.end(), donor.row(layer).begin());
  }
  return donor;
}

Tensor mean_donor(std::span<const Tensor> donors) {
  if (donors.empty()) fail(ErrorKind::Argument, "mean of zero donors");
  const auto& dims = donors.front().dims();
  std::vector<double> acc(donors.front().size(), 0.0);
  for (const auto& d : donors) {
    if (d.dims() != dims) fail(ErrorKind::Shape, "donor shapes differ");
    auto data = d.data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += data[i];
  }
  std::vector<float> mean(acc.size());
  const double n = static_cast<double>(donors.size());
  for (std::size_t i = 0; i < acc.size(); ++i) mean[i] = static_cast<float>(acc[i] / n);
  return Tensor(dims, std::move(mean));
}

std::string_view to_string(PatchMode m) noexcept { return m == PatchMode::Single ? "single" : "multi"; }

PatchMode parse_patch_mode(std::string_view s) {
  if (s == "single") return PatchMode::Single;
  if (s == "multi") return PatchMode::Multi;
  fail(ErrorKind::Argument, "unknown patch mode '" + std::string(s) + "'");
}

ConceptCurve sweep(const PatchExperiment& exp, const Checkpoint& ckpt, const Vocabulary& v,
                   PatchMode mode) {
  if (exp.sources.empty()) fail(ErrorKind::Argument, "patch experiment has no sources");
  Tensor donor;
  if (mode == PatchMode::Single) {
    donor = extract_donor(exp.sources.front(), ckpt);
  } else {
    std::vector<Tensor> donors(exp.sources.size());
    parallel_for(donors.size(), [&](std::size_t i) { donors[i] = extract_donor(exp.sources[i], ckpt); });
    donor = mean_donor(donors);
  }

  const auto& target = exp.target;
  const std::size_t n_t = target.source_position();
  if (target.prompt_end + 1 != target.token_ids.size()) {
    fail(ErrorKind::Spec, "target prompt must end at its last token");
  }
  auto read = [&](const std::vector<float>& logits, double& ps, double& pt, double& pe) {
    const Distribution dist = softmax(logits);
    ps = prefix_mass(dist, exp.source_concept.words, v);
    pt = prefix_mass(dist, exp.target_concept.words, v);
    pe = exp.english_words.empty() ? 0.0 : prefix_mass(dist, exp.english_words, v);
  };

  ConceptCurve curve;
  curve.mode = mode;
  read(forward(target.token_ids, ckpt).final_logits, curve.baseline_source,
       curve.baseline_target, curve.baseline_english);

  const std::size_t n_states = ckpt.config().n_layers + 1;
  curve.p_source.assign(n_states, 0.0);
  curve.p_target.assign(n_states, 0.0);
  curve.p_english.assign(n_states, 0.0);
  parallel_for(n_states, [&](std::size_t j) {
    PatchPlan plan{donor, j, n_t};
    const ResidualTrace trace = forward_patched(target.token_ids, ckpt, plan);
    read(trace.final_logits, curve.p_source[j], curve.p_target[j], curve.p_english[j]);
  });
  return curve;
}

double compare_curves_kl(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    fail(ErrorKind::Shape, "curves must be non-empty and of equal length");
  }
  auto normalize = [](std::span<const double> c) {
    double raw = 0.0, total = 0.0;
    for (double x : c) {
      if (!std::isfinite(x) || x < 0.0) fail(ErrorKind::NumericInput, "curve value must be finite and >= 0");
      raw += x;
      total += x + kCurveSmoothing;
    }
    if (raw == 0.0) fail(ErrorKind::UndefinedStatistic, "curve has zero total mass");
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = (c[i] + kCurveSmoothing) / total;
    return out;
  };
  const auto p = normalize(a);
  const auto q = normalize(b);
  return relative_entropy(p, q);
}

void write_curve_csv(std::span<const ConceptCurve> curves, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + out.string());
  f << "mode,layer_j,p_source_concept_tgt,p_target_concept_tgt,p_english\n" << std::setprecision(9);
  for (const auto& c : curves) {
    for (std::size_t j = 0; j < c.p_source.size(); ++j) {
      f << to_string(c.mode) << "," << j << "," << c.p_source[j] << "," << c.p_target[j] << ","
        << c.p_english[j] << "\n";
    }
  }
  if (!f) fail(ErrorKind::Io, "failed writing " + out.string());
}

}  // namespace romanlens
