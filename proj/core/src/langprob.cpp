#include "romanlens/langprob.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "csv_util.hpp"
#include "romanlens/error.hpp"
#include "romanlens/lens.hpp"
#include "romanlens/parallel.hpp"
#include "romanlens/patching.hpp"

namespace romanlens {

using nlohmann::json;

double language_probability(const Distribution& dist, std::span<const std::string> words,
                            const Vocabulary& v) {
  return prefix_mass(dist, words, v);
}

std::optional<std::size_t> emergence_layer(std::span<const double> curve, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    fail(ErrorKind::Argument, "emergence threshold must lie in (0, 1)");
  }
  for (std::size_t j = 0; j < curve.size(); ++j) {
    if (curve[j] > threshold) return j;
  }
  return std::nullopt;
}

LanguageCurve language_curve(std::span<const Distribution> per_layer,
                             std::span<const std::string> target_words,
                             std::span<const std::string> english_words, const Vocabulary& v) {
  LanguageCurve curve;
  for (const auto& dist : per_layer) {
    curve.target.push_back(language_probability(dist, target_words, v));
    curve.english.push_back(language_probability(dist, english_words, v));
  }
  return curve;
}

namespace {

struct SampleResult {
  bool kept = false;
  std::string reason;
  ScriptComparisonRow native;
  ScriptComparisonRow romanized;
};

std::string first_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b,
                          const Vocabulary& v) {
  const auto ids_a = v.scan(prefix_candidates(a, v.space_marker()));
  const auto ids_b = v.scan(prefix_candidates(b, v.space_marker()));
  std::string overlap;
  for (TokenId id : ids_a) {
    if (ids_b.count(id)) overlap += (overlap.empty() ? "" : " ") + v.surface(id);
  }
  return overlap;
}

SampleResult compare_sample(std::span<const ConceptRecord> dataset, std::size_t index,
                            const Checkpoint& ckpt, const Vocabulary& v,
                            const ComparisonOptions& options) {
  const ConceptRecord& record = dataset[index];
  SampleResult result;
  const LanguageKey native_key{options.target_language, Script::Native};
  const LanguageKey rom_key{options.target_language, Script::Romanized};
  const LanguageKey english_key{options.english_language, Script::Native};
  const auto* native = record.find(native_key);
  const auto* romanized = record.find(rom_key);
  const auto* english = record.find(english_key);
  if (!record.find(options.source) || !native || !english) {
    result.reason = "missing entries";
    return result;
  }
  if (!romanized) {
    fail(ErrorKind::Data, "concept '" + record.concept_id + "' has no romanized " +
                              options.target_language + " form");
  }
  const auto english_words = english->all_words();
  for (const auto* entry : {native, romanized}) {
    const std::string overlap = first_overlap(entry->all_words(), english_words, v);
    if (!overlap.empty()) {
      result.reason = std::string(to_string(entry->script)) +
                      " target tokens overlap English tokens: " + overlap;
      return result;
    }
  }

  auto run_script = [&](const LanguageKey& key, const LanguageEntry& entry) {
    const PromptSpec prompt =
        build_task_prompt(dataset, index, Task::Translation, options.source, key, options.seed, v);
    const ResidualTrace trace = forward(prompt.token_ids, ckpt);
    const auto column = lens_column(trace, ckpt, prompt.prompt_end);
    ScriptComparisonRow row;
    row.concept_id = record.concept_id;
    row.curve = language_curve(column, entry.all_words(), english_words, v);
    row.curve.script = key.script;
    row.curve.target_language = options.target_language;
    row.emergence_target = emergence_layer(row.curve.target, options.threshold);
    row.emergence_english = emergence_layer(row.curve.english, options.threshold);
    return row;
  };
  try {
    result.native = run_script(native_key, *native);
    result.romanized = run_script(rom_key, *romanized);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Data && e.kind() != ErrorKind::Coverage) throw;
    result.reason = e.what();
    return result;
  }
  result.kept = true;
  return result;
}

}  // namespace

ScriptComparisonReport compare_scripts(std::span<const ConceptRecord> dataset,
                                       const Checkpoint& ckpt, const Vocabulary& v,
                                       const ComparisonOptions& options) {
  if (v.size() != ckpt.config().vocab_size) {
    fail(ErrorKind::Shape, "vocabulary size differs from the checkpoint's vocab_size");
  }
  std::vector<SampleResult> results(dataset.size());
  parallel_for(dataset.size(),
               [&](std::size_t i) { results[i] = compare_sample(dataset, i, ckpt, v, options); });

  ScriptComparisonReport report;
  report.n_total = dataset.size();
  for (auto& r : results) {
    if (!r.kept) {
      report.discarded.push_back(dataset[&r - results.data()].concept_id);
      report.discard_reasons.push_back(r.reason);
      continue;
    }
    if (r.native.emergence_target && r.romanized.emergence_target) {
      report.differences.push_back(static_cast<double>(*r.native.emergence_target) -
                                   static_cast<double>(*r.romanized.emergence_target));
    }
    report.rows.push_back(std::move(r.native));
    report.rows.push_back(std::move(r.romanized));
  }
  const std::size_t n = report.differences.size();
  if (n > 0) {
    double sum = 0.0;
    for (double d : report.differences) sum += d;
    const double mean = sum / static_cast<double>(n);
    double half = 0.0;
    if (n > 1) {
      double ss = 0.0;
      for (double d : report.differences) ss += (d - mean) * (d - mean);
      half = 1.96 * std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
    report.mean_difference = mean;
    report.ci_low = mean - half;
    report.ci_high = mean + half;
  }
  return report;
}

void write_comparison_csv(const ScriptComparisonReport& report, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + out.string());
  const std::size_t layers = report.rows.empty() ? 0 : report.rows.front().curve.target.size();
  f << "concept_id,script,emergence_layer_target,emergence_layer_english";
  for (std::size_t j = 0; j < layers; ++j) f << ",p_target_l" << j;
  for (std::size_t j = 0; j < layers; ++j) f << ",p_english_l" << j;
  f << "\n" << std::setprecision(9);
  auto opt = [](const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : std::string(); };
  for (const auto& row : report.rows) {
    f << detail::csv_field(row.concept_id) << "," << to_string(row.curve.script) << ","
      << opt(row.emergence_target) << "," << opt(row.emergence_english);
    for (double p : row.curve.target) f << "," << p;
    for (double p : row.curve.english) f << "," << p;
    f << "\n";
  }
  if (!f) fail(ErrorKind::Io, "failed writing " + out.string());
}

void write_comparison_summary(const ScriptComparisonReport& report,
                              const std::filesystem::path& out) {
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  json discards = json::array();
  for (std::size_t i = 0; i < report.discarded.size(); ++i) {
    discards.push_back({{"concept_id", report.discarded[i]}, {"reason", report.discard_reasons[i]}});
  }
  const json doc{{"n_total", report.n_total},
                 {"n_kept", report.n_kept()},
                 {"n_discarded", report.discarded.size()},
                 {"n_pairs", report.differences.size()},
                 {"mean_difference_native_minus_romanized", opt(report.mean_difference)},
                 {"ci95_low", opt(report.ci_low)},
                 {"ci95_high", opt(report.ci_high)},
                 {"discarded", discards}};
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + out.string());
  f << doc.dump(2) << "\n";
  if (!f) fail(ErrorKind::Io, "failed writing " + out.string());
}

}  // namespace romanlens
