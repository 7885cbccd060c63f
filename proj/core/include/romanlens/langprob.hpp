#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "romanlens/model.hpp"
#include "romanlens/numerics.hpp"
#include "romanlens/prompts.hpp"
#include "romanlens/tokenizer.hpp"

namespace romanlens {

// Same summation rule as concept_probability; words[0] is the answer word.
double language_probability(const Distribution& dist, std::span<const std::string> words,
                            const Vocabulary& v);

std::optional<std::size_t> emergence_layer(std::span<const double> curve, double threshold);

struct LanguageCurve {
  Script script = Script::Native;
  std::string target_language;
  std::vector<double> target;   // per layer
  std::vector<double> english;  // per layer
};

struct ScriptComparisonRow {
  std::string concept_id;
  LanguageCurve curve;
  std::optional<std::size_t> emergence_target;
  std::optional<std::size_t> emergence_english;
};

struct ComparisonOptions {
  LanguageKey source{"fr", Script::Native};
  std::string target_language = "hi";
  std::string english_language = "en";
  double threshold = 0.1;
  std::size_t seed = 0;
};

struct ScriptComparisonReport {
  std::vector<ScriptComparisonRow> rows;  // native then romanized, per kept sample
  std::vector<std::string> discarded;     // concept ids
  std::vector<std::string> discard_reasons;
  std::size_t n_total = 0;
  // native minus romanized target emergence, for samples where both emerge
  std::vector<double> differences;
  // Gaussian 95% interval; empty when no sample emerges in both scripts.
  std::optional<double> mean_difference;
  std::optional<double> ci_low;
  std::optional<double> ci_high;

  std::size_t n_kept() const noexcept { return rows.size() / 2; }
};

ScriptComparisonReport compare_scripts(std::span<const ConceptRecord> dataset,
                                       const Checkpoint& ckpt, const Vocabulary& v,
                                       const ComparisonOptions& options = {});

// Per-layer target/English probabilities read from first-answer-token lens
// distributions (one per layer).
LanguageCurve language_curve(std::span<const Distribution> per_layer,
                             std::span<const std::string> target_words,
                             std::span<const std::string> english_words, const Vocabulary& v);

void write_comparison_csv(const ScriptComparisonReport& report, const std::filesystem::path& out);
void write_comparison_summary(const ScriptComparisonReport& report,
                              const std::filesystem::path& out);

}  // namespace romanlens
