#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "romanlens/model.hpp"
#include "romanlens/numerics.hpp"
#include "romanlens/prompts.hpp"
#include "romanlens/tokenizer.hpp"

namespace romanlens {

// Probability mass on every vocabulary token that is a prefix (with or without
// the space marker) of the word or one of its synonyms. Each id counts once.
double concept_probability(const Distribution& dist, const std::string& word,
                           std::span<const std::string> synonyms, const Vocabulary& v);
double prefix_mass(const Distribution& dist, std::span<const std::string> words,
                   const Vocabulary& v);

struct ConceptWords {
  std::string concept_id;
  std::vector<std::string> words;  // word first, then synonyms
};

struct PatchExperiment {
  std::vector<PromptSpec> sources;
  PromptSpec target;
  ConceptWords source_concept;  // expressed in the target's output language
  ConceptWords target_concept;
  std::vector<std::string> english_words;  // both concepts' English words
};

// Validates the distinct-concept and disjoint-prefix-set invariants and
// throws Error(Data) with the overlapping surfaces when they fail.
PatchExperiment make_experiment(std::vector<PromptSpec> sources, PromptSpec target,
                                ConceptWords source_concept, ConceptWords target_concept,
                                std::vector<std::string> english_words, const Vocabulary& v);

// (n_layers + 1) x dim residuals at the source word's last token.
Tensor extract_donor(const PromptSpec& source, const Checkpoint& ckpt);
Tensor mean_donor(std::span<const Tensor> donors);

enum class PatchMode { Single, Multi };
std::string_view to_string(PatchMode m) noexcept;
PatchMode parse_patch_mode(std::string_view s);

struct ConceptCurve {
  PatchMode mode = PatchMode::Single;
  std::vector<double> p_source;   // P(C_S in target language), per start layer
  std::vector<double> p_target;   // P(C_T in target language)
  std::vector<double> p_english;  // either concept in English
  double baseline_source = 0.0;   // unpatched target run
  double baseline_target = 0.0;
  double baseline_english = 0.0;
};

ConceptCurve sweep(const PatchExperiment& exp, const Checkpoint& ckpt, const Vocabulary& v,
                   PatchMode mode);

inline constexpr double kCurveSmoothing = 1e-9;

// KL(a || b) after adding kCurveSmoothing to each point and normalizing both
// curves to sum to one over layers.
double compare_curves_kl(std::span<const double> a, std::span<const double> b);

// (mode, layer_j, p_source_concept_tgt, p_target_concept_tgt, p_english)
void write_curve_csv(std::span<const ConceptCurve> curves, const std::filesystem::path& out);

}  // namespace romanlens
