#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "romanlens/model.hpp"
#include "romanlens/numerics.hpp"
#include "romanlens/prompts.hpp"
#include "romanlens/tokenizer.hpp"

namespace romanlens {

enum class Timestep { First, Intermediate, Final };

std::string_view to_string(Timestep t) noexcept;

// Kind of the t-th of `count` generation steps.
Timestep timestep_kind(std::size_t t, std::size_t count) noexcept;

/// Candidate strings per generation timestep plus the subset realized in a
/// vocabulary. Used both for the romanized word and for the native/English
/// reference words the romanized tokens are checked against.
struct TimestepTokenSets {
  std::set<std::string> first;
  std::set<std::string> intermediate;
  std::set<std::string> final;

  std::set<TokenId> first_ids;
  std::set<TokenId> intermediate_ids;
  std::set<TokenId> final_ids;
  std::map<TokenId, std::string> surfaces;  // every realized id

  const std::set<std::string>& candidates(Timestep t) const;
  const std::set<TokenId>& ids(Timestep t) const;
};

// Romanized word: prefixes (with and without marker) / substrings / suffixes.
TimestepTokenSets roman_token_sets(const std::string& romanized_word, const Vocabulary& v);

// Native or English reference words (word plus synonyms): prefixes with and
// without marker for the first and intermediate steps, suffixes for the last.
TimestepTokenSets reference_token_sets(std::span<const std::string> words, const Vocabulary& v);

struct OverlapVerdict {
  bool keep = true;
  std::string reason;
  std::vector<std::string> offending;  // realized surfaces, sorted

  friend bool operator==(const OverlapVerdict&, const OverlapVerdict&) = default;
};

inline constexpr Timestep kAllTimesteps[] = {Timestep::First, Timestep::Intermediate,
                                             Timestep::Final};

OverlapVerdict overlap_filter(const TimestepTokenSets& rom, const TimestepTokenSets& native_sets,
                              const TimestepTokenSets& english_sets,
                              std::span<const Timestep> kinds = kAllTimesteps);

inline constexpr double kLatentThreshold = 0.1;
inline constexpr std::size_t kLatentWindow = 10;

// 1 iff some realized romanized token has probability strictly above threshold.
int latent_condition(const Distribution& dist, const std::set<TokenId>& realized_ids,
                     double threshold = kLatentThreshold);

/// r_{l,t} for one sample: layers x timesteps, row-major.
class IndicatorMatrix {
 public:
  IndicatorMatrix(std::size_t layers, std::size_t timesteps);

  std::size_t layers() const noexcept { return layers_; }
  std::size_t timesteps() const noexcept { return timesteps_; }
  int at(std::size_t layer, std::size_t t) const { return bits_[layer * timesteps_ + t]; }
  void set(std::size_t layer, std::size_t t, int value) {
    bits_[layer * timesteps_ + t] = static_cast<std::uint8_t>(value != 0);
  }

 private:
  std::size_t layers_;
  std::size_t timesteps_;
  std::vector<std::uint8_t> bits_;
};

// Per-layer mean over samples of the per-sample mean over timesteps.
std::vector<double> latent_fraction(std::span<const IndicatorMatrix> samples);

enum class Scenario { Constrained, FirstSubword, LastSubword };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view s);

// Layers [k-window+1, k], or [0, k] when the model is shallower than the window.
std::vector<std::size_t> analysis_window(std::size_t n_states, std::size_t window);

struct ScenarioOptions {
  LanguageKey source{"en", Script::Native};
  std::string target_language = "hi";
  std::string english_language = "en";
  double threshold = kLatentThreshold;
  std::size_t window = kLatentWindow;
  std::size_t seed = 0;
};

struct DiscardEntry {
  std::string concept_id;
  std::string reason;
  std::vector<std::string> offending;
};

struct SampleIndicators {
  std::string concept_id;
  IndicatorMatrix indicators;  // all layers x timesteps
};

struct LatentRomReport {
  Scenario scenario = Scenario::Constrained;
  Task task = Task::Translation;
  std::string language;
  std::vector<std::size_t> window_layers;
  std::vector<double> fractions;  // aligned with window_layers
  std::size_t n_total = 0;
  std::vector<SampleIndicators> samples;  // kept samples
  std::vector<DiscardEntry> discarded;

  std::size_t n_samples() const noexcept { return samples.size(); }
};

LatentRomReport run_scenario(Scenario scenario, Task task,
                             std::span<const ConceptRecord> dataset, const Checkpoint& ckpt,
                             const Vocabulary& v, const ScenarioOptions& options = {});

// Fraction of kept samples whose last-token step triggers the latent
// condition at any window layer.
double romanization_frequency(const LatentRomReport& last_subword_report);
double romanization_frequency(std::span<const ConceptRecord> dataset, Task task,
                              const Checkpoint& ckpt, const Vocabulary& v,
                              const ScenarioOptions& options = {});

// (scenario, task, language, layer, latent_fraction, n_samples)
void write_report_csv(const LatentRomReport& report, const std::filesystem::path& out);
// (concept_id, reason, offending_tokens)
void write_discard_csv(const LatentRomReport& report, const std::filesystem::path& out);

}  // namespace romanlens
