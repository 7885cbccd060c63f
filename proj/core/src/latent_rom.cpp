#include "romanlens/latent_rom.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>

#include "csv_util.hpp"
#include "romanlens/error.hpp"
#include "romanlens/lens.hpp"
#include "romanlens/parallel.hpp"
#include "romanlens/utf8.hpp"

namespace romanlens {

std::string_view to_string(Timestep t) noexcept {
  switch (t) {
    case Timestep::First: return "first";
    case Timestep::Intermediate: return "intermediate";
    case Timestep::Final: return "final";
  }
  return "first";
}

Timestep timestep_kind(std::size_t t, std::size_t count) noexcept {
  if (t == 0) return Timestep::First;
  if (t + 1 == count) return Timestep::Final;
  return Timestep::Intermediate;
}

const std::set<std::string>& TimestepTokenSets::candidates(Timestep t) const {
  switch (t) {
    case Timestep::First: return first;
    case Timestep::Intermediate: return intermediate;
    case Timestep::Final: return final;
  }
  return first;
}

const std::set<TokenId>& TimestepTokenSets::ids(Timestep t) const {
  switch (t) {
    case Timestep::First: return first_ids;
    case Timestep::Intermediate: return intermediate_ids;
    case Timestep::Final: return final_ids;
  }
  return first_ids;
}

namespace {

void realize(TimestepTokenSets& sets, const Vocabulary& v) {
  sets.first_ids = v.scan(sets.first);
  sets.intermediate_ids = v.scan(sets.intermediate);
  sets.final_ids = v.scan(sets.final);
  for (const auto* ids : {&sets.first_ids, &sets.intermediate_ids, &sets.final_ids}) {
    for (TokenId id : *ids) sets.surfaces.emplace(id, v.surface(id));
  }
}

}  // namespace

TimestepTokenSets roman_token_sets(const std::string& romanized_word, const Vocabulary& v) {
  if (romanized_word.empty()) fail(ErrorKind::Argument, "romanized word is empty");
  if (!utf8::is_ascii(romanized_word)) {
    fail(ErrorKind::Argument, "romanized word '" + romanized_word + "' is not ASCII");
  }
  const std::vector<std::string> words{romanized_word};
  TimestepTokenSets sets;
  sets.first = prefix_candidates(words, v.space_marker());
  sets.intermediate = substring_candidates(words);
  sets.final = suffix_candidates(words);
  realize(sets, v);
  return sets;
}

TimestepTokenSets reference_token_sets(std::span<const std::string> words, const Vocabulary& v) {
  if (words.empty()) fail(ErrorKind::Argument, "reference word list is empty");
  for (const auto& w : words) {
    if (w.empty()) fail(ErrorKind::Argument, "reference word is empty");
  }
  TimestepTokenSets sets;
  sets.first = prefix_candidates(words, v.space_marker());
  sets.intermediate = sets.first;
  sets.final = suffix_candidates(words);
  realize(sets, v);
  return sets;
}

OverlapVerdict overlap_filter(const TimestepTokenSets& rom, const TimestepTokenSets& native_sets,
                              const TimestepTokenSets& english_sets,
                              std::span<const Timestep> kinds) {
  OverlapVerdict verdict;
  std::set<std::string> offending;
  std::vector<std::string> where;
  for (Timestep kind : kinds) {
    bool hit = false;
    for (TokenId id : rom.ids(kind)) {
      if (native_sets.ids(kind).count(id) || english_sets.ids(kind).count(id)) {
        offending.insert(rom.surfaces.at(id));
        hit = true;
      }
    }
    if (hit) where.emplace_back(to_string(kind));
  }
  if (offending.empty()) return verdict;
  verdict.keep = false;
  verdict.offending.assign(offending.begin(), offending.end());
  verdict.reason = "romanized tokens overlap native/English tokens at";
  for (std::size_t i = 0; i < where.size(); ++i) {
    verdict.reason += (i ? ", " : " ") + where[i];
  }
  verdict.reason += " timestep";
  return verdict;
}

int latent_condition(const Distribution& dist, const std::set<TokenId>& realized_ids,
                     double threshold) {
  // Compared at the float precision the probabilities are stored in.
  const float limit = static_cast<float>(threshold);
  float best = 0.0f;
  for (TokenId id : realized_ids) {
    if (id >= dist.size()) fail(ErrorKind::Range, "token id outside the distribution");
    best = std::max(best, dist[id]);
  }
  return !realized_ids.empty() && best > limit ? 1 : 0;
}

IndicatorMatrix::IndicatorMatrix(std::size_t layers, std::size_t timesteps)
    : layers_(layers), timesteps_(timesteps), bits_(layers * timesteps, 0) {}

std::vector<double> latent_fraction(std::span<const IndicatorMatrix> samples) {
  if (samples.empty()) fail(ErrorKind::UndefinedStatistic, "latent fraction over zero samples");
  const std::size_t layers = samples.front().layers();
  std::vector<double> fractions(layers, 0.0);
  for (const auto& s : samples) {
    if (s.layers() != layers) fail(ErrorKind::Shape, "samples disagree on layer count");
    if (s.timesteps() == 0) fail(ErrorKind::Argument, "sample with zero timesteps");
    for (std::size_t l = 0; l < layers; ++l) {
      std::size_t hits = 0;
      for (std::size_t t = 0; t < s.timesteps(); ++t) hits += static_cast<std::size_t>(s.at(l, t));
      fractions[l] += static_cast<double>(hits) / static_cast<double>(s.timesteps());
    }
  }
  for (double& f : fractions) f /= static_cast<double>(samples.size());
  return fractions;
}

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::Constrained: return "constrained";
    case Scenario::FirstSubword: return "first_subword";
    case Scenario::LastSubword: return "last_subword";
  }
  return "constrained";
}

Scenario parse_scenario(std::string_view s) {
  if (s == "constrained") return Scenario::Constrained;
  if (s == "first_subword" || s == "first") return Scenario::FirstSubword;
  if (s == "last_subword" || s == "last") return Scenario::LastSubword;
  fail(ErrorKind::Argument, "unknown scenario '" + std::string(s) + "'");
}

std::vector<std::size_t> analysis_window(std::size_t n_states, std::size_t window) {
  if (window == 0) fail(ErrorKind::Argument, "analysis window must be positive");
  if (n_states == 0) fail(ErrorKind::Argument, "no layers to analyze");
  const std::size_t lo = n_states > window ? n_states - window : 0;
  std::vector<std::size_t> layers;
  for (std::size_t l = lo; l < n_states; ++l) layers.push_back(l);
  return layers;
}

namespace {

struct SampleOutcome {
  std::optional<IndicatorMatrix> indicators;
  DiscardEntry discard;
};

SampleOutcome analyze_sample(Scenario scenario, Task task, std::span<const ConceptRecord> dataset,
                             std::size_t index, const Checkpoint& ckpt, const Vocabulary& v,
                             const ScenarioOptions& options) {
  const ConceptRecord& record = dataset[index];
  SampleOutcome outcome;
  outcome.discard.concept_id = record.concept_id;

  const LanguageKey native_key{options.target_language, Script::Native};
  const LanguageKey rom_key{options.target_language, Script::Romanized};
  const LanguageKey english_key{options.english_language, Script::Native};
  const auto* native = record.find(native_key);
  const auto* romanized = record.find(rom_key);
  const auto* english = record.find(english_key);
  if (!native || !romanized || !english || !supports(record, task, options.source, native_key)) {
    outcome.discard.reason = "missing entries";
    return outcome;
  }

  PromptSpec prompt;
  std::vector<TokenId> answer;
  TimestepTokenSets rom_sets, native_sets, english_sets;
  try {
    prompt = build_task_prompt(dataset, index, task, options.source, native_key, options.seed, v);
    answer = answer_tokens(native->word, v);
    rom_sets = roman_token_sets(romanized->word, v);
    native_sets = reference_token_sets(native->all_words(), v);
    english_sets = reference_token_sets(english->all_words(), v);
  } catch (const Error& e) {
    outcome.discard.reason = e.what();
    return outcome;
  }

  // Input tokens, evaluated positions and the token-set kind per position.
  std::vector<TokenId> input = prompt.token_ids;
  std::vector<std::size_t> positions;
  std::vector<Timestep> kinds;
  const std::size_t n_answer = answer.size();
  switch (scenario) {
    case Scenario::Constrained:
      input.insert(input.end(), answer.begin(), answer.end() - 1);
      for (std::size_t t = 0; t < n_answer; ++t) {
        positions.push_back(prompt.prompt_end + t);
        kinds.push_back(timestep_kind(t, n_answer));
      }
      break;
    case Scenario::FirstSubword:
      positions.push_back(prompt.prompt_end);
      kinds.push_back(Timestep::First);
      break;
    case Scenario::LastSubword:
      input.insert(input.end(), answer.begin(), answer.end() - 1);
      positions.push_back(prompt.prompt_end + n_answer - 1);
      kinds.push_back(Timestep::Final);
      break;
  }

  std::vector<Timestep> used = kinds;
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  const OverlapVerdict verdict = overlap_filter(rom_sets, native_sets, english_sets, used);
  if (!verdict.keep) {
    outcome.discard.reason = verdict.reason;
    outcome.discard.offending = verdict.offending;
    return outcome;
  }

  const ResidualTrace trace = forward(input, ckpt);
  IndicatorMatrix indicators(trace.n_states(), positions.size());
  for (std::size_t t = 0; t < positions.size(); ++t) {
    const auto column = lens_column(trace, ckpt, positions[t]);
    const auto& ids = rom_sets.ids(kinds[t]);
    for (std::size_t layer = 0; layer < column.size(); ++layer) {
      indicators.set(layer, t, latent_condition(column[layer], ids, options.threshold));
    }
  }
  outcome.indicators = std::move(indicators);
  return outcome;
}

}  // namespace

LatentRomReport run_scenario(Scenario scenario, Task task,
                             std::span<const ConceptRecord> dataset, const Checkpoint& ckpt,
                             const Vocabulary& v, const ScenarioOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    fail(ErrorKind::Argument, "threshold must lie in (0, 1)");
  }
  if (v.size() != ckpt.config().vocab_size) {
    fail(ErrorKind::Shape, "vocabulary size differs from the checkpoint's vocab_size");
  }
  std::vector<SampleOutcome> outcomes(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t i) {
    outcomes[i] = analyze_sample(scenario, task, dataset, i, ckpt, v, options);
  });

  LatentRomReport report;
  report.scenario = scenario;
  report.task = task;
  report.language = options.target_language;
  report.n_total = dataset.size();
  for (auto& o : outcomes) {
    if (o.indicators) {
      report.samples.push_back({o.discard.concept_id, std::move(*o.indicators)});
    } else {
      report.discarded.push_back(std::move(o.discard));
    }
  }
  if (report.samples.empty()) {
    fail(ErrorKind::UndefinedStatistic, "no samples survive filtering for " +
                                            std::string(to_string(scenario)) + "/" +
                                            std::string(to_string(task)));
  }
  std::vector<IndicatorMatrix> matrices;
  matrices.reserve(report.samples.size());
  for (const auto& s : report.samples) matrices.push_back(s.indicators);
  const auto all_layers = latent_fraction(matrices);
  report.window_layers = analysis_window(ckpt.config().n_layers + 1, options.window);
  for (std::size_t layer : report.window_layers) report.fractions.push_back(all_layers[layer]);
  return report;
}

double romanization_frequency(const LatentRomReport& report) {
  if (report.scenario != Scenario::LastSubword) {
    fail(ErrorKind::Argument, "romanization frequency needs a last_subword report");
  }
  if (report.samples.empty()) fail(ErrorKind::UndefinedStatistic, "no samples");
  std::size_t triggered = 0;
  for (const auto& s : report.samples) {
    const std::size_t last = s.indicators.timesteps() - 1;
    bool any = false;
    for (std::size_t layer : report.window_layers) any = any || s.indicators.at(layer, last) == 1;
    triggered += any ? 1 : 0;
  }
  return static_cast<double>(triggered) / static_cast<double>(report.samples.size());
}

double romanization_frequency(std::span<const ConceptRecord> dataset, Task task,
                              const Checkpoint& ckpt, const Vocabulary& v,
                              const ScenarioOptions& options) {
  return romanization_frequency(
      run_scenario(Scenario::LastSubword, task, dataset, ckpt, v, options));
}

using detail::csv_field;

void write_report_csv(const LatentRomReport& report, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + out.string());
  f << "scenario,task,language,layer,latent_fraction,n_samples\n" << std::setprecision(9);
  for (std::size_t i = 0; i < report.window_layers.size(); ++i) {
    f << to_string(report.scenario) << "," << to_string(report.task) << ","
      << csv_field(report.language) << "," << report.window_layers[i] << ","
      << report.fractions[i] << "," << report.n_samples() << "\n";
  }
  if (!f) fail(ErrorKind::Io, "failed writing " + out.string());
}

void write_discard_csv(const LatentRomReport& report, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + out.string());
  f << "concept_id,reason,offending_tokens\n";
  for (const auto& d : report.discarded) {
    std::string tokens;
    for (std::size_t i = 0; i < d.offending.size(); ++i) tokens += (i ? " " : "") + d.offending[i];
    f << csv_field(d.concept_id) << "," << csv_field(d.reason) << "," << csv_field(tokens) << "\n";
  }
  if (!f) fail(ErrorKind::Io, "failed writing " + out.string());
}

}  // namespace romanlens
