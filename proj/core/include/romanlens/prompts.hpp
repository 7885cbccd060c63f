#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "romanlens/tokenizer.hpp"

namespace romanlens {

enum class Script { Native, Romanized };
enum class Task { Translation, Repetition, Cloze };

std::string_view to_string(Script s) noexcept;
std::string_view to_string(Task t) noexcept;
Task parse_task(std::string_view s);

// "hi" selects the native-script entry, "hi:rom" the romanized one.
struct LanguageKey {
  std::string code;
  Script script = Script::Native;

  static LanguageKey parse(std::string_view s);
  std::string str() const;
  friend bool operator==(const LanguageKey&, const LanguageKey&) = default;
};

struct LanguageEntry {
  std::string language;
  Script script = Script::Native;
  std::string label;  // display name used in prompts
  std::string word;
  std::vector<std::string> synonyms;
  std::optional<std::string> cloze_sentence;  // exactly one "___"
  std::optional<std::string> answer_cue;

  // word followed by synonyms
  std::vector<std::string> all_words() const;
};

struct ConceptRecord {
  std::string concept_id;
  std::vector<LanguageEntry> entries;

  const LanguageEntry* find(const LanguageKey& key) const;
  // Throws Error(Data) naming the concept and language.
  const LanguageEntry& at(const LanguageKey& key) const;
};

inline constexpr std::string_view kClozeBlank = "___";

std::vector<ConceptRecord> load_dataset(const std::filesystem::path& path);
std::vector<ConceptRecord> parse_dataset(std::string_view jsonl);
ConceptRecord parse_record(std::string_view json_line);

struct TokenSpan {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct PromptSpec {
  std::string text;
  std::vector<TokenId> token_ids;
  Task task = Task::Translation;
  std::string concept_id;
  std::string answer_language;
  Script answer_script = Script::Native;
  std::string answer_word;
  TokenSpan answer_source_span;  // word being translated/repeated, or the cloze blank
  std::size_t prompt_end = 0;    // last token index

  std::size_t source_position() const { return answer_source_span.last; }
};

inline constexpr std::size_t kTranslationShots = 5;
inline constexpr std::size_t kRepetitionShots = 5;
inline constexpr std::size_t kClozeShots = 2;

PromptSpec build_translation_prompt(const ConceptRecord& record, const LanguageKey& src,
                                    const LanguageKey& tgt,
                                    std::span<const ConceptRecord> exemplars,
                                    const Vocabulary& v);
PromptSpec build_repetition_prompt(const ConceptRecord& record, const LanguageKey& lang,
                                   std::span<const ConceptRecord> exemplars,
                                   const Vocabulary& v);
PromptSpec build_cloze_prompt(const ConceptRecord& record, const LanguageKey& lang,
                              std::span<const ConceptRecord> exemplars, const Vocabulary& v);

// Languages a task needs on every record involved (query and exemplars).
std::vector<LanguageKey> required_languages(Task task, const LanguageKey& src,
                                            const LanguageKey& tgt);
bool supports(const ConceptRecord& record, Task task, const LanguageKey& src,
              const LanguageKey& tgt);

// Deterministic exemplar pool: records that support the task, excluding the
// query, taken consecutively starting at an offset rotated by the query index.
std::vector<ConceptRecord> select_exemplars(std::span<const ConceptRecord> dataset,
                                            std::size_t query_index, Task task,
                                            const LanguageKey& src, const LanguageKey& tgt,
                                            std::size_t seed);

// Builds the task prompt for dataset[query_index] with rotated exemplars.
PromptSpec build_task_prompt(std::span<const ConceptRecord> dataset, std::size_t query_index,
                             Task task, const LanguageKey& src, const LanguageKey& tgt,
                             std::size_t seed, const Vocabulary& v);

std::size_t shot_count(Task task) noexcept;

// Tokens the model is expected to emit after the prompt: " " + word.
std::vector<TokenId> answer_tokens(const std::string& word, const Vocabulary& v);

}  // namespace romanlens
