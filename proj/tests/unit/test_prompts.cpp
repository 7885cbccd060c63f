#include <doctest.h>

#include <algorithm>

#include "printed_prompts.hpp"
#include "check_error.hpp"
#include "romanlens/prompts.hpp"
#include "test_support.hpp"

using namespace romanlens;
using romanlens::testing::data_file;
namespace ab = romanlens::testing::printed_prompts;

namespace {

struct Fixture {
  std::vector<ConceptRecord> dataset = load_dataset(data_file("concepts.jsonl"));
  Vocabulary vocab = load_vocabulary(data_file("vocab.json"));

  const ConceptRecord& record(const std::string& id) const {
    auto it = std::find_if(dataset.begin(), dataset.end(),
                           [&](const ConceptRecord& r) { return r.concept_id == id; });
    REQUIRE(it != dataset.end());
    return *it;
  }
  std::vector<ConceptRecord> records(const std::vector<std::string>& ids) const {
    std::vector<ConceptRecord> out;
    for (const auto& id : ids) out.push_back(record(id));
    return out;
  }
};

const LanguageKey kFr{"fr", Script::Native};
const LanguageKey kHi{"hi", Script::Native};
const LanguageKey kHiRom{"hi", Script::Romanized};
const LanguageKey kEn{"en", Script::Native};

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

void check_spec_invariants(const PromptSpec& p, const Vocabulary& v, const std::string& span_text) {
  CHECK(v.decode(p.token_ids) == p.text);
  CHECK(v.encode(p.text) == p.token_ids);
  CHECK(p.prompt_end == p.token_ids.size() - 1);
  REQUIRE(p.answer_source_span.first <= p.answer_source_span.last);
  REQUIRE(p.answer_source_span.last < p.token_ids.size());
  std::vector<TokenId> span(p.token_ids.begin() + p.answer_source_span.first,
                            p.token_ids.begin() + p.answer_source_span.last + 1);
  CHECK(v.decode(span) == span_text);
  CHECK(p.source_position() == p.answer_source_span.last);
}

}  // namespace

TEST_CASE("translation block reproduced byte for byte") {
  Fixture f;
  const auto p = build_translation_prompt(f.record(ab::kQuery), kFr, kHi, f.records(ab::kExemplars), f.vocab);
  CHECK(p.text == ab::kTranslation);
  check_spec_invariants(p, f.vocab, "fleur");
  CHECK(p.answer_word == "फूल");
  CHECK(p.answer_language == "hi");
  CHECK(p.task == Task::Translation);

  const auto r = build_translation_prompt(f.record(ab::kQuery), kFr, kHiRom, f.records(ab::kExemplars), f.vocab);
  CHECK(r.text == ab::kTranslationRomanized);
  CHECK(r.answer_word == "phool");
  CHECK(r.answer_script == Script::Romanized);
}

TEST_CASE("repetition block reproduced byte for byte") {
  Fixture f;
  const auto p = build_repetition_prompt(f.record(ab::kQuery), kHi, f.records(ab::kExemplars), f.vocab);
  CHECK(p.text == ab::kRepetition);
  check_spec_invariants(p, f.vocab, "फूल");
  CHECK(count(p.text, "\n") == 5);

  const auto r = build_repetition_prompt(f.record(ab::kQuery), kHiRom, f.records(ab::kExemplars), f.vocab);
  CHECK(r.text == ab::kRepetitionRomanized);
}

TEST_CASE("cloze block reproduced byte for byte") {
  Fixture f;
  const auto p = build_cloze_prompt(f.record(ab::kQuery), kEn, f.records(ab::kClozeExemplars), f.vocab);
  CHECK(p.text == ab::kCloze);
  check_spec_invariants(p, f.vocab, "___");
  const std::string query = p.text.substr(p.text.rfind('\n') + 1);
  CHECK(count(query, "___") == 1);
  CHECK(count(p.text, "\n") == 2);
  CHECK(p.answer_word == "flower");
}

TEST_CASE("shot counts are enforced") {
  Fixture f;
  const auto four = f.records({"fish", "mango", "brother", "smell"});
  CHECK_ERROR_KIND(build_translation_prompt(f.record("flower"), kFr, kHi, four, f.vocab), ErrorKind::Argument);
  CHECK_ERROR_KIND(build_cloze_prompt(f.record("flower"), kEn, four, f.vocab), ErrorKind::Argument);
  const auto with_query = f.records({"fish", "mango", "brother", "smell", "flower"});
  CHECK_ERROR_KIND(build_repetition_prompt(f.record("flower"), kHi, with_query, f.vocab), ErrorKind::Argument);
  CHECK(shot_count(Task::Translation) == 5);
  CHECK(shot_count(Task::Repetition) == 5);
  CHECK(shot_count(Task::Cloze) == 2);
}

TEST_CASE("missing translation or cloze sentence is a data error") {
  Fixture f;
  const LanguageKey ja{"ja", Script::Native};
  CHECK_ERROR_KIND(build_translation_prompt(f.record("flower"), kFr, ja, f.records(ab::kExemplars), f.vocab),
                   ErrorKind::Data);
  CHECK_ERROR_KIND(build_cloze_prompt(f.record("flower"), kFr, f.records(ab::kClozeExemplars), f.vocab),
                   ErrorKind::Data);
}

TEST_CASE("empty dataset and schema errors") {
  CHECK(parse_dataset("").empty());
  CHECK(parse_dataset("\n  \n").empty());
  CHECK_ERROR_KIND(parse_dataset(R"({"entries": []})"), ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset(R"({"concept_id": "x", "entries": [{"language": "en", "script": "native"}]})"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset(R"({"concept_id": "x", "entries": [{"language": "en", "script": "native", "word": ""}]})"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset(R"({"concept_id": "x", "entries": [{"language": "en", "script": "native", "word": "a"}, {"language": "en", "script": "native", "word": "b"}]})"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset(R"({"concept_id": "x", "entries": [{"language": "en", "script": "latin", "word": "a"}]})"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset(R"({"concept_id": "x", "entries": [{"language": "en", "script": "native", "word": "a", "cloze_sentence": "no blank"}]})"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset(R"({"concept_id": "x", "entries": [{"language": "en", "script": "native", "word": "a", "cloze_sentence": "___ and ___"}]})"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset("{\"concept_id\": \"x\", \"entries\": []}\n{\"concept_id\": \"x\", \"entries\": []}"),
                   ErrorKind::Schema);
  CHECK_ERROR_KIND(parse_dataset("{oops"), ErrorKind::Schema);
}

TEST_CASE("same language in both scripts is allowed") {
  const auto recs = parse_dataset(
      R"({"concept_id": "x", "entries": [{"language": "hi", "script": "native", "word": "फूल"}, {"language": "hi", "script": "romanized", "word": "phool", "label": "Hindi"}]})");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].at(LanguageKey::parse("hi:rom")).word == "phool");
  CHECK(recs[0].at(LanguageKey::parse("hi")).label == "hi");
  CHECK_ERROR_KIND(recs[0].at(LanguageKey::parse("fr")), ErrorKind::Data);
}

TEST_CASE("bundled dataset loads clean") {
  Fixture f;
  CHECK(f.dataset.size() >= 100);
  std::size_t complete = 0;
  for (const auto& r : f.dataset) {
    std::set<std::string> languages;
    for (const auto& e : r.entries) languages.insert(e.language);
    if (languages.size() >= 4) ++complete;
  }
  CHECK(complete >= 100);
}

TEST_CASE("every bundled prompt tokenizes with aligned spans") {
  Fixture f;
  const std::vector<std::pair<Task, std::pair<LanguageKey, LanguageKey>>> setups{
      {Task::Translation, {kFr, kHi}},       {Task::Translation, {kEn, kHiRom}},
      {Task::Translation, {kFr, kEn}},       {Task::Repetition, {kEn, kHi}},
      {Task::Repetition, {kEn, kHiRom}},     {Task::Cloze, {kEn, kEn}},
  };
  for (const auto& [task, langs] : setups) {
    for (std::size_t i = 0; i < f.dataset.size(); ++i) {
      if (!supports(f.dataset[i], task, langs.first, langs.second)) continue;
      const auto p = build_task_prompt(f.dataset, i, task, langs.first, langs.second, 0, f.vocab);
      const std::string span = task == Task::Cloze ? std::string("___")
                               : task == Task::Translation ? f.dataset[i].at(langs.first).word
                                                           : f.dataset[i].at(langs.second).word;
      check_spec_invariants(p, f.vocab, span);
    }
  }
}

TEST_CASE("hindi cloze prompts build for the records that carry them") {
  Fixture f;
  std::size_t built = 0;
  for (std::size_t i = 0; i < f.dataset.size(); ++i) {
    if (!supports(f.dataset[i], Task::Cloze, kEn, kHi)) continue;
    const auto p = build_task_prompt(f.dataset, i, Task::Cloze, kEn, kHi, 0, f.vocab);
    check_spec_invariants(p, f.vocab, "___");
    ++built;
  }
  CHECK(built >= 10);
}

TEST_CASE("exemplar selection is deterministic and excludes the query") {
  Fixture f;
  for (std::size_t seed : {0u, 3u}) {
    for (std::size_t i = 0; i < f.dataset.size(); i += 7) {
      const auto a = select_exemplars(f.dataset, i, Task::Translation, kFr, kHi, seed);
      const auto b = select_exemplars(f.dataset, i, Task::Translation, kFr, kHi, seed);
      REQUIRE(a.size() == 5);
      for (std::size_t k = 0; k < 5; ++k) {
        CHECK(a[k].concept_id == b[k].concept_id);
        CHECK(a[k].concept_id != f.dataset[i].concept_id);
      }
    }
  }
  const auto a = select_exemplars(f.dataset, 0, Task::Translation, kFr, kHi, 0);
  const auto b = select_exemplars(f.dataset, 0, Task::Translation, kFr, kHi, 1);
  CHECK(a[0].concept_id != b[0].concept_id);
  CHECK_ERROR_KIND(select_exemplars(std::span(f.dataset).first(3), 0, Task::Translation, kFr, kHi, 0),
                   ErrorKind::Data);
}

TEST_CASE("rendering is deterministic") {
  Fixture f;
  const auto a = build_task_prompt(f.dataset, 10, Task::Repetition, kEn, kHi, 2, f.vocab);
  const auto b = build_task_prompt(f.dataset, 10, Task::Repetition, kEn, kHi, 2, f.vocab);
  CHECK(a.text == b.text);
  CHECK(a.token_ids == b.token_ids);
}

TEST_CASE("language keys and tasks parse") {
  CHECK(LanguageKey::parse("hi") == kHi);
  CHECK(LanguageKey::parse("hi:rom") == kHiRom);
  CHECK(kHiRom.str() == "hi:rom");
  CHECK_ERROR_KIND(LanguageKey::parse(""), ErrorKind::Argument);
  CHECK_ERROR_KIND(LanguageKey::parse("hi:latin"), ErrorKind::Argument);
  CHECK(parse_task("cloze") == Task::Cloze);
  CHECK_ERROR_KIND(parse_task("summarize"), ErrorKind::Argument);
}

TEST_CASE("answer tokens carry the leading space") {
  Fixture f;
  const auto ids = answer_tokens("phool", f.vocab);
  CHECK(f.vocab.decode(ids) == " phool");
  CHECK_ERROR_KIND(answer_tokens("", f.vocab), ErrorKind::Argument);
}
