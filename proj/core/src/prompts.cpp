#include "romanlens/prompts.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "romanlens/error.hpp"
#include "romanlens/utf8.hpp"

namespace romanlens {

using nlohmann::json;

std::string_view to_string(Script s) noexcept {
  return s == Script::Native ? "native" : "romanized";
}

std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::Translation: return "translation";
    case Task::Repetition: return "repetition";
    case Task::Cloze: return "cloze";
  }
  return "translation";
}

Task parse_task(std::string_view s) {
  if (s == "translation") return Task::Translation;
  if (s == "repetition") return Task::Repetition;
  if (s == "cloze") return Task::Cloze;
  fail(ErrorKind::Argument, "unknown task '" + std::string(s) + "'");
}

LanguageKey LanguageKey::parse(std::string_view s) {
  constexpr std::string_view kRomSuffix = ":rom";
  LanguageKey key;
  if (s.size() > kRomSuffix.size() && s.substr(s.size() - kRomSuffix.size()) == kRomSuffix) {
    key.code = std::string(s.substr(0, s.size() - kRomSuffix.size()));
    key.script = Script::Romanized;
  } else {
    key.code = std::string(s);
  }
  if (key.code.empty() || key.code.find(':') != std::string::npos) {
    fail(ErrorKind::Argument, "bad language selector '" + std::string(s) + "'");
  }
  return key;
}

std::string LanguageKey::str() const {
  return script == Script::Romanized ? code + ":rom" : code;
}

std::vector<std::string> LanguageEntry::all_words() const {
  std::vector<std::string> words{word};
  words.insert(words.end(), synonyms.begin(), synonyms.end());
  return words;
}

const LanguageEntry* ConceptRecord::find(const LanguageKey& key) const {
  for (const auto& e : entries) {
    if (e.language == key.code && e.script == key.script) return &e;
  }
  return nullptr;
}

const LanguageEntry& ConceptRecord::at(const LanguageKey& key) const {
  if (const auto* e = find(key)) return *e;
  fail(ErrorKind::Data, "concept '" + concept_id + "' has no entry for " + key.str());
}

namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string required_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(ErrorKind::Schema, where + ": missing field '" + key + "'");
  if (!obj[key].is_string()) fail(ErrorKind::Schema, where + ": field '" + key + "' must be a string");
  std::string s = obj[key].get<std::string>();
  try {
    utf8::decode(s);
  } catch (const Error&) {
    fail(ErrorKind::Schema, where + ": field '" + key + "' is not valid UTF-8");
  }
  return s;
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           const std::string& where) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return required_string(obj, key, where);
}

// Prompt text under construction with one marked span.
class PromptWriter {
 public:
  void append(std::string_view s) { text_ += s; }
  void append_marked(std::string_view s) {
    span_begin_ = text_.size();
    text_ += s;
    span_end_ = text_.size();
  }
  void newline() { text_ += '\n'; }

  PromptSpec finish(const Vocabulary& v, Task task, const std::string& concept_id,
                    const LanguageEntry& answer) {
    PromptSpec spec;
    spec.text = text_;
    spec.token_ids = v.encode(text_);
    spec.task = task;
    spec.concept_id = concept_id;
    spec.answer_language = answer.language;
    spec.answer_script = answer.script;
    spec.answer_word = answer.word;
    spec.prompt_end = spec.token_ids.size() - 1;

    std::optional<std::size_t> first, last;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < spec.token_ids.size(); ++i) {
      const std::size_t len = v.display(spec.token_ids[i]).size();
      if (offset == span_begin_) first = i;
      if (offset + len == span_end_) last = i;
      offset += len;
    }
    if (!first || !last || *first > *last) {
      fail(ErrorKind::Data, "concept '" + concept_id + "': the word '" +
                                text_.substr(span_begin_, span_end_ - span_begin_) +
                                "' does not fall on token boundaries");
    }
    spec.answer_source_span = {*first, *last};
    return spec;
  }

 private:
  std::string text_;
  std::size_t span_begin_ = 0;
  std::size_t span_end_ = 0;
};

std::string quoted(const std::string& w) { return "\"" + w + "\""; }

void check_exemplars(const ConceptRecord& record, std::span<const ConceptRecord> exemplars,
                     std::size_t expected) {
  if (exemplars.size() != expected) {
    fail(ErrorKind::Argument, "expected " + std::to_string(expected) + " exemplars, got " +
                                  std::to_string(exemplars.size()));
  }
  for (const auto& ex : exemplars) {
    if (ex.concept_id == record.concept_id) {
      fail(ErrorKind::Argument, "exemplar repeats the query concept '" + record.concept_id + "'");
    }
  }
}

const std::string& cloze_sentence(const ConceptRecord& r, const LanguageEntry& e) {
  if (!e.cloze_sentence) {
    fail(ErrorKind::Data, "concept '" + r.concept_id + "' has no cloze sentence for " + e.language);
  }
  return *e.cloze_sentence;
}

const std::string& answer_cue(const ConceptRecord& r, const LanguageEntry& e) {
  if (!e.answer_cue) {
    fail(ErrorKind::Data, "concept '" + r.concept_id + "' has no answer cue for " + e.language);
  }
  return *e.answer_cue;
}

}  // namespace

ConceptRecord parse_record(std::string_view json_line) {
  json doc;
  try {
    doc = json::parse(json_line);
  } catch (const json::exception& e) {
    fail(ErrorKind::Schema, std::string("record is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Schema, "record must be a JSON object");
  ConceptRecord record;
  record.concept_id = required_string(doc, "concept_id", "record");
  if (record.concept_id.empty()) fail(ErrorKind::Schema, "record has an empty concept_id");
  const std::string where = "concept '" + record.concept_id + "'";
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    fail(ErrorKind::Schema, where + ": missing 'entries' array");
  }
  std::set<std::pair<std::string, Script>> seen;
  for (const auto& item : doc["entries"]) {
    if (!item.is_object()) fail(ErrorKind::Schema, where + ": entries must be objects");
    LanguageEntry e;
    e.language = required_string(item, "language", where);
    const std::string script = required_string(item, "script", where);
    if (script == "native") {
      e.script = Script::Native;
    } else if (script == "romanized") {
      e.script = Script::Romanized;
    } else {
      fail(ErrorKind::Schema, where + ": script must be 'native' or 'romanized'");
    }
    const std::string entry_where = where + " [" + e.language + "/" + script + "]";
    e.word = required_string(item, "word", entry_where);
    if (e.word.empty()) fail(ErrorKind::Schema, entry_where + ": empty word");
    e.label = optional_string(item, "label", entry_where).value_or(e.language);
    if (item.contains("synonyms")) {
      if (!item["synonyms"].is_array()) fail(ErrorKind::Schema, entry_where + ": synonyms must be an array");
      for (const auto& s : item["synonyms"]) {
        if (!s.is_string() || s.get<std::string>().empty()) {
          fail(ErrorKind::Schema, entry_where + ": synonyms must be non-empty strings");
        }
        e.synonyms.push_back(s.get<std::string>());
      }
    }
    e.cloze_sentence = optional_string(item, "cloze_sentence", entry_where);
    if (e.cloze_sentence && count_occurrences(*e.cloze_sentence, kClozeBlank) != 1) {
      fail(ErrorKind::Schema, entry_where + ": cloze_sentence must contain exactly one blank");
    }
    e.answer_cue = optional_string(item, "answer_cue", entry_where);
    if (!seen.emplace(e.language, e.script).second) {
      fail(ErrorKind::Schema, entry_where + ": duplicate language/script pair");
    }
    record.entries.push_back(std::move(e));
  }
  return record;
}

std::vector<ConceptRecord> parse_dataset(std::string_view jsonl) {
  std::vector<ConceptRecord> records;
  std::set<std::string> ids;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(line));
    } catch (const Error& e) {
      fail(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(records.back().concept_id).second) {
      fail(ErrorKind::Schema, "line " + std::to_string(line_no) + ": duplicate concept_id '" +
                                  records.back().concept_id + "'");
    }
  }
  return records;
}

std::vector<ConceptRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open dataset " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

PromptSpec build_translation_prompt(const ConceptRecord& record, const LanguageKey& src,
                                    const LanguageKey& tgt,
                                    std::span<const ConceptRecord> exemplars,
                                    const Vocabulary& v) {
  check_exemplars(record, exemplars, kTranslationShots);
  PromptWriter w;
  for (const auto& ex : exemplars) {
    const auto& s = ex.at(src);
    const auto& t = ex.at(tgt);
    w.append(s.label + ": " + quoted(s.word) + " " + t.label + ": " + quoted(t.word));
    w.newline();
  }
  const auto& s = record.at(src);
  const auto& t = record.at(tgt);
  w.append(s.label + ": \"");
  w.append_marked(s.word);
  w.append("\" " + t.label + ":");
  return w.finish(v, Task::Translation, record.concept_id, t);
}

PromptSpec build_repetition_prompt(const ConceptRecord& record, const LanguageKey& lang,
                                   std::span<const ConceptRecord> exemplars,
                                   const Vocabulary& v) {
  check_exemplars(record, exemplars, kRepetitionShots);
  PromptWriter w;
  for (const auto& ex : exemplars) {
    const auto& e = ex.at(lang);
    w.append(e.label + ": " + quoted(e.word) + " " + e.label + ": " + quoted(e.word));
    w.newline();
  }
  const auto& e = record.at(lang);
  w.append(e.label + ": \"");
  w.append_marked(e.word);
  w.append("\" " + e.label + ":");
  return w.finish(v, Task::Repetition, record.concept_id, e);
}

PromptSpec build_cloze_prompt(const ConceptRecord& record, const LanguageKey& lang,
                              std::span<const ConceptRecord> exemplars, const Vocabulary& v) {
  check_exemplars(record, exemplars, kClozeShots);
  PromptWriter w;
  for (const auto& ex : exemplars) {
    const auto& e = ex.at(lang);
    w.append(cloze_sentence(ex, e) + " " + answer_cue(ex, e) + ": " + quoted(e.word));
    w.newline();
  }
  const auto& e = record.at(lang);
  const std::string& sentence = cloze_sentence(record, e);
  const std::string& cue = answer_cue(record, e);
  const auto blank = sentence.find(kClozeBlank);
  w.append(sentence.substr(0, blank));
  w.append_marked(kClozeBlank);
  w.append(sentence.substr(blank + kClozeBlank.size()) + " " + cue + ":");
  return w.finish(v, Task::Cloze, record.concept_id, e);
}

std::size_t shot_count(Task task) noexcept {
  switch (task) {
    case Task::Translation: return kTranslationShots;
    case Task::Repetition: return kRepetitionShots;
    case Task::Cloze: return kClozeShots;
  }
  return 0;
}

std::vector<LanguageKey> required_languages(Task task, const LanguageKey& src,
                                            const LanguageKey& tgt) {
  if (task == Task::Translation) return {src, tgt};
  return {tgt};
}

bool supports(const ConceptRecord& record, Task task, const LanguageKey& src,
              const LanguageKey& tgt) {
  for (const auto& key : required_languages(task, src, tgt)) {
    const auto* e = record.find(key);
    if (!e) return false;
    if (task == Task::Cloze && (!e->cloze_sentence || !e->answer_cue)) return false;
  }
  return true;
}

std::vector<ConceptRecord> select_exemplars(std::span<const ConceptRecord> dataset,
                                            std::size_t query_index, Task task,
                                            const LanguageKey& src, const LanguageKey& tgt,
                                            std::size_t seed) {
  if (query_index >= dataset.size()) fail(ErrorKind::Range, "query index out of range");
  const std::string& query_id = dataset[query_index].concept_id;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (i != query_index && dataset[i].concept_id != query_id &&
        supports(dataset[i], task, src, tgt)) {
      pool.push_back(i);
    }
  }
  const std::size_t count = shot_count(task);
  if (pool.size() < count) {
    fail(ErrorKind::Data, "only " + std::to_string(pool.size()) + " records can serve as " +
                              std::string(to_string(task)) + " exemplars; need " +
                              std::to_string(count));
  }
  const std::size_t start = (query_index + seed) % pool.size();
  std::vector<ConceptRecord> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) out.push_back(dataset[pool[(start + m) % pool.size()]]);
  return out;
}

PromptSpec build_task_prompt(std::span<const ConceptRecord> dataset, std::size_t query_index,
                             Task task, const LanguageKey& src, const LanguageKey& tgt,
                             std::size_t seed, const Vocabulary& v) {
  const auto exemplars = select_exemplars(dataset, query_index, task, src, tgt, seed);
  const auto& record = dataset[query_index];
  switch (task) {
    case Task::Translation: return build_translation_prompt(record, src, tgt, exemplars, v);
    case Task::Repetition: return build_repetition_prompt(record, tgt, exemplars, v);
    case Task::Cloze: return build_cloze_prompt(record, tgt, exemplars, v);
  }
  fail(ErrorKind::Argument, "unknown task");
}

std::vector<TokenId> answer_tokens(const std::string& word, const Vocabulary& v) {
  if (word.empty()) fail(ErrorKind::Argument, "answer word is empty");
  return v.encode(" " + word);
}

}  // namespace romanlens
