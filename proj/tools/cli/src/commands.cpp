#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "manifest.hpp"
#include "romanlens/cli.hpp"
#include "romanlens/error.hpp"
#include "romanlens/langprob.hpp"
#include "romanlens/latent_rom.hpp"
#include "romanlens/lens.hpp"
#include "romanlens/patching.hpp"
#include "romanlens/romanize.hpp"
#include "settings.hpp"

namespace romanlens::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError{std::string(flag) + " is required"};
}

void check_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) throw UsageError{"--threshold must lie in (0, 1)"};
}

fs::path output_dir(const Settings& s) {
  require(s.out, "--out");
  std::error_code ec;
  fs::create_directories(s.out, ec);
  if (ec || !fs::is_directory(s.out)) fail(ErrorKind::Io, "cannot create output directory " + s.out);
  return s.out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::size_t concept_index(const std::vector<ConceptRecord>& dataset, const std::string& id) {
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].concept_id == id) return i;
  }
  throw UsageError{"concept '" + id + "' is not in the dataset"};
}

LayerWindow parse_layers(const std::string& text, std::size_t n_states) {
  if (text.empty()) return {0, n_states - 1};
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError{"--layers expects lo:hi, got '" + text + "'"};
  }
}

json prompt_json(const PromptSpec& p) {
  return {{"concept_id", p.concept_id},
          {"text", p.text},
          {"token_ids", p.token_ids},
          {"answer_word", p.answer_word},
          {"answer_language", p.answer_language},
          {"answer_script", std::string(to_string(p.answer_script))},
          {"word_span", {p.answer_source_span.first, p.answer_source_span.last}},
          {"word_last_position", p.source_position()},
          {"prompt_last_position", p.prompt_end}};
}

void write_json(const json& doc, const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + path.string());
  f << doc.dump(2) << "\n";
  if (!f) fail(ErrorKind::Io, "failed writing " + path.string());
}

struct Inputs {
  Checkpoint ckpt;
  Vocabulary vocab;
  std::vector<ConceptRecord> dataset;
};

Inputs load_inputs(const Settings& s, Manifest& manifest, bool need_dataset = true) {
  require(s.checkpoint, "--checkpoint");
  require(s.vocab, "--vocab");
  if (need_dataset) require(s.dataset, "--dataset");
  Inputs in{load_checkpoint(s.checkpoint), load_vocabulary(s.vocab), {}};
  manifest.input("checkpoint", s.checkpoint);
  manifest.input("vocab", s.vocab);
  if (!s.dataset.empty()) {
    in.dataset = load_dataset(s.dataset);
    manifest.input("dataset", s.dataset);
  }
  if (in.vocab.size() != in.ckpt.config().vocab_size) {
    fail(ErrorKind::Shape, "vocabulary has " + std::to_string(in.vocab.size()) +
                               " tokens but the checkpoint expects " +
                               std::to_string(in.ckpt.config().vocab_size));
  }
  return in;
}

}  // namespace

int run_lens(const Settings& s, Streams io) {
  Manifest manifest(s);
  const fs::path dir = output_dir(s);
  const bool from_dataset = !s.concept_id.empty();
  if (from_dataset == !s.text.empty()) throw UsageError{"give exactly one of --text or --concept"};
  const Inputs in = load_inputs(s, manifest, from_dataset);

  PromptSpec prompt;
  if (from_dataset) {
    const std::size_t index = concept_index(in.dataset, s.concept_id);
    const auto target = LanguageKey::parse(s.target);
    const auto source = LanguageKey::parse(s.source.empty() ? "fr" : s.source);
    prompt = build_task_prompt(in.dataset, index, parse_task(s.task), source, target, s.seed, in.vocab);
  } else {
    prompt.text = s.text;
    prompt.token_ids = in.vocab.encode(s.text);
    if (prompt.token_ids.empty()) throw UsageError{"--text is empty"};
    prompt.prompt_end = prompt.token_ids.size() - 1;
  }

  const auto grid = logit_lens(forward(prompt.token_ids, in.ckpt), in.ckpt);
  const LayerWindow window = parse_layers(s.layers, grid.n_layers);
  write_lens_csv(grid, dir / "lens.csv");
  emit_heatmap(grid, window, in.vocab, dir / "lens.svg");
  manifest.output(dir / "lens.csv");
  manifest.output(dir / "lens.svg");
  manifest.note("prompt", prompt_json(prompt));
  manifest.write(dir / "manifest.json");
  io.out << "lens: " << grid.n_layers << " states x " << grid.n_positions << " positions -> "
         << (dir / "lens.csv").string() << ", " << (dir / "lens.svg").string() << "\n";
  return 0;
}

int run_latent_rom(const Settings& s, Streams io) {
  check_threshold(s.threshold);
  if (s.window == 0) throw UsageError{"--window must be positive"};
  Manifest manifest(s);
  const fs::path dir = output_dir(s);
  const Inputs in = load_inputs(s, manifest);
  const Task task = parse_task(s.task);

  std::vector<Scenario> scenarios;
  if (s.scenario == "all") {
    scenarios = {Scenario::Constrained, Scenario::FirstSubword, Scenario::LastSubword};
  } else {
    scenarios = {parse_scenario(s.scenario)};
  }
  ScenarioOptions options;
  options.source = LanguageKey::parse(s.source.empty() ? "en" : s.source);
  options.target_language = s.target;
  options.english_language = s.english;
  options.threshold = s.threshold;
  options.window = s.window;
  options.seed = s.seed;

  json summary = json::array();
  for (Scenario scenario : scenarios) {
    const auto report = run_scenario(scenario, task, in.dataset, in.ckpt, in.vocab, options);
    const std::string name(to_string(scenario));
    const fs::path csv = dir / ("latent_rom_" + name + ".csv");
    const fs::path discards = dir / ("discards_" + name + ".csv");
    write_report_csv(report, csv);
    write_discard_csv(report, discards);
    manifest.output(csv);
    manifest.output(discards);
    json entry{{"scenario", name},
               {"task", std::string(to_string(task))},
               {"language", report.language},
               {"n_total", report.n_total},
               {"n_samples", report.n_samples()},
               {"n_discarded", report.discarded.size()},
               {"window_layers", report.window_layers},
               {"latent_fraction", report.fractions}};
    if (scenario == Scenario::LastSubword) entry["romanization_frequency"] = romanization_frequency(report);
    summary.push_back(entry);
    io.out << "latent-rom " << name << ": " << report.n_samples() << " kept, "
           << report.discarded.size() << " discarded of " << report.n_total << "\n";
  }
  write_json(summary, dir / "latent_rom_summary.json");
  manifest.output(dir / "latent_rom_summary.json");
  manifest.write(dir / "manifest.json");
  return 0;
}

int run_patch(const Settings& s, Streams io) {
  require(s.source_concept, "--source-concept");
  require(s.target_concept, "--target-concept");
  std::vector<PatchMode> modes;
  if (s.mode == "both") {
    modes = {PatchMode::Single, PatchMode::Multi};
  } else {
    modes = {parse_patch_mode(s.mode)};
  }
  const auto langs = split_list(s.source_langs);
  if (langs.empty()) throw UsageError{"--source-langs lists no languages"};

  Manifest manifest(s);
  const fs::path dir = output_dir(s);
  const Inputs in = load_inputs(s, manifest);
  const std::size_t src_index = concept_index(in.dataset, s.source_concept);
  const std::size_t tgt_index = concept_index(in.dataset, s.target_concept);
  const LanguageKey output = LanguageKey::parse(s.output_lang);
  const LanguageKey english{s.english, Script::Native};

  const auto target = build_task_prompt(in.dataset, tgt_index, Task::Translation,
                                        LanguageKey::parse(s.target_input), output, s.seed, in.vocab);
  const auto& src_record = in.dataset[src_index];
  const auto& tgt_record = in.dataset[tgt_index];
  std::vector<std::string> english_words = src_record.at(english).all_words();
  for (const auto& w : tgt_record.at(english).all_words()) english_words.push_back(w);

  json experiments = json::object();
  json kl = json::object();
  std::map<Script, std::vector<ConceptCurve>> by_script;
  for (Script script : {Script::Native, Script::Romanized}) {
    std::vector<PromptSpec> sources;
    for (const auto& lang : langs) {
      const LanguageKey key{LanguageKey::parse(lang).code, script};
      sources.push_back(build_task_prompt(in.dataset, src_index, Task::Translation, key, output,
                                          s.seed, in.vocab));
    }
    const auto exp = make_experiment(sources, target,
                                     {src_record.concept_id, src_record.at(output).all_words()},
                                     {tgt_record.concept_id, tgt_record.at(output).all_words()},
                                     english_words, in.vocab);
    json prompts = json::array();
    for (const auto& p : exp.sources) prompts.push_back(prompt_json(p));
    experiments[std::string(to_string(script))] = {{"sources", prompts},
                                                   {"target", prompt_json(exp.target)}};
    for (PatchMode mode : modes) by_script[script].push_back(sweep(exp, in.ckpt, in.vocab, mode));

    const fs::path csv = dir / ("curves_" + std::string(to_string(script)) + ".csv");
    write_curve_csv(by_script[script], csv);
    manifest.output(csv);
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto& native = by_script[Script::Native][m];
    const auto& romanized = by_script[Script::Romanized][m];
    json entry;
    try {
      entry = compare_curves_kl(native.p_source, romanized.p_source);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedStatistic) throw;
      entry = nullptr;
    }
    kl[std::string(to_string(modes[m]))] = entry;
    io.out << "patch " << to_string(modes[m]) << ": KL(native || romanized) = "
           << (entry.is_null() ? std::string("undefined") : entry.dump()) << "\n";
  }
  write_json({{"source_concept", s.source_concept},
              {"target_concept", s.target_concept},
              {"prompts", experiments},
              {"kl_source_concept_native_vs_romanized", kl}},
             dir / "experiment.json");
  manifest.output(dir / "experiment.json");
  manifest.write(dir / "manifest.json");
  return 0;
}

int run_langprob(const Settings& s, Streams io) {
  check_threshold(s.threshold);
  Manifest manifest(s);
  const fs::path dir = output_dir(s);
  const Inputs in = load_inputs(s, manifest);
  ComparisonOptions options;
  options.source = LanguageKey::parse(s.source.empty() ? "fr" : s.source);
  options.target_language = s.target;
  options.english_language = s.english;
  options.threshold = s.threshold;
  options.seed = s.seed;
  const auto report = compare_scripts(in.dataset, in.ckpt, in.vocab, options);
  write_comparison_csv(report, dir / "langprob.csv");
  write_comparison_summary(report, dir / "langprob_summary.json");
  manifest.output(dir / "langprob.csv");
  manifest.output(dir / "langprob_summary.json");
  manifest.write(dir / "manifest.json");
  io.out << "langprob: " << report.n_kept() << " kept, " << report.discarded.size()
         << " discarded; " << report.differences.size() << " samples emerge in both scripts";
  if (report.mean_difference) io.out << ", mean native - romanized = " << *report.mean_difference;
  io.out << "\n";
  return 0;
}

int run_romanize(const Settings& s, Streams io) {
  require(s.scheme, "--scheme");
  const Scheme scheme = load_scheme(s.scheme);
  std::stringstream buf;
  buf << io.in.rdbuf();
  io.out << (s.reverse ? scheme.deromanize(buf.str()) : scheme.romanize(buf.str()));
  return 0;
}

int run_validate(const Settings& s, Streams io) {
  if (s.vocab.empty() && s.dataset.empty() && s.checkpoint.empty() && s.scheme.empty()) {
    throw UsageError{"nothing to validate; pass --vocab, --dataset, --checkpoint or --scheme"};
  }
  Manifest manifest(s);
  std::vector<std::string> problems;
  std::optional<Vocabulary> vocab;
  if (!s.vocab.empty()) {
    vocab = load_vocabulary(s.vocab);
    manifest.input("vocab", s.vocab);
    io.out << "vocabulary: " << vocab->size() << " tokens, space marker '" << vocab->space_marker()
           << "'\n";
  }
  if (!s.dataset.empty()) {
    const auto dataset = load_dataset(s.dataset);
    manifest.input("dataset", s.dataset);
    std::map<std::string, std::size_t> per_key;
    for (const auto& r : dataset) {
      for (const auto& e : r.entries) {
        ++per_key[LanguageKey{e.language, e.script}.str()];
        if (!vocab) continue;
        for (const auto& w : e.all_words()) {
          try {
            vocab->encode(" " + w);
          } catch (const Error& err) {
            problems.push_back(r.concept_id + " [" + LanguageKey{e.language, e.script}.str() +
                               "]: " + err.what());
          }
        }
      }
    }
    io.out << "dataset: " << dataset.size() << " records;";
    for (const auto& [key, n] : per_key) io.out << " " << key << "=" << n;
    io.out << "\n";
  }
  if (!s.checkpoint.empty()) {
    const auto ckpt = load_checkpoint(s.checkpoint);
    manifest.input("checkpoint", s.checkpoint);
    const auto& c = ckpt.config();
    io.out << "checkpoint: " << c.n_layers << " layers, dim " << c.dim << ", vocab " << c.vocab_size
           << "\n";
    if (vocab && vocab->size() != c.vocab_size) {
      problems.push_back("checkpoint vocab_size " + std::to_string(c.vocab_size) +
                         " differs from the vocabulary's " + std::to_string(vocab->size()));
    }
  }
  if (!s.scheme.empty()) {
    const auto scheme = load_scheme(s.scheme);
    manifest.input("scheme", s.scheme);
    io.out << "scheme: " << scheme.name() << " ("
           << (scheme.mode() == SchemeMode::Lossless ? "lossless" : "lossy") << ", "
           << scheme.rules().size() << " rules)\n";
  }
  if (!s.out.empty()) {
    const fs::path dir = output_dir(s);
    manifest.note("problems", problems);
    manifest.write(dir / "manifest.json");
  }
  for (const auto& p : problems) io.err << "problem: " << p << "\n";
  io.out << (problems.empty() ? "ok" : std::to_string(problems.size()) + " problem(s)") << "\n";
  return problems.empty() ? kExitOk : kExitData;
}

int run_random_checkpoint(const Settings& s, Streams io) {
  require(s.out, "--out");
  Manifest manifest(s);
  ModelConfig c;
  if (!s.vocab.empty()) {
    c.vocab_size = load_vocabulary(s.vocab).size();
    manifest.input("vocab", s.vocab);
  } else {
    c.vocab_size = s.vocab_size;
  }
  if (c.vocab_size == 0) throw UsageError{"pass --vocab or --vocab-size"};
  c.n_layers = s.n_layers;
  c.dim = s.dim;
  c.n_heads = s.heads;
  c.n_kv_heads = s.kv_heads;
  c.mlp_hidden = s.hidden == 0 ? 2 * s.dim : s.hidden;
  c.max_seq_len = s.max_seq;
  const auto ckpt = Checkpoint::random(c, s.seed, s.unembed_scale);
  save_checkpoint(ckpt, s.out);
  manifest.output(s.out);
  manifest.write(s.out + ".manifest.json");
  io.out << "random checkpoint: " << c.n_layers << " layers, dim " << c.dim << ", vocab "
         << c.vocab_size << " -> " << s.out << "\n";
  return 0;
}

}  // namespace romanlens::cli
