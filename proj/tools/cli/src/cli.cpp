#include "romanlens/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "romanlens/error.hpp"
#include "settings.hpp"

namespace romanlens::cli {

namespace {

using nlohmann::json;

struct Command {
  CLI::App* app;
  std::function<int(const Settings&, Streams)> handler;
};

// Values from --config fill every option the command line left unset.
void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, "config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Parse, "config file " + path + " must hold a JSON object");

  std::map<std::string, CLI::Option*> by_name;
  for (CLI::Option* opt : sub.get_options()) {
    for (const auto& name : opt->get_lnames()) by_name.emplace(name, opt);
  }
  for (const auto& [key, value] : doc.items()) {
    auto it = by_name.find(key);
    if (it == by_name.end() || key == "config" || key == "help") {
      throw UsageError{"config key '" + key + "' is not an option of '" + sub.get_name() + "'"};
    }
    CLI::Option* opt = it->second;
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "true" : "false";
    } else if (value.is_number()) {
      text = value.dump();
    } else {
      throw UsageError{"config key '" + key + "' must be a string, number or boolean"};
    }
    opt->add_result(text);
    opt->run_callback();
  }
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::Argument ? kExitUsage : kExitData; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  Settings s;
  CLI::App app{"Logit-lens, latent-romanization, patching and language-probability analyses.",
               "romanlens"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ROMANLENS_VERSION);

  std::vector<Command> commands;
  auto command = [&](const char* name, const char* help, auto handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", s.config, "JSON file of option values; flags override it");
    commands.push_back({sub, handler});
    return sub;
  };
  auto model_inputs = [&](CLI::App* sub) {
    sub->add_option("--checkpoint", s.checkpoint, "RLNS checkpoint file");
    sub->add_option("--vocab", s.vocab, "vocabulary JSON");
  };
  auto analysis = [&](CLI::App* sub) {
    model_inputs(sub);
    sub->add_option("--dataset", s.dataset, "concept dataset (JSONL)");
    sub->add_option("--out", s.out, "output directory");
    sub->add_option("--seed", s.seed, "exemplar rotation seed");
  };

  CLI::App* lens = command("lens", "Logit-lens grid (CSV and SVG) for one prompt", run_lens);
  analysis(lens);
  lens->add_option("--text", s.text, "raw prompt text");
  lens->add_option("--concept", s.concept_id, "build the prompt for this dataset concept");
  lens->add_option("--task", s.task, "translation | repetition | cloze");
  lens->add_option("--source", s.source, "source language for translation prompts");
  lens->add_option("--target", s.target, "answer language, e.g. hi or hi:rom");
  lens->add_option("--layers", s.layers, "heatmap layer window lo:hi (default: all)");

  CLI::App* latent = command("latent-rom", "Latent fractions and romanization frequency", run_latent_rom);
  analysis(latent);
  latent->add_option("--task", s.task, "translation | repetition | cloze");
  latent->add_option("--scenario", s.scenario, "constrained | first_subword | last_subword | all");
  latent->add_option("--source", s.source, "source language for translation prompts (default en)");
  latent->add_option("--target", s.target, "target language code");
  latent->add_option("--english", s.english, "English language code in the dataset");
  latent->add_option("--threshold", s.threshold, "latent condition threshold");
  latent->add_option("--window", s.window, "number of final layers analyzed");

  CLI::App* patch = command("patch", "Activation-patching sweeps, native vs romanized sources", run_patch);
  analysis(patch);
  patch->add_option("--source-concept", s.source_concept, "concept donating residuals");
  patch->add_option("--target-concept", s.target_concept, "concept of the patched prompt");
  patch->add_option("--source-langs", s.source_langs, "comma-separated source input languages");
  patch->add_option("--target-input", s.target_input, "input language of the target prompt");
  patch->add_option("--output-lang", s.output_lang, "output language of all prompts");
  patch->add_option("--mode", s.mode, "single | multi | both");

  CLI::App* langprob = command("langprob", "Native vs romanized target language probabilities", run_langprob);
  analysis(langprob);
  langprob->add_option("--source", s.source, "source language (default fr)");
  langprob->add_option("--target", s.target, "target language code");
  langprob->add_option("--english", s.english, "English language code in the dataset");
  langprob->add_option("--threshold", s.threshold, "emergence threshold");

  CLI::App* romanize = command("romanize", "Transliterate stdin to stdout", run_romanize);
  romanize->add_option("--scheme", s.scheme, "romanization scheme JSON");
  romanize->add_flag("--reverse", s.reverse, "invert a lossless scheme");

  CLI::App* validate = command("validate", "Audit vocabulary, dataset, checkpoint and scheme files", run_validate);
  model_inputs(validate);
  validate->add_option("--dataset", s.dataset, "concept dataset (JSONL)");
  validate->add_option("--scheme", s.scheme, "romanization scheme JSON");
  validate->add_option("--out", s.out, "directory for the manifest");

  CLI::App* random = command("random-checkpoint", "Write a random checkpoint", run_random_checkpoint);
  random->add_option("--vocab", s.vocab, "vocabulary whose size sets vocab_size");
  random->add_option("--vocab-size", s.vocab_size, "vocab_size when no vocabulary is given");
  random->add_option("--n-layers", s.n_layers, "decoder layers");
  random->add_option("--dim", s.dim, "model width");
  random->add_option("--heads", s.heads, "attention heads");
  random->add_option("--kv-heads", s.kv_heads, "key/value heads");
  random->add_option("--hidden", s.hidden, "MLP width (default 2 x dim)");
  random->add_option("--max-seq", s.max_seq, "maximum sequence length");
  random->add_option("--unembed-scale", s.unembed_scale, "unembedding scale");
  random->add_option("--seed", s.seed, "weight seed");
  random->add_option("--out", s.out, "checkpoint path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (dynamic_cast<const CLI::CallForVersion*>(&e)) {
      out << e.what() << "\n";
      return kExitOk;
    }
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n";
    const auto used = app.get_subcommands();
    err << (used.empty() ? app.help() : used.front()->help());
    return kExitUsage;
  }

  const auto it = std::find_if(commands.begin(), commands.end(),
                               [](const Command& c) { return c.app->parsed(); });
  s.command = it->app->get_name();
  s.argv = args;
  try {
    if (!s.config.empty()) apply_config(*it->app, s.config);
    return it->handler(s, Streams{out, err, in});
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n\n" << it->app->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace romanlens::cli
