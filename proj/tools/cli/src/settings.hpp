#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace romanlens::cli {

struct Settings {
  std::string command;
  std::vector<std::string> argv;

  std::string config;
  std::string checkpoint;
  std::string vocab;
  std::string dataset;
  std::string out;
  std::string scheme;

  std::string task = "translation";
  std::string scenario = "constrained";
  std::string mode = "both";
  std::string source;  // empty: the command's own default
  std::string target = "hi";
  std::string english = "en";
  double threshold = 0.1;
  std::size_t window = 10;
  std::size_t seed = 0;

  // lens
  std::string text;
  std::string concept_id;
  std::string layers;

  // patch
  std::string source_concept;
  std::string target_concept;
  std::string source_langs = "hi";
  std::string target_input = "de";
  std::string output_lang = "fr";

  // romanize
  bool reverse = false;

  // random-checkpoint
  std::size_t n_layers = 4;
  std::size_t dim = 32;
  std::size_t heads = 4;
  std::size_t kv_heads = 2;
  std::size_t hidden = 0;
  std::size_t vocab_size = 0;
  std::size_t max_seq = 512;
  float unembed_scale = 1.0f;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
};

// Thrown for problems the user fixes on the command line.
struct UsageError {
  std::string message;
};

int run_lens(const Settings& s, Streams io);
int run_latent_rom(const Settings& s, Streams io);
int run_patch(const Settings& s, Streams io);
int run_langprob(const Settings& s, Streams io);
int run_romanize(const Settings& s, Streams io);
int run_validate(const Settings& s, Streams io);
int run_random_checkpoint(const Settings& s, Streams io);

}  // namespace romanlens::cli
