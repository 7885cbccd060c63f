#include "manifest.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "romanlens/error.hpp"
#include "romanlens/parallel.hpp"

namespace romanlens::cli {

using nlohmann::json;

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "SHA-256 is unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

Manifest::Manifest(const Settings& s) {
  doc_ = {{"tool", "romanlens"},
          {"version", ROMANLENS_VERSION},
          {"command", s.command},
          {"argv", s.argv},
          {"threads", worker_count()},
          {"config",
           {{"checkpoint", s.checkpoint},
            {"vocab", s.vocab},
            {"dataset", s.dataset},
            {"out", s.out},
            {"task", s.task},
            {"scenario", s.scenario},
            {"mode", s.mode},
            {"source", s.source},
            {"target", s.target},
            {"english", s.english},
            {"threshold", s.threshold},
            {"window", s.window},
            {"seed", s.seed},
            {"text", s.text},
            {"concept", s.concept_id},
            {"layers", s.layers},
            {"source_concept", s.source_concept},
            {"target_concept", s.target_concept},
            {"source_langs", s.source_langs},
            {"target_input", s.target_input},
            {"output_lang", s.output_lang}}},
          {"inputs", json::object()},
          {"outputs", json::array()}};
  if (!s.config.empty()) doc_["config_file"] = s.config;
}

void Manifest::input(const std::string& role, const std::filesystem::path& path) {
  doc_["inputs"][role] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void Manifest::output(const std::filesystem::path& path) {
  doc_["outputs"].push_back({{"path", path.filename().string()}, {"sha256", sha256_file(path)}});
}

void Manifest::note(const std::string& key, json value) { doc_[key] = std::move(value); }

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write manifest " + path.string());
  f << doc_.dump(2) << "\n";
  if (!f) fail(ErrorKind::Io, "failed writing manifest " + path.string());
}

}  // namespace romanlens::cli
