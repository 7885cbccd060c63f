#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "settings.hpp"

namespace romanlens::cli {

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Reproducibility record: settings, toolkit version, and digests of every
/// input and output file.
class Manifest {
 public:
  explicit Manifest(const Settings& s);

  void input(const std::string& role, const std::filesystem::path& path);
  void output(const std::filesystem::path& path);
  void note(const std::string& key, nlohmann::json value);

  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::json doc_;
};

}  // namespace romanlens::cli
