#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace romanlens {

enum class SchemeMode { Lossless, Lossy };

struct RomanizationRule {
  std::string source;
  std::string target;
};

/// Table-driven transliteration scheme. Rules apply left to right, longest
/// source first; ASCII with no matching rule passes through unchanged.
class Scheme {
 public:
  Scheme(std::string name, SchemeMode mode, std::vector<RomanizationRule> rules,
         std::vector<RomanizationRule> inverse_rules = {});

  const std::string& name() const noexcept { return name_; }
  SchemeMode mode() const noexcept { return mode_; }
  const std::vector<RomanizationRule>& rules() const noexcept { return rules_; }
  const std::vector<RomanizationRule>& inverse_rules() const noexcept { return inverse_rules_; }

  std::string romanize(std::string_view text) const;
  std::string deromanize(std::string_view text) const;

 private:
  struct Table {
    std::unordered_map<std::u32string, std::u32string> map;
    std::size_t max_len = 0;
    std::unordered_set<char32_t> alphabet;  // code points used by any source
  };
  static Table build(const std::vector<RomanizationRule>& rules);

  std::string name_;
  SchemeMode mode_;
  std::vector<RomanizationRule> rules_;
  std::vector<RomanizationRule> inverse_rules_;
  Table forward_;
  Table inverse_;
};

Scheme load_scheme(const std::filesystem::path& path);
Scheme parse_scheme(std::string_view json_text);

inline std::string romanize(std::string_view text, const Scheme& s) { return s.romanize(text); }
inline std::string deromanize(std::string_view text, const Scheme& s) { return s.deromanize(text); }

}  // namespace romanlens
