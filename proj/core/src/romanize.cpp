#include "romanlens/romanize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "romanlens/error.hpp"
#include "romanlens/utf8.hpp"

namespace romanlens {

using nlohmann::json;

namespace {

std::vector<RomanizationRule> parse_rules(const json& rules, const char* field) {
  if (!rules.is_array()) fail(ErrorKind::Parse, std::string("scheme '") + field + "' must be an array");
  std::vector<RomanizationRule> out;
  out.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string()) {
      fail(ErrorKind::Parse, std::string("malformed ") + field + " entry " + std::to_string(i) +
                                 ": expected [source, target]");
    }
    out.push_back({r[0].get<std::string>(), r[1].get<std::string>()});
  }
  return out;
}

}  // namespace

Scheme::Table Scheme::build(const std::vector<RomanizationRule>& rules) {
  Table t;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::u32string src = utf8::decode(rules[i].source);
    if (src.empty()) fail(ErrorKind::Parse, "rule " + std::to_string(i) + " has an empty source");
    if (!t.map.emplace(src, utf8::decode(rules[i].target)).second) {
      fail(ErrorKind::Parse, "duplicate rule source '" + rules[i].source + "'");
    }
    t.max_len = std::max(t.max_len, src.size());
    t.alphabet.insert(src.begin(), src.end());
  }
  return t;
}

Scheme::Scheme(std::string name, SchemeMode mode, std::vector<RomanizationRule> rules,
               std::vector<RomanizationRule> inverse_rules)
    : name_(std::move(name)),
      mode_(mode),
      rules_(std::move(rules)),
      inverse_rules_(std::move(inverse_rules)) {
  forward_ = build(rules_);
  if (mode_ == SchemeMode::Lossy) {
    if (!inverse_rules_.empty()) {
      fail(ErrorKind::Parse, "scheme '" + name_ + "': inverse_rules are only valid when lossless");
    }
    return;
  }

  if (inverse_rules_.empty()) {
    for (const auto& r : rules_) {
      if (r.target.empty()) {
        fail(ErrorKind::Losslessness, "scheme '" + name_ + "': rule '" + r.source +
                                          "' maps to an empty string and cannot be inverted");
      }
      inverse_rules_.push_back({r.target, r.source});
    }
  }
  try {
    inverse_ = build(inverse_rules_);
  } catch (const Error& e) {
    fail(ErrorKind::Losslessness, "scheme '" + name_ + "': " + e.what());
  }
  for (const auto& r : rules_) {
    std::string back;
    try {
      back = deromanize(romanize(r.source));
    } catch (const Error& e) {
      fail(ErrorKind::Losslessness,
           "scheme '" + name_ + "': rule '" + r.source + "' does not invert: " + e.what());
    }
    if (back != r.source) {
      fail(ErrorKind::Losslessness, "scheme '" + name_ + "': rule '" + r.source +
                                        "' round-trips to '" + back + "'");
    }
  }
  // Adjacent pairs catch targets that concatenate into another rule's target.
  for (const auto& a : rules_) {
    for (const auto& b : rules_) {
      const std::string text = a.source + b.source;
      std::string back;
      try {
        back = deromanize(romanize(text));
      } catch (const Error&) {
        back.clear();
      }
      if (back != text) {
        fail(ErrorKind::Losslessness, "scheme '" + name_ + "': rules '" + a.source + "' and '" +
                                          b.source + "' do not invert when adjacent");
      }
    }
  }
}

std::string Scheme::romanize(std::string_view text) const {
  const std::u32string cps = utf8::decode(text);
  std::u32string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    bool matched = false;
    for (std::size_t len = std::min(forward_.max_len, cps.size() - i); len > 0; --len) {
      auto it = forward_.map.find(cps.substr(i, len));
      if (it != forward_.map.end()) {
        out += it->second;
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (cps[i] >= 0x80) {
      fail(ErrorKind::Coverage, "scheme '" + name_ + "' does not cover '" + utf8::encode(cps[i]) +
                                    "' at offset " + std::to_string(i));
    }
    out.push_back(cps[i++]);
  }
  return utf8::encode(out);
}

std::string Scheme::deromanize(std::string_view text) const {
  if (mode_ != SchemeMode::Lossless) {
    fail(ErrorKind::Mode, "scheme '" + name_ + "' is lossy and cannot be inverted");
  }
  const std::u32string cps = utf8::decode(text);
  std::u32string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    bool matched = false;
    for (std::size_t len = std::min(inverse_.max_len, cps.size() - i); len > 0; --len) {
      auto it = inverse_.map.find(cps.substr(i, len));
      if (it != inverse_.map.end()) {
        out += it->second;
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (inverse_.alphabet.count(cps[i])) {
      fail(ErrorKind::Inversion, "scheme '" + name_ + "': cannot invert '" +
                                     utf8::encode(cps[i]) + "' at offset " + std::to_string(i));
    }
    out.push_back(cps[i++]);
  }
  return utf8::encode(out);
}

Scheme parse_scheme(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("scheme is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("name") || !doc.contains("mode") ||
      !doc.contains("rules") || !doc["name"].is_string() || !doc["mode"].is_string()) {
    fail(ErrorKind::Parse, "scheme needs string 'name', 'mode' and a 'rules' array");
  }
  const std::string mode = doc["mode"].get<std::string>();
  SchemeMode m;
  if (mode == "lossless") {
    m = SchemeMode::Lossless;
  } else if (mode == "lossy") {
    m = SchemeMode::Lossy;
  } else {
    fail(ErrorKind::Parse, "scheme mode must be 'lossless' or 'lossy', got '" + mode + "'");
  }
  std::vector<RomanizationRule> inverse;
  if (doc.contains("inverse_rules") && !doc["inverse_rules"].is_null()) {
    inverse = parse_rules(doc["inverse_rules"], "inverse_rules");
  }
  return Scheme(doc["name"].get<std::string>(), m, parse_rules(doc["rules"], "rules"),
                std::move(inverse));
}

Scheme load_scheme(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open scheme file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scheme(buf.str());
}

}  // namespace romanlens
