#include "romanlens/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "romanlens/error.hpp"
#include "romanlens/utf8.hpp"

namespace romanlens {

using nlohmann::json;

Vocabulary::Vocabulary(std::string space_marker, std::vector<std::string> surfaces)
    : space_marker_(std::move(space_marker)), surfaces_(std::move(surfaces)) {
  if (space_marker_.empty()) fail(ErrorKind::Schema, "vocabulary space_marker is empty");
  if (space_marker_.find(' ') != std::string::npos) {
    fail(ErrorKind::Schema, "vocabulary space_marker may not contain a space");
  }
  utf8::decode(space_marker_);
  index_.reserve(surfaces_.size());
  for (std::size_t id = 0; id < surfaces_.size(); ++id) {
    const std::string& s = surfaces_[id];
    if (s.empty()) fail(ErrorKind::Schema, "token " + std::to_string(id) + " has an empty surface");
    try {
      utf8::decode(s);
    } catch (const Error&) {
      fail(ErrorKind::Schema, "token " + std::to_string(id) + " is not valid UTF-8");
    }
    if (s.find(' ') != std::string::npos) {
      fail(ErrorKind::Schema, "token " + std::to_string(id) + " contains a literal space");
    }
    if (s.find(space_marker_, 1) != std::string::npos) {
      fail(ErrorKind::Schema,
           "token " + std::to_string(id) + " has the space marker past its first position");
    }
    if (!index_.emplace(s, static_cast<TokenId>(id)).second) {
      fail(ErrorKind::Schema, "duplicate surface '" + s + "' at id " + std::to_string(id));
    }
    max_surface_bytes_ = std::max(max_surface_bytes_, s.size());
  }
}

const std::string& Vocabulary::surface(TokenId id) const {
  if (id >= surfaces_.size()) {
    fail(ErrorKind::Range, "token id " + std::to_string(id) + " out of range for vocabulary of " +
                               std::to_string(surfaces_.size()));
  }
  return surfaces_[id];
}

std::optional<TokenId> Vocabulary::find(std::string_view surface) const {
  auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> Vocabulary::encode(std::string_view text) const {
  const std::u32string cps = utf8::decode(text);
  const std::u32string marker_cps = utf8::decode(space_marker_);

  // Rewritten text plus, per byte, the code point offset in the original.
  std::string rewritten;
  std::vector<std::size_t> origin;
  rewritten.reserve(text.size() * 2);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (marker_cps.size() == 1 && cps[i] == marker_cps[0]) {
      fail(ErrorKind::Coverage, "text contains the space marker itself at offset " +
                                    std::to_string(i));
    }
    const std::string piece = cps[i] == U' ' ? space_marker_ : utf8::encode(cps[i]);
    rewritten += piece;
    origin.insert(origin.end(), piece.size(), i);
  }
  if (marker_cps.size() > 1 && text.find(space_marker_) != std::string_view::npos) {
    fail(ErrorKind::Coverage, "text contains the space marker itself");
  }

  std::vector<TokenId> ids;
  std::size_t pos = 0;
  while (pos < rewritten.size()) {
    const std::size_t longest = std::min(max_surface_bytes_, rewritten.size() - pos);
    bool matched = false;
    for (std::size_t len = longest; len > 0; --len) {
      auto it = index_.find(rewritten.substr(pos, len));
      if (it != index_.end()) {
        ids.push_back(it->second);
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      const std::size_t offset = origin[pos];
      const std::string ch = utf8::encode(cps[offset]);
      fail(ErrorKind::Coverage, "no vocabulary entry covers character '" +
                                    (cps[offset] == U' ' ? space_marker_ : ch) +
                                    "' at offset " + std::to_string(offset));
    }
  }
  return ids;
}

std::string Vocabulary::display(TokenId id) const {
  const std::string& s = surface(id);
  if (s.rfind(space_marker_, 0) == 0) return " " + s.substr(space_marker_.size());
  return s;
}

std::string Vocabulary::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) out += display(id);
  return out;
}

std::set<TokenId> Vocabulary::scan(const std::set<std::string>& candidates) const {
  std::set<TokenId> ids;
  for (const auto& c : candidates) {
    if (auto id = find(c)) ids.insert(*id);
  }
  return ids;
}

Vocabulary parse_vocabulary(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("vocabulary is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("space_marker") || !doc.contains("tokens") ||
      !doc["space_marker"].is_string() || !doc["tokens"].is_array()) {
    fail(ErrorKind::Schema, "vocabulary needs a string 'space_marker' and a 'tokens' array");
  }
  const auto& tokens = doc["tokens"];
  std::vector<std::string> surfaces(tokens.size());
  std::vector<bool> seen(tokens.size(), false);
  for (const auto& t : tokens) {
    if (!t.is_object() || !t.contains("id") || !t.contains("text") ||
        !t["id"].is_number_integer() || !t["text"].is_string()) {
      fail(ErrorKind::Schema, "vocabulary token entries need integer 'id' and string 'text'");
    }
    const auto id = t["id"].get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= tokens.size() || seen[id]) {
      fail(ErrorKind::Schema, "vocabulary ids must be dense and unique; bad id " +
                                  std::to_string(id));
    }
    seen[id] = true;
    surfaces[id] = t["text"].get<std::string>();
  }
  return Vocabulary(doc["space_marker"].get<std::string>(), std::move(surfaces));
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open vocabulary file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_vocabulary(buf.str());
}

void save_vocabulary(const Vocabulary& v, const std::filesystem::path& path) {
  json doc;
  doc["space_marker"] = v.space_marker();
  json tokens = json::array();
  for (std::size_t id = 0; id < v.size(); ++id) {
    tokens.push_back({{"id", id}, {"text", v.surface(static_cast<TokenId>(id))}});
  }
  doc["tokens"] = std::move(tokens);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write vocabulary file " + path.string());
  out << doc.dump(1) << "\n";
}

std::set<std::string> prefix_candidates(std::span<const std::string> words,
                                        std::string_view marker) {
  std::set<std::string> out;
  for (const auto& w : words) {
    const std::u32string cps = utf8::decode(w);
    for (std::size_t i = 1; i <= cps.size(); ++i) {
      std::string p = utf8::encode(std::u32string_view(cps).substr(0, i));
      out.insert(std::string(marker) + p);
      out.insert(std::move(p));
    }
  }
  return out;
}

std::set<std::string> suffix_candidates(std::span<const std::string> words) {
  std::set<std::string> out;
  for (const auto& w : words) {
    const std::u32string cps = utf8::decode(w);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      out.insert(utf8::encode(std::u32string_view(cps).substr(i)));
    }
  }
  return out;
}

std::set<std::string> substring_candidates(std::span<const std::string> words) {
  std::set<std::string> out;
  for (const auto& w : words) {
    const std::u32string cps = utf8::decode(w);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      for (std::size_t j = i + 1; j <= cps.size(); ++j) {
        out.insert(utf8::encode(std::u32string_view(cps).substr(i, j - i)));
      }
    }
  }
  return out;
}

}  // namespace romanlens
