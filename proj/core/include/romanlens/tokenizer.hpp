#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace romanlens {

using TokenId = std::uint32_t;

// Conventional SentencePiece marker for a leading space.
inline constexpr std::string_view kDefaultSpaceMarker = "\xE2\x96\x81";

/// Immutable id <-> surface table with greedy longest-match encoding.
///
/// Surfaces are stored exactly as they appear in the exported vocabulary,
/// so a leading space is spelled with the space marker. The marker may only
/// appear as a surface prefix.
class Vocabulary {
 public:
  Vocabulary(std::string space_marker, std::vector<std::string> surfaces);

  std::size_t size() const noexcept { return surfaces_.size(); }
  const std::string& space_marker() const noexcept { return space_marker_; }
  const std::string& surface(TokenId id) const;
  std::optional<TokenId> find(std::string_view surface) const;

  std::vector<TokenId> encode(std::string_view text) const;
  std::string decode(std::span<const TokenId> ids) const;
  // Surface with the marker rendered as a space.
  std::string display(TokenId id) const;

  // Ids of the candidates that are literal vocabulary surfaces.
  std::set<TokenId> scan(const std::set<std::string>& candidates) const;

  std::string with_marker(std::string_view s) const { return space_marker_ + std::string(s); }

 private:
  std::string space_marker_;
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, TokenId> index_;
  std::size_t max_surface_bytes_ = 0;
};

Vocabulary load_vocabulary(const std::filesystem::path& path);
// Parses the JSON vocabulary document.
Vocabulary parse_vocabulary(std::string_view json_text);
void save_vocabulary(const Vocabulary& v, const std::filesystem::path& path);

// Candidate strings used by the token-set algebra. Words are split on code
// points, so multi-byte scripts yield whole-character prefixes.
std::set<std::string> prefix_candidates(std::span<const std::string> words,
                                        std::string_view marker);  // with and without marker
std::set<std::string> suffix_candidates(std::span<const std::string> words);
std::set<std::string> substring_candidates(std::span<const std::string> words);

}  // namespace romanlens
