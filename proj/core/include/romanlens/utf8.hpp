#pragma once

#include <string>
#include <string_view>

namespace romanlens::utf8 {

// Throws Error(Parse) on malformed input.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

bool is_ascii(std::string_view text) noexcept;

}  // namespace romanlens::utf8
