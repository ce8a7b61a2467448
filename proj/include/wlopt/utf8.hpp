#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace wlopt::utf8 {

// Strict decoding: overlong encodings, surrogates, values past U+10FFFF and
// truncated sequences are all rejected (Errc::non_utf8).
std::u32string decode(std::string_view s);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

// Number of code points in a valid UTF-8 string.
std::size_t count(std::string_view s);

}  // namespace wlopt::utf8

namespace wlopt {

// Simple one-to-one lowercase mapping covering ASCII, Latin-1, Latin
// Extended-A, Greek and Cyrillic. Code points outside those ranges are left
// unchanged.
char32_t lowercase_codepoint(char32_t cp);
std::string lowercase(std::string_view s);

}  // namespace wlopt
