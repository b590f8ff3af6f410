#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace quotekg::text {

// Decodes UTF-8 into code points. Invalid bytes map to U+FFFD, one per byte.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

// Simple case folding covering ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Good enough for section titles and trigram hashing.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_alnum(char32_t cp);

std::string_view trim(std::string_view s);
// Collapses runs of whitespace (including newlines) to one ASCII space and
// trims both ends.
std::string collapse_whitespace(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool starts_with_icase(std::string_view s, std::string_view prefix);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// BCP 47 shape check: 1-8 letters, then "-" subtags of 1-8 alphanumerics.
bool is_language_tag(std::string_view tag);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace quotekg::text
