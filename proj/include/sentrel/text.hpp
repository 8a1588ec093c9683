#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sentrel::text {

// UTF-8 <-> code points. decode throws ValidationError on malformed input.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view cps);
std::string encode_utf8(char32_t cp);

bool is_space(char32_t c);
bool is_word_char(char32_t c);  // letters, digits and hyphen
char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view s);
std::string to_lower_utf8(std::string_view s);

// Lowercase, trim and collapse internal whitespace runs to one ASCII space.
std::string normalize_name(std::string_view s);

// Word-token pieces of a name, lowercased (used for lexicon terms and phrases).
std::vector<std::string> word_pieces(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace sentrel::text
