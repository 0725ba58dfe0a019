#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace biokg {

// FNV-1a 64-bit. Used for file/section checksums and config fingerprints;
// stable across platforms.
uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(uint64_t value);

// splitmix64 step; the basis of the hashed-fallback embedding.
uint64_t splitmix64(uint64_t& state);

std::string trim(std::string_view s);
std::string lower_ascii(std::string_view s);

// Lowercased alphanumeric runs; ASCII punctuation and whitespace separate
// tokens, bytes >= 0x80 are kept verbatim.
std::vector<std::string> tokenize(std::string_view text);

// Whitespace-delimited token count.
std::size_t count_words(std::string_view text);

bool valid_utf8(std::string_view s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

} // namespace biokg
