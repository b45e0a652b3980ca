#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace homeplan::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);

// Lowercased alphanumeric token stream ("<Driver> hi!" -> ["driver", "hi"]).
std::vector<std::string> tokenize(std::string_view s);

// FNV-1a, the project-wide stable hash for seeds and content digests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t value);

// "GarbageCan" -> "garbage can".
std::string split_camel_lower(std::string_view category);

}  // namespace homeplan::text
