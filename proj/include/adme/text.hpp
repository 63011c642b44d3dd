#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adme {

// Collapses whitespace runs to single spaces and trims both ends.
std::string normalize_whitespace(std::string_view s);

// ASCII lowercase.
std::string to_lower(std::string_view s);

// Lowercases, splits on runs of non-alphanumeric characters, drops empties.
std::vector<std::string> tokenize_words(std::string_view text);

bool starts_with_ci(std::string_view text, std::string_view prefix);

}  // namespace adme
