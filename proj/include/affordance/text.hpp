#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace affordance::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Lowercased runs of ASCII alphanumerics; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view s);

/// Split on runs of spaces/tabs; empty fields are dropped.
std::vector<std::string> split_ws(std::string_view s);

/// Last whitespace-separated word of a noun phrase ("red pill" -> "pill").
std::string head_word(std::string_view phrase);

/// One entry per non-empty, non-comment ('#') line, trimmed.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace affordance::text
