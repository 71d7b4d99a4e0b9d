#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fraisse/structure.hpp"

namespace fraisse {

// Structure text format:
//   signature <name>:<arity> ...
//   size <n>
//   rel <name> <i1> ... <ik>
// Whitespace separated; '#' starts a comment.

[[nodiscard]] Structure parse_structure(std::string_view text);
[[nodiscard]] std::string format_structure(const Structure& s);
[[nodiscard]] Structure read_structure_file(const std::filesystem::path& path);
void write_structure_file(const std::filesystem::path& path, const Structure& s);

[[nodiscard]] Signature parse_signature_tokens(const std::vector<std::string>& tokens);
[[nodiscard]] std::string format_signature(const Signature& sig);

/// Map lists: one map per line, whitespace-separated indices.
[[nodiscard]] std::vector<std::vector<Elem>> parse_map_list(std::string_view text);
[[nodiscard]] std::string format_map_list(const std::vector<std::vector<Elem>>& maps);

[[nodiscard]] std::string format_map(const std::vector<Elem>& map);

/// Splits into lines with comments stripped and blank lines dropped, each
/// line tokenized on whitespace.
[[nodiscard]] std::vector<std::vector<std::string>> tokenize_lines(std::string_view text);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace fraisse
