#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fraisse/age.hpp"

namespace fraisse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;

/// Name of the environment variable overriding catalog lookups.
inline constexpr const char* kCatalogDirEnv = "FRAISSE_CATALOG_DIR";

/// An existing file path, then <catalog dir>/<name>.age, then a built-in age.
[[nodiscard]] std::optional<AgeSpec> resolve_age(const std::string& name);

/// Runs the tool on argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraisse::cli
