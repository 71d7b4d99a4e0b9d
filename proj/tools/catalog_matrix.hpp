#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraisse/amalgamation.hpp"

namespace fraisse::cli {

enum class Expectation { certified, refuted, not_certified };

[[nodiscard]] std::string_view to_string(Expectation e);

struct CatalogEntry {
    std::string age;
    std::map<Property, Expectation> expected;
    std::string source;
};

[[nodiscard]] const std::vector<CatalogEntry>& catalog_entries();

enum class CellStatus { met, mismatch, vacuous, informational };

[[nodiscard]] std::string_view to_string(CellStatus s);

struct CatalogCell {
    std::string age;
    std::string age_hash;
    Property property = Property::HP;
    Verdict verdict = Verdict::certified;
    std::size_t instances = 0;
    std::optional<Expectation> expected;
    CellStatus status = CellStatus::informational;
    std::string first_problem;
};

struct CatalogResult {
    int size_bound = 0;
    std::vector<CatalogCell> cells;
    std::size_t met = 0;
    std::size_t mismatches = 0;
    std::size_t vacuous = 0;
};

[[nodiscard]] CellStatus judge(const PropertyReport& report, std::optional<Expectation> expected);

/// Runs every (age, property) pair. `ages` are resolved specs in entry order.
[[nodiscard]] CatalogResult run_catalog(const std::vector<std::pair<CatalogEntry, AgeSpec>>& ages,
                                        const std::vector<Property>& properties, const CheckOptions& options);

[[nodiscard]] std::string format_catalog_text(const CatalogResult& r, const std::vector<Property>& properties);
[[nodiscard]] std::string format_catalog_records(const CatalogResult& r);

}  // namespace fraisse::cli
