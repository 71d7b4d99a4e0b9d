#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fraisse/structure.hpp"

namespace fraisse {

struct SearchOptions {
    /// Stop after this many results.
    std::optional<std::size_t> limit;
    /// Optional per-source-element candidate lists (ascending). Elements with
    /// an empty list are unrestricted.
    std::vector<std::vector<Elem>> candidates;
};

/// Visits every total morphism of `partial.required_kind` extending
/// `partial.assigned`, in lexicographic order of the map array. The visitor
/// returns false to stop. An inconsistent partial map yields no visits.
void for_each_extension(const Structure& source, const Structure& target, const PartialMap& partial,
                        const SearchOptions& options,
                        const std::function<bool(const std::vector<Elem>&)>& visit);

/// All morphisms of `kind` from a to b, lexicographic by map. Throws
/// Error("signature-mismatch") when the signatures differ.
[[nodiscard]] std::vector<Morphism> find_morphisms(const Structure& a, const Structure& b, MorphismKind kind,
                                                   std::optional<std::size_t> limit = std::nullopt);

[[nodiscard]] std::vector<Morphism> extend_partial(const Structure& source, const Structure& target,
                                                   const PartialMap& partial,
                                                   std::optional<std::size_t> limit = std::nullopt);

[[nodiscard]] std::optional<Morphism> is_isomorphic(const Structure& a, const Structure& b);

struct CanonicalForm {
    Structure form;
    /// Isomorphism from the input onto `form`.
    Morphism relabeling;
};

/// Canonical representative: equal outputs exactly for isomorphic inputs.
/// Colour refinement followed by exhaustive search over the refined classes
/// for the least encoding.
[[nodiscard]] CanonicalForm canonical_form(const Structure& a);

}  // namespace fraisse
