#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fraisse/rational.hpp"
#include "fraisse/search.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

enum class AxiomTag { irreflexive, reflexive, symmetric, antisymmetric, transitive, total, tournament, metric };

[[nodiscard]] std::string_view to_string(AxiomTag tag);

struct Axiom {
    AxiomTag tag;
    /// Binary symbol the axiom constrains; ignored for `metric`, which
    /// constrains the whole signature.
    std::size_t symbol = 0;
};

enum class Completion { none, transitive_closure, shortest_path };

[[nodiscard]] std::string_view to_string(Completion c);

struct ForbiddenConfig {
    std::string name;
    Structure structure;
};

/// Intensional description of a hereditary class of finite structures:
/// members satisfy every axiom and embed no forbidden configuration.
struct AgeSpec {
    std::string name;
    Signature sig;
    std::vector<Axiom> axioms;
    std::vector<ForbiddenConfig> forbidden;
    Completion completion = Completion::none;
    /// Metric ages only: the allowed non-zero distances, ascending. Symbol 0
    /// encodes distance 0 and symbol i encodes distances[i-1].
    std::vector<Rational> distances;

    [[nodiscard]] bool is_metric() const;
    [[nodiscard]] bool has_axiom(AxiomTag tag, std::size_t symbol) const;
    /// Throws std::invalid_argument on malformed specs.
    void validate() const;
};

struct MemberVerdict {
    bool yes = true;
    /// Failed axiom such as "antisymmetric(le)" or "forbidden K3 embeds".
    std::string violation;

    explicit operator bool() const { return yes; }
};

[[nodiscard]] MemberVerdict member(const AgeSpec& age, const Structure& s);

/// Axiom check restricted to tuples whose entries all lie in `elems`.
[[nodiscard]] std::optional<std::string> axiom_violation(const AgeSpec& age, const Structure& s,
                                                         std::span<const Elem> elems);

/// One representative per isomorphism class of members of size exactly n,
/// sorted by canonical encoding.
[[nodiscard]] std::vector<Structure> enumerate(const AgeSpec& age, int n);

/// enumerate(age, 0) ++ ... ++ enumerate(age, n).
[[nodiscard]] std::vector<Structure> enumerate_up_to(const AgeSpec& age, int n);

/// Tuples chosen for one unit (a set of 1..max-arity elements) of an extension.
using UnitConfig = std::vector<std::pair<std::size_t, Tuple>>;

struct ExtensionSpec {
    int extra = 0;
    /// Exact configurations for specific units (sorted element lists).
    std::map<std::vector<Elem>, UnitConfig> fixed;
    /// Extra per-unit predicate, e.g. a homomorphism condition on the new tuples.
    std::function<bool(std::span<const Elem> unit, const UnitConfig& config)> unit_filter;
};

/// Visits every member of the age whose restriction to the first
/// base.size() points equals `base` and which has spec.extra further points.
/// Candidates are generated unit by unit with axiom-aware pruning; the order
/// is deterministic. The visitor returns false to stop.
void for_each_age_extension(const AgeSpec& age, const Structure& base, const ExtensionSpec& spec,
                            const std::function<bool(const Structure&)>& visit);

/// Labeled one-point extensions of `base` within the age (new point = base.size()).
[[nodiscard]] std::vector<Structure> one_point_extensions(const AgeSpec& age, const Structure& base);

struct FreeSum {
    Structure sum;
    Morphism g1;
    Morphism g2;
};

/// Amalgamated free sum of b1 and b2 over a. The carrier is b1 followed by
/// the points of b2 outside f2(a); relations are the unions of the images.
/// Throws Error("not-an-embedding") when f1 or f2 is not an embedding.
[[nodiscard]] FreeSum free_sum(const Structure& a, const Structure& b1, const Structure& b2, const Morphism& f1,
                               const Morphism& f2);

struct CompletionResult {
    std::optional<Structure> completed;
    std::string reason;

    explicit operator bool() const { return completed.has_value(); }
};

[[nodiscard]] CompletionResult complete(const AgeSpec& age, const Structure& s);

// --- metric spaces --------------------------------------------------------

struct MetricSpaceDesc {
    int size = 0;
    std::vector<std::vector<Rational>> dist;
    std::vector<Rational> distances;

    friend bool operator==(const MetricSpaceDesc&, const MetricSpaceDesc&) = default;
};

[[nodiscard]] Signature metric_signature(const std::vector<Rational>& distances);
[[nodiscard]] AgeSpec metric_age(std::string name, std::vector<Rational> distances);
[[nodiscard]] Structure encode_metric(const MetricSpaceDesc& m);
/// Throws Error("not-a-metric-encoding") on down-closure or symmetry breaches.
[[nodiscard]] MetricSpaceDesc decode_metric(const Structure& s, const std::vector<Rational>& distances);

/// Least r with (x,y) in rho_r, if any.
[[nodiscard]] std::optional<Rational> encoded_distance(const AgeSpec& age, const Structure& s, Elem x, Elem y);

// --- catalog and files ------------------------------------------------------

/// Built-in ages: graphs, triangle-free, posets, strict-posets,
/// nonstrict-linear, strict-linear, tournaments, metric (D = {1,2}), sets.
[[nodiscard]] const std::vector<AgeSpec>& builtin_ages();
[[nodiscard]] std::optional<AgeSpec> builtin_age(std::string_view name);

/// AgeSpec file format: `age`, `signature`, `axiom <tag> <symbol>`,
/// `forbid <structure-file>`, `completion ...`, `distances ...`.
[[nodiscard]] AgeSpec parse_age_spec(std::string_view text, const std::filesystem::path& base_dir = {});
[[nodiscard]] AgeSpec read_age_spec_file(const std::filesystem::path& path);
/// Canonical text used for hashing; forbidden structures are inlined.
[[nodiscard]] std::string describe_age_spec(const AgeSpec& age);

}  // namespace fraisse
