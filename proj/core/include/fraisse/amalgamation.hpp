#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

enum class Property { HP, JEP, AP, HAP, AEP, strictAP, freeAP };

[[nodiscard]] std::string_view to_string(Property p);
[[nodiscard]] std::optional<Property> parse_property(std::string_view text);
[[nodiscard]] const std::vector<Property>& all_properties();

/// f1: A -> B1, f2: A -> B2, both embeddings.
struct ApInstance {
    Structure A, B1, B2;
    Morphism f1, f2;
};

struct ApSolution {
    Structure D;
    Morphism g1;  ///< B1 -> D
    Morphism g2;  ///< B2 -> D
};

/// g: A -> B an embedding, a: A -> T1 a homomorphism.
struct HapInstance {
    Structure A, B, T1;
    Morphism g, a;
};

struct HapSolution {
    Structure T2;
    Morphism b;  ///< B -> T2, homomorphism
    Morphism h;  ///< T1 -> T2, embedding
};

/// Embeddings f1, f2 as in AP plus homomorphisms h1: B1 -> T, h2: B2 -> T
/// with h1 f1 = h2 f2.
struct AepInstance {
    Structure A, B1, B2, T;
    Morphism f1, f2, h1, h2;
};

struct AepSolution {
    Structure C;
    Morphism g1, g2;  ///< B_i -> C
    Structure T_prime;
    Morphism h;  ///< C -> T'
    Morphism k;  ///< T -> T'
};

/// Amalgam of B1 and B2 over A. Tries the completed free sum, then members
/// B1 + j fresh points, j = |B2| - |A| first, then smaller, then larger up to
/// |D| <= search_bound; g1 is the inclusion.
/// A negative bound means |B1| + |B2| - |A|.
[[nodiscard]] std::optional<ApSolution> solve_ap(const AgeSpec& age, const ApInstance& inst, int search_bound = -1);

/// Quotient (B + T1)/(g(x) = a(x)) with union relations. T1 occupies the
/// first |T1| points; `from_b` maps B into the quotient.
struct HapQuotient {
    Structure Q;
    Morphism from_b;
};

[[nodiscard]] HapQuotient hap_quotient(const HapInstance& inst);

/// Tries the completed quotient, then T1 + j fresh points up to |T2| <= search_bound
/// (negative: |B| + |T1| - |A|), h the inclusion.
[[nodiscard]] std::optional<HapSolution> solve_hap(const AgeSpec& age, const HapInstance& inst,
                                                   int search_bound = -1);

struct HapRefutation {
    std::string forbidden;        ///< name of the forced forbidden configuration
    std::vector<Elem> clique;     ///< its copy inside the quotient
    std::vector<std::string> labels;  ///< b(x) for points coming from B, h(t) otherwise
    std::string text;
};

/// Proof that no (T2, b, h) exists, via a forbidden configuration forced into
/// every candidate. Only configurations whose distinct points are pairwise
/// related by an irreflexive symbol, and whose local configurations admit no
/// proper enlargement within the age, are used.
[[nodiscard]] std::optional<HapRefutation> refute_hap(const AgeSpec& age, const HapInstance& inst);

/// Searches C = B1 + j points with g1 the inclusion and C = im g1 u im g2,
/// T' = T and k = id. Throws Error("not-commuting") if h1 f1 != h2 f2.
[[nodiscard]] std::optional<AepSolution> solve_aep(const AgeSpec& age, const AepInstance& inst,
                                                   int search_bound = -1);

struct PushoutSquare {
    Structure A, B1, B2, C;
    Morphism f1, f2, g1, g2;
};

struct PushoutVerdict {
    bool certified = true;
    std::size_t checked = 0;  ///< number of compatible (T, h1, h2) triples
    std::optional<Structure> T;
    std::optional<Morphism> h1, h2;
    std::size_t mediating = 0;  ///< number of h found for the failing triple
};

/// Checks the universal property against all members of size <= test_size.
/// Throws Error("not-commuting") when g1 f1 != g2 f2.
[[nodiscard]] PushoutVerdict verify_pushout(const AgeSpec& age, const PushoutSquare& sq, int test_size);

// --- witness checks -----------------------------------------------------------

[[nodiscard]] std::optional<std::string> check_ap_solution(const AgeSpec& age, const ApInstance& inst,
                                                           const ApSolution& sol);
[[nodiscard]] std::optional<std::string> check_hap_solution(const AgeSpec& age, const HapInstance& inst,
                                                            const HapSolution& sol);
[[nodiscard]] std::optional<std::string> check_aep_solution(const AgeSpec& age, const AepInstance& inst,
                                                            const AepSolution& sol);

// --- property checking ----------------------------------------------------------

enum class Verdict { certified, refuted, unknown };

[[nodiscard]] std::string_view to_string(Verdict v);

struct InstanceRecord {
    std::size_t id = 0;
    std::string instance;
    Verdict verdict = Verdict::certified;
    /// Witness for certified, proof or counterexample for refuted, note for unknown.
    std::string detail;
};

struct PropertyReport {
    Property property = Property::HP;
    std::string age;
    std::string age_hash;
    int size_bound = 0;
    int search_bound = -1;
    Verdict verdict = Verdict::certified;
    bool vacuous = true;
    std::size_t certified = 0;
    std::size_t refuted = 0;
    std::size_t unknown = 0;
    std::vector<InstanceRecord> records;
};

struct CheckOptions {
    int size_bound = 3;
    /// Negative: per-instance default |B1| + |B2| - |A|.
    int search_bound = -1;
    /// Members tested by verify_pushout for strictAP; negative means size_bound.
    int pushout_test_size = -1;
    unsigned workers = 1;
    /// Keep per-instance records (summary counts are always kept).
    bool keep_records = true;
};

[[nodiscard]] PropertyReport check_property(Property property, const AgeSpec& age, const CheckOptions& options);

/// FNV-1a 64 of describe_age_spec, hex.
[[nodiscard]] std::string age_spec_hash(const AgeSpec& age);

/// Compact one-line rendering such as `3{E(0,1)(1,0)}`.
[[nodiscard]] std::string compact(const Structure& s);
[[nodiscard]] std::string compact(const Morphism& m);

inline constexpr std::string_view kToolVersion = "fraisse 0.1.0";

/// One JSON object per line: instance records, then a summary record.
[[nodiscard]] std::string format_records(const PropertyReport& report);
[[nodiscard]] std::string format_text(const PropertyReport& report);

}  // namespace fraisse
