#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

struct ExtensionCertificate {
    int k = 0;
    int stage = 0;

    friend bool operator==(const ExtensionCertificate&, const ExtensionCertificate&) = default;
};

/// Chain U_0 <= U_1 <= ... of members. Every link is the inclusion of the
/// first |U_n| points of U_{n+1}.
struct LimitTower {
    AgeSpec age;
    std::vector<Structure> stages;
    std::vector<Morphism> links;
    std::vector<ExtensionCertificate> certificates;

    [[nodiscard]] int last() const { return static_cast<int>(stages.size()) - 1; }
    [[nodiscard]] const Structure& top() const { return stages.back(); }
};

struct TowerOptions {
    /// Hard limit on stage size.
    int stage_cap = 64;
};

/// U_0 is empty; each round adds one stage realizing every one-point
/// extension of every substructure of size <= target_k of the previous stage.
/// Throws Error("amalgamation-failure") or Error("stage-cap-exceeded").
[[nodiscard]] LimitTower build_tower(const AgeSpec& age, int target_k, int rounds, const TowerOptions& opts = {});

struct ExtensionDemand {
    std::vector<Elem> A;  ///< points of the stage, ascending
    Structure B;          ///< one-point extension of the induced A; new point last
};

/// Demands over stage `stage` in canonical order: subsets by size then
/// lexicographically, extensions in generator order.
[[nodiscard]] std::vector<ExtensionDemand> extension_demands(const AgeSpec& age, const Structure& stage, int k);

/// Embedding of d.B into `target` fixing d.A (mapped through `along`), if any.
[[nodiscard]] std::optional<Morphism> realize_demand(const ExtensionDemand& d, const Structure& target,
                                                     const std::vector<Elem>& along);

struct CertificateVerdict {
    bool ok = true;
    std::optional<ExtensionDemand> missing;
};

/// Exhaustive check of the (k, stage) extension property into stage + 1.
[[nodiscard]] CertificateVerdict certify_extension(const LimitTower& tower, int k, int stage);

struct StageEmbedding {
    Morphism map;
    int stage = 0;
};

/// Embedding U_s -> U_t extending the partial isomorphism p, with t the least
/// stage admitting one. Throws Error("not-a-partial-isomorphism") or
/// Error("insufficient-certificates").
[[nodiscard]] StageEmbedding extend_partial_iso(const LimitTower& tower, int s, const PartialMap& p);

/// Embedding of a member into the first stage admitting one. Throws
/// Error("not-a-member") or Error("insufficient-certificates").
[[nodiscard]] StageEmbedding realize(const LimitTower& tower, const Structure& s);

/// Writes stage_<n>.txt, link_<n>.txt and certificates.txt into `dir`.
void dump_tower(const LimitTower& tower, const std::filesystem::path& dir);

}  // namespace fraisse
