#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/tower.hpp"

namespace fraisse {

/// One discharged demand of the construction.
struct EndoDemand {
    std::string kind;     ///< universality, genericity or homogeneity
    std::string demand;   ///< the structures and maps involved
    std::string witness;  ///< the factorization or correcting map found
    int added = 0;        ///< points added to discharge it
    bool collapsing = false;  ///< the factored hom identifies points
};

/// Stagewise endomorphism approximation. The tower keeps the original
/// stages U_0..U_L and gains two stages: the universe after universality
/// demands and the final universe. A single map `u` on the final universe
/// takes values in U_L; u_n is its restriction to U_n.
struct EndoApprox {
    LimitTower tower;
    int base_last = 0;
    int universal_stage = 0;
    std::vector<Elem> u;
    int k = 0;
    int m = 0;
    std::vector<EndoDemand> log;

    [[nodiscard]] const Structure& universe() const { return tower.top(); }
    /// Least stage containing u(U_n).
    [[nodiscard]] int shift(int n) const;
    /// u_n : U_n -> U_shift(n).
    [[nodiscard]] Morphism stage_map(int n) const;
};

/// Builds u at level (k, m) over a tower with m <= tower.last(). Throws
/// Error("hap-failure") or Error("aep-failure") naming the stuck demand.
[[nodiscard]] EndoApprox build_universal_endo(const LimitTower& tower, int k, int m);

/// Re-checks that u is a homomorphism into U_L and that every hom from a
/// structure of size <= k into U_m factors; returns the first problem.
[[nodiscard]] std::optional<std::string> verify_endo(const EndoApprox& e);

struct Factorization {
    Morphism iota;  ///< embedding A -> stage
    int stage = 0;
};

/// Embedding iota with u iota = h, least stage first, then least map.
/// Throws Error("outside-certified-level") when |A| > k or h leaves U_m.
[[nodiscard]] Factorization factor_through(const EndoApprox& e, const Structure& a, const Morphism& h);

/// Factorizations of f and g (both A -> U_m) agreeing on `common`.
/// Throws Error("outside-certified-level") or
/// Error("homogeneity-demand-unsatisfiable-at-bound").
[[nodiscard]] std::pair<Morphism, Morphism> factor_agreeing(const EndoApprox& e, const Structure& a,
                                                            const Morphism& f, const Morphism& g,
                                                            const std::vector<Elem>& common);

struct SequenceFactorization {
    std::vector<Morphism> iotas;
    Morphism limit;
    /// thresholds[i]: least j from which every f_j agrees with the limit on points 0..i.
    std::vector<int> thresholds;
};

/// The limit is the last term. The input converges when the full-agreement
/// threshold is at most len - 2; otherwise throws Error("not-convergent").
[[nodiscard]] SequenceFactorization factor_sequence(const EndoApprox& e, const Structure& a,
                                                    const std::vector<Morphism>& fs);

struct GateSample {
    Structure a;
    Morphism h;
};

struct GateEntry {
    bool ok = false;
    Morphism iota;
    std::string message;
};

struct GateReport {
    std::vector<GateEntry> entries;
    std::size_t failures = 0;

    [[nodiscard]] bool ok() const { return failures == 0; }
};

/// Factorization g = u iota per sample (kappa = id, f_U = u), each re-verified.
[[nodiscard]] GateReport verify_gate(const EndoApprox& e, const std::vector<GateSample>& samples);

/// All homs from induced substructures of size <= k of U_j into U_j, j <= m.
[[nodiscard]] std::vector<GateSample> gate_samples(const EndoApprox& e, int k, int m);

/// Tower dump plus u.txt, shift.txt and demands.txt.
void dump_endo(const EndoApprox& e, const std::filesystem::path& dir);

}  // namespace fraisse
