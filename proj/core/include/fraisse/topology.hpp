#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/rational.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

using Map = std::vector<Elem>;

/// Enumeration a_0, a_1, ... of a finite domain.
struct UltrametricContext {
    std::vector<Elem> order;

    [[nodiscard]] static UltrametricContext identity(int n);
    [[nodiscard]] std::size_t size() const { return order.size(); }
};

/// Least disagreement index; `infinite` when the maps agree everywhere.
struct AgreementIndex {
    bool infinite = true;
    std::size_t index = 0;

    friend bool operator==(const AgreementIndex&, const AgreementIndex&) = default;
};

/// Throws Error("domain-mismatch") when a map is not total on the enumeration.
[[nodiscard]] AgreementIndex agreement_index(const UltrametricContext& ctx, const Map& f, const Map& g);

/// 2^-D exactly; 0 for equal maps.
[[nodiscard]] Rational dist(const UltrametricContext& ctx, const Map& f, const Map& g);

struct LawReport {
    std::size_t metric_checks = 0;
    std::size_t ultrametric_checks = 0;
    std::size_t subinvariance_checks = 0;
    std::size_t equality_checks = 0;
    std::size_t violations = 0;
    std::optional<std::string> first_counterexample;

    [[nodiscard]] bool ok() const { return violations == 0; }
};

/// Identity of indiscernibles and symmetry on pairs; strong triangle
/// inequality on triples; left-subinvariance d(h f, h g) <= d(f, g), with
/// equality for injective h. Self-maps of the enumerated domain only.
[[nodiscard]] LawReport check_metric_laws(const UltrametricContext& ctx, const std::vector<Map>& sample);

struct CauchyVerdict {
    bool cauchy = true;
    /// thresholds[n-1]: least j from which every term agrees with the last on a_0..a_{n-1}.
    std::vector<std::size_t> thresholds;
    /// Largest n <= horizon that is settled before the last two terms.
    std::size_t certified = 0;
    /// Limit on a_0..a_{certified-1}; kUnassigned elsewhere.
    Map limit;
};

[[nodiscard]] CauchyVerdict is_cauchy(const UltrametricContext& ctx, const std::vector<Map>& seq,
                                      std::size_t horizon);

struct WeakOrbitPartition {
    int size = 0;
    std::vector<std::vector<Elem>> blocks;  ///< ascending, ordered by least element
    std::vector<int> block_of;
};

/// Classes of the equivalence generated by b ~ h(b), h in the monoid.
[[nodiscard]] WeakOrbitPartition weak_orbits(int n, const std::vector<Map>& monoid);

/// z with z g = z for every g in the monoid.
[[nodiscard]] std::vector<Map> left_zeros(const std::vector<Map>& monoid);

struct BasicOpen {
    std::vector<std::pair<Elem, Elem>> constraints;

    [[nodiscard]] bool contains(const Map& f) const;
    friend bool operator==(const BasicOpen&, const BasicOpen&) = default;
};

/// Isomorphism between finite monoids: monoid_a[i] corresponds to monoid_b[h[i]].
/// Throws Error("not-an-isomorphism") if h is not a bijection preserving
/// composition.
void check_monoid_isomorphism(const std::vector<Map>& monoid_a, const std::vector<Map>& monoid_b,
                              const std::vector<std::size_t>& h);

/// h({f | f(a) = b}) as a basic open set of monoid_b, constrained on a
/// transversal of the weak orbits of monoid_b. Both monoids must contain the
/// constant maps c_a and c_b.
[[nodiscard]] BasicOpen image_of_basic_open(const std::vector<Map>& monoid_a, const std::vector<Map>& monoid_b,
                                            const std::vector<std::size_t>& h, const BasicOpen& u);

/// Compares the members of `image` in monoid_b with the pointwise image of u.
[[nodiscard]] bool image_matches(const std::vector<Map>& monoid_a, const std::vector<Map>& monoid_b,
                                 const std::vector<std::size_t>& h, const BasicOpen& u, const BasicOpen& image);

/// All n^n self-maps of {0..n-1}, lexicographic.
[[nodiscard]] std::vector<Map> full_transformation_monoid(int n);

/// End(S) as an explicit list of maps, lexicographic.
[[nodiscard]] std::vector<Map> endomorphism_monoid(const Structure& s);

}  // namespace fraisse
