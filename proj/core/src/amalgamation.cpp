#include "fraisse/amalgamation.hpp"

#include <algorithm>
#include <sstream>

#include "fraisse/error.hpp"
#include "fraisse/search.hpp"

namespace fraisse {

std::string_view to_string(Property p) {
    switch (p) {
        case Property::HP: return "HP";
        case Property::JEP: return "JEP";
        case Property::AP: return "AP";
        case Property::HAP: return "HAP";
        case Property::AEP: return "AEP";
        case Property::strictAP: return "strictAP";
        case Property::freeAP: return "freeAP";
    }
    return "?";
}

const std::vector<Property>& all_properties() {
    static const std::vector<Property> props{Property::HP,  Property::JEP,      Property::AP,    Property::HAP,
                                             Property::AEP, Property::strictAP, Property::freeAP};
    return props;
}

std::optional<Property> parse_property(std::string_view text) {
    for (auto p : all_properties())
        if (to_string(p) == text) return p;
    return std::nullopt;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified_up_to_bound";
        case Verdict::refuted: return "refuted";
        case Verdict::unknown: return "unknown";
    }
    return "?";
}

std::string compact(const Structure& s) {
    std::ostringstream out;
    out << s.size() << '{';
    bool first = true;
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
        if (s.tuples(sym).empty()) continue;
        if (!first) out << ';';
        first = false;
        out << s.signature()[sym].name;
        for (const auto& t : s.tuples(sym)) {
            out << '(';
            for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
            out << ')';
        }
    }
    out << '}';
    return out.str();
}

std::string compact(const Morphism& m) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < m.map.size(); ++i) out << (i ? "," : "") << m.map[i];
    out << ']';
    return out.str();
}

namespace {

Morphism inclusion(int n) { return {identity_map(n), MorphismKind::embedding}; }

PartialMap open_map(int n, MorphismKind kind) {
    return {std::vector<Elem>(static_cast<std::size_t>(n), kUnassigned), kind};
}

int default_bound(int bound, const Structure& x, const Structure& y, const Structure& a) {
    return bound >= 0 ? bound : x.size() + y.size() - a.size();
}

std::optional<std::string> require(bool ok, const char* what) {
    if (ok) return std::nullopt;
    return std::string(what);
}

}  // namespace

// --- witness checks -----------------------------------------------------------

std::optional<std::string> check_ap_solution(const AgeSpec& age, const ApInstance& inst, const ApSolution& sol) {
    if (auto v = member(age, sol.D); !v) return "amalgam not a member: " + v.violation;
    if (auto e = require(is_morphism(inst.B1, sol.D, sol.g1.map, MorphismKind::embedding), "g1 not an embedding"))
        return e;
    if (auto e = require(is_morphism(inst.B2, sol.D, sol.g2.map, MorphismKind::embedding), "g2 not an embedding"))
        return e;
    return require(compose(sol.g1.map, inst.f1.map) == compose(sol.g2.map, inst.f2.map), "g1 f1 != g2 f2");
}

std::optional<std::string> check_hap_solution(const AgeSpec& age, const HapInstance& inst, const HapSolution& sol) {
    if (auto v = member(age, sol.T2); !v) return "T2 not a member: " + v.violation;
    if (auto e = require(is_morphism(inst.B, sol.T2, sol.b.map, MorphismKind::hom), "b not a homomorphism")) return e;
    if (auto e = require(is_morphism(inst.T1, sol.T2, sol.h.map, MorphismKind::embedding), "h not an embedding"))
        return e;
    return require(compose(sol.b.map, inst.g.map) == compose(sol.h.map, inst.a.map), "b g != h a");
}

std::optional<std::string> check_aep_solution(const AgeSpec& age, const AepInstance& inst, const AepSolution& sol) {
    if (auto v = member(age, sol.C); !v) return "C not a member: " + v.violation;
    if (auto v = member(age, sol.T_prime); !v) return "T' not a member: " + v.violation;
    if (auto e = require(is_morphism(inst.B1, sol.C, sol.g1.map, MorphismKind::embedding), "g1 not an embedding"))
        return e;
    if (auto e = require(is_morphism(inst.B2, sol.C, sol.g2.map, MorphismKind::embedding), "g2 not an embedding"))
        return e;
    if (auto e = require(is_morphism(sol.C, sol.T_prime, sol.h.map, MorphismKind::hom), "h not a homomorphism"))
        return e;
    if (auto e = require(is_morphism(inst.T, sol.T_prime, sol.k.map, MorphismKind::embedding), "k not an embedding"))
        return e;
    if (auto e = require(compose(sol.g1.map, inst.f1.map) == compose(sol.g2.map, inst.f2.map), "g1 f1 != g2 f2"))
        return e;
    if (auto e = require(compose(sol.h.map, sol.g1.map) == compose(sol.k.map, inst.h1.map), "h g1 != k h1")) return e;
    return require(compose(sol.h.map, sol.g2.map) == compose(sol.k.map, inst.h2.map), "h g2 != k h2");
}

// --- AP -------------------------------------------------------------------------

std::optional<ApSolution> solve_ap(const AgeSpec& age, const ApInstance& inst, int search_bound) {
    int bound = default_bound(search_bound, inst.B1, inst.B2, inst.A);
    auto fs = free_sum(inst.A, inst.B1, inst.B2, inst.f1, inst.f2);
    if (auto c = complete(age, fs.sum)) {
        ApSolution sol{std::move(*c.completed), fs.g1, fs.g2};
        if (!check_ap_solution(age, inst, sol)) return sol;
    }
    // Sizes from the free-sum size downward first, then larger ones.
    std::vector<int> extras;
    int disjoint = inst.B2.size() - inst.A.size();
    for (int j = std::min(disjoint, bound - inst.B1.size()); j >= 0; --j) extras.push_back(j);
    for (int j = disjoint + 1; inst.B1.size() + j <= bound; ++j) extras.push_back(j);
    for (int j : extras) {
        std::optional<ApSolution> found;
        ExtensionSpec spec;
        spec.extra = j;
        for_each_age_extension(age, inst.B1, spec, [&](const Structure& d) {
            auto p = open_map(inst.B2.size(), MorphismKind::embedding);
            for (Elem x = 0; x < inst.A.size(); ++x) p.assigned[static_cast<std::size_t>(inst.f2(x))] = inst.f1(x);
            auto g2 = extend_partial(inst.B2, d, p, 1);
            if (g2.empty()) return true;
            found = ApSolution{d, inclusion(inst.B1.size()), g2.front()};
            return false;
        });
        if (found) return found;
    }
    return std::nullopt;
}

// --- HAP ------------------------------------------------------------------------

HapQuotient hap_quotient(const HapInstance& inst) {
    std::vector<Elem> to_q(static_cast<std::size_t>(inst.B.size()), kUnassigned);
    for (Elem x = 0; x < inst.A.size(); ++x) to_q[static_cast<std::size_t>(inst.g(x))] = inst.a(x);
    Elem next = inst.T1.size();
    for (auto& v : to_q)
        if (v == kUnassigned) v = next++;
    Structure q = inst.T1.with_extra(next - inst.T1.size());
    for (std::size_t s = 0; s < inst.B.signature().size(); ++s)
        for (const auto& t : inst.B.tuples(s)) q.add(s, compose(to_q, t));
    return {std::move(q), Morphism{std::move(to_q), MorphismKind::hom}};
}

std::optional<HapSolution> solve_hap(const AgeSpec& age, const HapInstance& inst, int search_bound) {
    int bound = default_bound(search_bound, inst.B, inst.T1, inst.A);
    auto q = hap_quotient(inst);
    if (auto c = complete(age, q.Q)) {
        HapSolution sol{std::move(*c.completed), q.from_b, inclusion(inst.T1.size())};
        if (!check_hap_solution(age, inst, sol)) return sol;
    }
    for (int j = 0; inst.T1.size() + j <= bound; ++j) {
        std::optional<HapSolution> found;
        ExtensionSpec spec;
        spec.extra = j;
        for_each_age_extension(age, inst.T1, spec, [&](const Structure& t2) {
            auto p = open_map(inst.B.size(), MorphismKind::hom);
            for (Elem x = 0; x < inst.A.size(); ++x) p.assigned[static_cast<std::size_t>(inst.g(x))] = inst.a(x);
            auto b = extend_partial(inst.B, t2, p, 1);
            if (b.empty()) return true;
            found = HapSolution{t2, b.front(), inclusion(inst.T1.size())};
            return false;
        });
        if (found) return found;
    }
    return std::nullopt;
}

namespace {

/// Every pair of distinct points related by an irreflexive symbol, so any
/// homomorphic image is injective on it.
bool pairwise_irreflexive(const AgeSpec& age, const Structure& f) {
    for (Elem x = 0; x < f.size(); ++x)
        for (Elem y = x + 1; y < f.size(); ++y) {
            bool related = false;
            for (std::size_t s = 0; s < age.sig.size() && !related; ++s) {
                if (age.sig[s].arity != 2 || !age.has_axiom(AxiomTag::irreflexive, s)) continue;
                std::array<Elem, 2> xy{x, y};
                std::array<Elem, 2> yx{y, x};
                related = f.holds(s, xy) || f.holds(s, yx);
            }
            if (!related) return false;
        }
    return true;
}

/// No member enlarges f's configuration on any unit, so an injective
/// homomorphic image of f inside a member is an embedded copy.
bool locally_maximal(const AgeSpec& age, const Structure& f) {
    int max_arity = f.signature().max_arity();
    auto n = f.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Elem> unit;
        for (Elem x = 0; x < n; ++x)
            if (mask & (1u << x)) unit.push_back(x);
        if (static_cast<int>(unit.size()) > max_arity) continue;
        Structure local = f.induced(unit);
        auto k = static_cast<Elem>(unit.size());
        std::vector<std::pair<std::size_t, Tuple>> missing;
        for (std::size_t s = 0; s < local.signature().size(); ++s) {
            int arity = local.signature()[s].arity;
            Tuple t(static_cast<std::size_t>(arity), 0);
            while (true) {
                std::vector<char> seen(static_cast<std::size_t>(k), 0);
                for (Elem e : t) seen[static_cast<std::size_t>(e)] = 1;
                bool covers = std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
                if (covers && !local.holds(s, t)) missing.emplace_back(s, t);
                int p = arity - 1;
                while (p >= 0 && t[static_cast<std::size_t>(p)] == k - 1) t[static_cast<std::size_t>(p--)] = 0;
                if (p < 0) break;
                ++t[static_cast<std::size_t>(p)];
            }
        }
        if (missing.size() > 16) return false;
        for (unsigned sub = 1; sub < (1u << missing.size()); ++sub) {
            Structure bigger = local;
            for (std::size_t i = 0; i < missing.size(); ++i)
                if (sub & (1u << i)) bigger.add(missing[i].first, missing[i].second);
            if (member(age, bigger)) return false;
        }
    }
    return true;
}

}  // namespace

std::optional<HapRefutation> refute_hap(const AgeSpec& age, const HapInstance& inst) {
    if (age.forbidden.empty()) return std::nullopt;
    auto q = hap_quotient(inst);
    for (const auto& f : age.forbidden) {
        if (f.structure.size() > q.Q.size() || f.structure.size() > 16) continue;
        if (!pairwise_irreflexive(age, f.structure) || !locally_maximal(age, f.structure)) continue;
        std::optional<std::vector<Elem>> hit;
        for_each_extension(f.structure, q.Q, open_map(f.structure.size(), MorphismKind::hom), {},
                           [&](const std::vector<Elem>& m) {
                               auto sorted = m;
                               std::sort(sorted.begin(), sorted.end());
                               if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return true;
                               hit = m;
                               return false;
                           });
        if (!hit) continue;
        HapRefutation proof{f.name, *hit, {}, {}};
        for (Elem e : *hit) {
            std::string label;
            for (Elem x = 0; x < inst.B.size() && label.empty(); ++x)
                if (q.from_b(x) == e) label = "b(" + std::to_string(x) + ")";
            if (label.empty()) label = "h(" + std::to_string(e) + ")";
            proof.labels.push_back(std::move(label));
        }
        std::ostringstream text;
        text << "forced " << f.name << " on {";
        for (std::size_t i = 0; i < proof.labels.size(); ++i) text << (i ? "," : "") << proof.labels[i];
        text << "}: quotient " << compact(q.Q) << " maps into every candidate T2, injectively on this copy";
        proof.text = text.str();
        return proof;
    }
    return std::nullopt;
}

// --- AEP ------------------------------------------------------------------------

std::optional<AepSolution> solve_aep(const AgeSpec& age, const AepInstance& inst, int search_bound) {
    if (compose(inst.h1.map, inst.f1.map) != compose(inst.h2.map, inst.f2.map))
        throw Error("not-commuting", "h1 f1 != h2 f2");
    int bound = default_bound(search_bound, inst.B1, inst.B2, inst.A);
    int max_extra = std::min(bound - inst.B1.size(), inst.B2.size() - inst.A.size());
    std::optional<AepSolution> found;
    for (int j = 0; j <= max_extra && !found; ++j) {
        ExtensionSpec spec;
        spec.extra = j;
        for_each_age_extension(age, inst.B1, spec, [&](const Structure& c) {
            auto p = open_map(inst.B2.size(), MorphismKind::embedding);
            for (Elem x = 0; x < inst.A.size(); ++x) p.assigned[static_cast<std::size_t>(inst.f2(x))] = inst.f1(x);
            for_each_extension(inst.B2, c, p, {}, [&](const std::vector<Elem>& g2) {
                std::vector<Elem> h(static_cast<std::size_t>(c.size()), kUnassigned);
                for (Elem x = 0; x < inst.B1.size(); ++x) h[static_cast<std::size_t>(x)] = inst.h1(x);
                for (Elem y = 0; y < inst.B2.size(); ++y) {
                    auto& slot = h[static_cast<std::size_t>(g2[static_cast<std::size_t>(y)])];
                    if (slot == kUnassigned) slot = inst.h2(y);
                    else if (slot != inst.h2(y)) return true;
                }
                if (std::find(h.begin(), h.end(), kUnassigned) != h.end()) return true;
                if (!is_morphism(c, inst.T, h, MorphismKind::hom)) return true;
                found = AepSolution{c,
                                    inclusion(inst.B1.size()),
                                    Morphism{g2, MorphismKind::embedding},
                                    inst.T,
                                    Morphism{std::move(h), MorphismKind::hom},
                                    inclusion(inst.T.size())};
                return false;
            });
            return !found;
        });
    }
    return found;
}

// --- pushouts ---------------------------------------------------------------------

PushoutVerdict verify_pushout(const AgeSpec& age, const PushoutSquare& sq, int test_size) {
    if (compose(sq.g1.map, sq.f1.map) != compose(sq.g2.map, sq.f2.map))
        throw Error("not-commuting", "g1 f1 != g2 f2");
    PushoutVerdict verdict;
    for (const auto& t : enumerate_up_to(age, test_size)) {
        for (const auto& h1 : find_morphisms(sq.B1, t, MorphismKind::hom)) {
            auto p2 = open_map(sq.B2.size(), MorphismKind::hom);
            for (Elem x = 0; x < sq.A.size(); ++x) p2.assigned[static_cast<std::size_t>(sq.f2(x))] = h1(sq.f1(x));
            for (const auto& h2 : extend_partial(sq.B2, t, p2)) {
                ++verdict.checked;
                auto ph = open_map(sq.C.size(), MorphismKind::hom);
                bool clash = false;
                for (Elem x = 0; x < sq.B1.size(); ++x) ph.assigned[static_cast<std::size_t>(sq.g1(x))] = h1(x);
                for (Elem y = 0; y < sq.B2.size(); ++y) {
                    auto& slot = ph.assigned[static_cast<std::size_t>(sq.g2(y))];
                    if (slot != kUnassigned && slot != h2(y)) clash = true;
                    slot = h2(y);
                }
                std::size_t count = clash ? 0 : extend_partial(sq.C, t, ph, 2).size();
                if (count != 1) {
                    verdict.certified = false;
                    verdict.T = t;
                    verdict.h1 = h1;
                    verdict.h2 = h2;
                    verdict.mediating = count;
                    return verdict;
                }
            }
        }
    }
    return verdict;
}

}  // namespace fraisse
