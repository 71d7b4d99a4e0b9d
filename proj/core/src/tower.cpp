#include "fraisse/tower.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "fraisse/amalgamation.hpp"
#include "fraisse/error.hpp"
#include "fraisse/io.hpp"
#include "fraisse/search.hpp"

namespace fraisse {

namespace {

/// Calls visit on each size-r subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int r, F&& visit) {
    if (r > n) return;
    std::vector<Elem> pick(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        visit(pick);
        int i = r - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - r + i) --i;
        if (i < 0) return;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
}

/// Stage W plus one point realizing d over d.A.
Structure one_point_amalgam(const AgeSpec& age, const Structure& w, const ExtensionDemand& d) {
    auto a_size = static_cast<Elem>(d.A.size());
    ApInstance inst{w.induced(d.A), w, d.B, Morphism{d.A, MorphismKind::embedding},
                    Morphism{identity_map(a_size), MorphismKind::embedding}};
    auto fs = free_sum(inst.A, inst.B1, inst.B2, inst.f1, inst.f2);
    if (auto c = complete(age, fs.sum)) {
        ApSolution sol{*c.completed, fs.g1, fs.g2};
        if (!check_ap_solution(age, inst, sol)) return std::move(sol.D);
    }
    // Pin the new point's configuration over A and let the generator choose the rest.
    Elem fresh = w.size();
    std::vector<Elem> to_w = d.A;
    to_w.push_back(fresh);
    ExtensionSpec spec;
    spec.extra = 1;
    int max_arity = age.sig.max_arity();
    for (int r = 0; r < max_arity && r <= a_size; ++r) {
        for_each_subset(a_size, r, [&](const std::vector<Elem>& sub) {
            std::vector<Elem> unit_b = sub;
            unit_b.push_back(a_size);
            std::vector<Elem> unit_w;
            for (Elem x : unit_b) unit_w.push_back(to_w[static_cast<std::size_t>(x)]);
            UnitConfig config;
            for (std::size_t s = 0; s < d.B.signature().size(); ++s)
                for (const auto& t : d.B.tuples(s)) {
                    bool inside = std::all_of(t.begin(), t.end(), [&](Elem e) {
                        return std::find(unit_b.begin(), unit_b.end(), e) != unit_b.end();
                    });
                    bool covers = std::all_of(unit_b.begin(), unit_b.end(),
                                              [&](Elem e) { return std::find(t.begin(), t.end(), e) != t.end(); });
                    if (inside && covers) config.emplace_back(s, compose(to_w, t));
                }
            spec.fixed[unit_w] = std::move(config);
        });
    }
    std::optional<Structure> found;
    for_each_age_extension(age, w, spec, [&](const Structure& s) {
        ApSolution sol{s, Morphism{identity_map(w.size()), MorphismKind::embedding},
                       Morphism{to_w, MorphismKind::embedding}};
        if (check_ap_solution(age, inst, sol)) return true;
        found = s;
        return false;
    });
    if (!found)
        throw Error("amalgamation-failure", "cannot realize " + compact(d.B) + " over " +
                                                compact(Morphism{d.A, MorphismKind::embedding}));
    return std::move(*found);
}

}  // namespace

std::vector<ExtensionDemand> extension_demands(const AgeSpec& age, const Structure& stage, int k) {
    std::vector<ExtensionDemand> out;
    for (int r = 0; r <= k && r <= stage.size(); ++r)
        for_each_subset(stage.size(), r, [&](const std::vector<Elem>& sub) {
            for (auto& b : one_point_extensions(age, stage.induced(sub))) out.push_back({sub, std::move(b)});
        });
    return out;
}

std::optional<Morphism> realize_demand(const ExtensionDemand& d, const Structure& target,
                                       const std::vector<Elem>& along) {
    PartialMap p{std::vector<Elem>(static_cast<std::size_t>(d.B.size()), kUnassigned), MorphismKind::embedding};
    for (std::size_t i = 0; i < d.A.size(); ++i) p.assigned[i] = along[static_cast<std::size_t>(d.A[i])];
    auto found = extend_partial(d.B, target, p, 1);
    if (found.empty()) return std::nullopt;
    return found.front();
}

LimitTower build_tower(const AgeSpec& age, int target_k, int rounds, const TowerOptions& opts) {
    if (target_k < 0 || rounds < 0) throw std::invalid_argument("negative tower parameter");
    LimitTower tower{age, {Structure(age.sig, 0)}, {}, {}};
    for (int round = 0; round < rounds; ++round) {
        Structure current = tower.top();
        Structure w = current;
        auto id = identity_map(current.size());
        for (const auto& d : extension_demands(age, current, target_k)) {
            if (realize_demand(d, w, id)) continue;
            w = one_point_amalgam(age, w, d);
            if (w.size() > opts.stage_cap)
                throw Error("stage-cap-exceeded",
                            "stage would exceed " + std::to_string(opts.stage_cap) + " elements");
        }
        tower.links.push_back({identity_map(current.size()), MorphismKind::embedding});
        tower.stages.push_back(std::move(w));
        tower.certificates.push_back({target_k, tower.last() - 1});
    }
    return tower;
}

CertificateVerdict certify_extension(const LimitTower& tower, int k, int stage) {
    if (stage < 0 || stage >= tower.last()) throw std::invalid_argument("certify_extension needs stage + 1");
    const auto& link = tower.links[static_cast<std::size_t>(stage)].map;
    const auto& next = tower.stages[static_cast<std::size_t>(stage) + 1];
    for (auto& d : extension_demands(tower.age, tower.stages[static_cast<std::size_t>(stage)], k))
        if (!realize_demand(d, next, link)) return {false, std::move(d)};
    return {};
}

StageEmbedding extend_partial_iso(const LimitTower& tower, int s, const PartialMap& p) {
    if (s < 0 || s > tower.last()) throw std::invalid_argument("no such stage");
    const auto& us = tower.stages[static_cast<std::size_t>(s)];
    if (static_cast<int>(p.assigned.size()) != us.size())
        throw Error("not-a-partial-isomorphism", "domain size differs from the stage");
    std::vector<Elem> dom;
    std::vector<Elem> img;
    for (Elem x = 0; x < us.size(); ++x) {
        Elem v = p.assigned[static_cast<std::size_t>(x)];
        if (v == kUnassigned) continue;
        if (v < 0 || v >= us.size()) throw Error("not-a-partial-isomorphism", "value out of range");
        dom.push_back(x);
        img.push_back(v);
    }
    if (!is_morphism(us.induced(dom), us.induced(img), identity_map(static_cast<int>(dom.size())),
                     MorphismKind::iso) ||
        std::set<Elem>(img.begin(), img.end()).size() != img.size())
        throw Error("not-a-partial-isomorphism", "restriction is not an isomorphism");
    std::vector<Elem> pushed = p.assigned;
    for (int t = s; t <= tower.last(); ++t) {
        if (t > s)
            for (auto& v : pushed)
                if (v != kUnassigned) v = tower.links[static_cast<std::size_t>(t) - 1](v);
        auto found = extend_partial(us, tower.stages[static_cast<std::size_t>(t)], {pushed, MorphismKind::embedding}, 1);
        if (!found.empty()) return {found.front(), t};
    }
    throw Error("insufficient-certificates", "no stage up to " + std::to_string(tower.last()) + " closes the extension");
}

StageEmbedding realize(const LimitTower& tower, const Structure& s) {
    if (auto v = member(tower.age, s); !v) throw Error("not-a-member", v.violation);
    for (int t = 0; t <= tower.last(); ++t) {
        auto found = find_morphisms(s, tower.stages[static_cast<std::size_t>(t)], MorphismKind::embedding, 1);
        if (!found.empty()) return {found.front(), t};
    }
    throw Error("insufficient-certificates", compact(s) + " embeds in no stage");
}

void dump_tower(const LimitTower& tower, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t n = 0; n < tower.stages.size(); ++n)
        write_structure_file(dir / ("stage_" + std::to_string(n) + ".txt"), tower.stages[n]);
    for (std::size_t n = 0; n < tower.links.size(); ++n) {
        std::ofstream out(dir / ("link_" + std::to_string(n) + ".txt"));
        if (!out) throw Error("io-error", "cannot write link file");
        out << format_map(tower.links[n].map) << "\n";
    }
    std::ofstream cert(dir / "certificates.txt");
    if (!cert) throw Error("io-error", "cannot write certificates");
    for (const auto& c : tower.certificates) cert << c.k << ' ' << c.stage << "\n";
    std::ofstream age(dir / "age.txt");
    age << describe_age_spec(tower.age);
}

}  // namespace fraisse
