#include "fraisse/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fraisse/error.hpp"
#include "fraisse/io.hpp"
#include "fraisse/search.hpp"

namespace fraisse {

UltrametricContext UltrametricContext::identity(int n) { return {identity_map(n)}; }

namespace {

void require_total(const UltrametricContext& ctx, const Map& f) {
    for (Elem a : ctx.order)
        if (a < 0 || static_cast<std::size_t>(a) >= f.size()) throw Error("domain-mismatch", "map not total on the enumeration");
}

bool injective(const Map& h) {
    std::set<Elem> seen(h.begin(), h.end());
    return seen.size() == h.size();
}

std::string show(const Map& m) { return "[" + format_map(m) + "]"; }

}  // namespace

AgreementIndex agreement_index(const UltrametricContext& ctx, const Map& f, const Map& g) {
    require_total(ctx, f);
    require_total(ctx, g);
    for (std::size_t i = 0; i < ctx.order.size(); ++i) {
        auto a = static_cast<std::size_t>(ctx.order[i]);
        if (f[a] != g[a]) return {false, i};
    }
    return {};
}

Rational dist(const UltrametricContext& ctx, const Map& f, const Map& g) {
    auto d = agreement_index(ctx, f, g);
    if (d.infinite) return Rational(0);
    if (d.index > 61) throw std::overflow_error("disagreement index too large for an exact dyadic");
    return {1, std::int64_t{1} << d.index};
}

LawReport check_metric_laws(const UltrametricContext& ctx, const std::vector<Map>& sample) {
    LawReport r;
    auto fail = [&](const std::string& what) {
        ++r.violations;
        if (!r.first_counterexample) r.first_counterexample = what;
    };
    auto n = sample.size();
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = dist(ctx, sample[i], sample[j]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ++r.metric_checks;
            if ((d[i][j] == Rational(0)) != (sample[i] == sample[j])) fail("identity " + show(sample[i]) + " " + show(sample[j]));
            if (d[i][j] != d[j][i]) fail("symmetry " + show(sample[i]) + " " + show(sample[j]));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                ++r.ultrametric_checks;
                if (d[i][j] > std::max(d[i][l], d[l][j]))
                    fail("ultrametric " + show(sample[i]) + " " + show(sample[j]) + " via " + show(sample[l]));
            }
    // h f and h g need h total on the values of f and g.
    for (const auto& h : sample) {
        bool inj = injective(h);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto& f = sample[i];
                const auto& g = sample[j];
                auto fits = [&](const Map& m) {
                    return std::all_of(m.begin(), m.end(), [&](Elem v) { return v >= 0 && static_cast<std::size_t>(v) < h.size(); });
                };
                if (!fits(f) || !fits(g)) continue;
                auto dl = dist(ctx, compose(h, f), compose(h, g));
                ++r.subinvariance_checks;
                if (dl > d[i][j]) fail("subinvariance h=" + show(h) + " f=" + show(f) + " g=" + show(g));
                if (inj) {
                    ++r.equality_checks;
                    if (d[i][j] != dl) fail("equality h=" + show(h) + " f=" + show(f) + " g=" + show(g));
                }
            }
    }
    return r;
}

CauchyVerdict is_cauchy(const UltrametricContext& ctx, const std::vector<Map>& seq, std::size_t horizon) {
    CauchyVerdict v;
    horizon = std::min(horizon, ctx.size());
    if (seq.empty()) {
        v.cauchy = horizon == 0;
        return v;
    }
    for (const auto& f : seq) require_total(ctx, f);
    const auto& last = seq.back();
    std::size_t len = seq.size();
    std::size_t allowed = len >= 2 ? len - 2 : 0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        std::size_t j = len - 1;
        while (j > 0) {
            auto d = agreement_index(ctx, seq[j - 1], last);
            if (!d.infinite && d.index < n) break;
            --j;
        }
        v.thresholds.push_back(j);
        if (j <= allowed && v.certified == n - 1) v.certified = n;
    }
    v.cauchy = v.certified == horizon;
    v.limit.assign(last.size(), kUnassigned);
    for (std::size_t i = 0; i < v.certified; ++i) {
        auto a = static_cast<std::size_t>(ctx.order[i]);
        v.limit[a] = last[a];
    }
    return v;
}

WeakOrbitPartition weak_orbits(int n, const std::vector<Map>& monoid) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& h : monoid) {
        if (static_cast<int>(h.size()) != n) throw Error("domain-mismatch", "monoid element of the wrong length");
        for (int b = 0; b < n; ++b) {
            int x = find(b);
            int y = find(h[static_cast<std::size_t>(b)]);
            if (x != y) parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
        }
    }
    WeakOrbitPartition p;
    p.size = n;
    p.block_of.assign(static_cast<std::size_t>(n), -1);
    std::map<int, int> index;
    for (int b = 0; b < n; ++b) {
        int root = find(b);
        auto [it, fresh] = index.try_emplace(root, static_cast<int>(p.blocks.size()));
        if (fresh) p.blocks.emplace_back();
        p.blocks[static_cast<std::size_t>(it->second)].push_back(b);
        p.block_of[static_cast<std::size_t>(b)] = it->second;
    }
    return p;
}

std::vector<Map> left_zeros(const std::vector<Map>& monoid) {
    std::vector<Map> out;
    for (const auto& z : monoid)
        if (std::all_of(monoid.begin(), monoid.end(), [&](const Map& g) { return compose(z, g) == z; })) out.push_back(z);
    return out;
}

bool BasicOpen::contains(const Map& f) const {
    return std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) {
        return c.first >= 0 && static_cast<std::size_t>(c.first) < f.size() && f[static_cast<std::size_t>(c.first)] == c.second;
    });
}

void check_monoid_isomorphism(const std::vector<Map>& monoid_a, const std::vector<Map>& monoid_b,
                              const std::vector<std::size_t>& h) {
    if (monoid_a.size() != monoid_b.size() || h.size() != monoid_a.size())
        throw Error("not-an-isomorphism", "monoid sizes differ");
    std::vector<char> hit(h.size(), 0);
    for (auto v : h) {
        if (v >= h.size() || hit[v]) throw Error("not-an-isomorphism", "not a bijection");
        hit[v] = 1;
    }
    std::map<Map, std::size_t> index_a;
    for (std::size_t i = 0; i < monoid_a.size(); ++i) index_a.emplace(monoid_a[i], i);
    for (std::size_t i = 0; i < monoid_a.size(); ++i)
        for (std::size_t j = 0; j < monoid_a.size(); ++j) {
            auto it = index_a.find(compose(monoid_a[i], monoid_a[j]));
            if (it == index_a.end()) throw Error("not-an-isomorphism", "first monoid is not closed");
            if (monoid_b[h[it->second]] != compose(monoid_b[h[i]], monoid_b[h[j]]))
                throw Error("not-an-isomorphism", "composition tables disagree");
        }
}

namespace {

std::size_t constant_index(const std::vector<Map>& monoid, Elem c) {
    for (std::size_t i = 0; i < monoid.size(); ++i)
        if (!monoid[i].empty() && std::all_of(monoid[i].begin(), monoid[i].end(), [&](Elem v) { return v == c; }))
            return i;
    throw Error("missing-constant", "monoid lacks the constant map " + std::to_string(c));
}

}  // namespace

BasicOpen image_of_basic_open(const std::vector<Map>& monoid_a, const std::vector<Map>& monoid_b,
                              const std::vector<std::size_t>& h, const BasicOpen& u) {
    check_monoid_isomorphism(monoid_a, monoid_b, h);
    if (u.constraints.size() != 1) throw std::invalid_argument("expected a single constraint a -> b");
    auto [a, b] = u.constraints.front();
    const auto& za = monoid_b[h[constant_index(monoid_a, a)]];
    const auto& zb = monoid_b[h[constant_index(monoid_a, b)]];
    auto orbits = weak_orbits(static_cast<int>(monoid_b.front().size()), monoid_b);
    std::map<Elem, Elem> cons;
    for (const auto& block : orbits.blocks) {
        Elem o = block.front();
        Elem x = za[static_cast<std::size_t>(o)];
        Elem y = zb[static_cast<std::size_t>(o)];
        auto [it, fresh] = cons.try_emplace(x, y);
        if (!fresh && it->second != y) throw std::logic_error("conflicting constraints from left zeros");
    }
    BasicOpen out;
    out.constraints.assign(cons.begin(), cons.end());
    return out;
}

bool image_matches(const std::vector<Map>& monoid_a, const std::vector<Map>& monoid_b,
                   const std::vector<std::size_t>& h, const BasicOpen& u, const BasicOpen& image) {
    std::set<Map> lhs;
    std::set<Map> rhs;
    for (std::size_t i = 0; i < monoid_a.size(); ++i)
        if (u.contains(monoid_a[i])) lhs.insert(monoid_b[h[i]]);
    for (const auto& g : monoid_b)
        if (image.contains(g)) rhs.insert(g);
    return lhs == rhs;
}

std::vector<Map> full_transformation_monoid(int n) {
    std::vector<Map> out;
    Map m(static_cast<std::size_t>(n), 0);
    while (true) {
        out.push_back(m);
        int p = n - 1;
        while (p >= 0 && m[static_cast<std::size_t>(p)] == n - 1) m[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) break;
        ++m[static_cast<std::size_t>(p)];
    }
    return out;
}

std::vector<Map> endomorphism_monoid(const Structure& s) {
    std::vector<Map> out;
    for (auto& h : find_morphisms(s, s, MorphismKind::hom)) out.push_back(std::move(h.map));
    return out;
}

}  // namespace fraisse
