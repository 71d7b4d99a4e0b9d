#pragma once

// Test helpers and brute-force oracles. The oracles deliberately avoid the
// library's search, canonical-form and membership code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/structure.hpp"

namespace support {

using fraisse::Elem;
using fraisse::Signature;
using fraisse::Structure;

inline Signature binary(const std::string& name) { return Signature({{name, 2}}); }

/// Binary structure on n points from a list of ordered pairs.
inline Structure relation(const std::string& sym, int n, const std::vector<std::pair<Elem, Elem>>& pairs) {
    Structure s(binary(sym), n);
    for (auto [x, y] : pairs) s.add(0, {x, y});
    return s;
}

inline Structure graph(int n, const std::vector<std::pair<Elem, Elem>>& edges) {
    Structure s(binary("E"), n);
    for (auto [x, y] : edges) {
        s.add(0, {x, y});
        s.add(0, {y, x});
    }
    return s;
}

/// Non-strict order on n points: reflexive loops plus the closure of `lt`.
inline Structure poset(int n, const std::vector<std::pair<Elem, Elem>>& lt) {
    std::vector<std::vector<bool>> r(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (int x = 0; x < n; ++x) r[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = true;
    for (auto [x, y] : lt) r[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
                    r[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
                    r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    Structure s(binary("le"), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) s.add(0, {i, j});
    return s;
}

/// Chain 0 < 1 < ... < n-1, strict or non-strict.
inline Structure chain(int n, bool strict) {
    Structure s(binary(strict ? "lt" : "le"), n);
    for (int i = 0; i < n; ++i)
        for (int j = strict ? i + 1 : i; j < n; ++j) s.add(0, {i, j});
    return s;
}

inline Structure tournament(int n, const std::vector<std::pair<Elem, Elem>>& arcs) {
    return relation("arc", n, arcs);
}

inline std::vector<std::vector<Elem>> all_maps(int n, int m) {
    std::vector<std::vector<Elem>> out;
    if (m == 0) {
        if (n == 0) out.emplace_back();
        return out;
    }
    std::vector<Elem> f(static_cast<std::size_t>(n), 0);
    while (true) {
        out.push_back(f);
        int p = n - 1;
        while (p >= 0 && f[static_cast<std::size_t>(p)] == m - 1) f[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) return out;
        ++f[static_cast<std::size_t>(p)];
    }
}

/// Direct definition of hom / embedding / iso, tuple by tuple.
inline bool bf_is(const Structure& a, const Structure& b, const std::vector<Elem>& f, fraisse::MorphismKind kind) {
    const auto& sig = a.signature();
    for (std::size_t s = 0; s < sig.size(); ++s)
        for (const auto& t : a.tuples(s)) {
            std::vector<Elem> img;
            for (Elem x : t) img.push_back(f[static_cast<std::size_t>(x)]);
            if (!b.holds(s, img)) return false;
        }
    if (kind == fraisse::MorphismKind::hom) return true;
    if (std::set<Elem>(f.begin(), f.end()).size() != f.size()) return false;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        for (const auto& t : all_maps(sig[s].arity, a.size())) {
            std::vector<Elem> img;
            for (Elem x : t) img.push_back(f[static_cast<std::size_t>(x)]);
            if (b.holds(s, img) && !a.holds(s, t)) return false;
        }
    }
    return kind == fraisse::MorphismKind::embedding || static_cast<int>(f.size()) == b.size();
}

inline std::vector<std::vector<Elem>> bf_morphisms(const Structure& a, const Structure& b, fraisse::MorphismKind kind) {
    std::vector<std::vector<Elem>> out;
    for (auto& f : all_maps(a.size(), b.size()))
        if (bf_is(a, b, f, kind)) out.push_back(f);
    return out;
}

using Matrix = std::vector<std::vector<bool>>;

/// All labeled binary relations on n points satisfying `keep`, counted up to
/// isomorphism by the least adjacency string over all n! relabelings.
inline std::size_t orbit_count(int n, const std::function<bool(const Matrix&)>& keep) {
    auto cells = static_cast<std::size_t>(n * n);
    std::set<std::string> classes;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
        Matrix m(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
        for (std::size_t c = 0; c < cells; ++c) m[c / static_cast<std::size_t>(n)][c % static_cast<std::size_t>(n)] = (mask >> c) & 1U;
        if (!keep(m)) continue;
        std::iota(perm.begin(), perm.end(), 0);
        std::string best;
        do {
            std::string code;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    code += m[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]
                             [static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] ? '1' : '0';
            if (best.empty() || code < best) best = code;
        } while (std::next_permutation(perm.begin(), perm.end()));
        classes.insert(best);
    }
    return classes.size();
}

namespace pred {

inline bool irreflexive(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i][i]) return false;
    return true;
}
inline bool reflexive(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!m[i][i]) return false;
    return true;
}
inline bool symmetric(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[i][j] != m[j][i]) return false;
    return true;
}
inline bool antisymmetric(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (i != j && m[i][j] && m[j][i]) return false;
    return true;
}
inline bool transitive(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            for (std::size_t k = 0; k < m.size(); ++k)
                if (m[i][j] && m[j][k] && !m[i][k]) return false;
    return true;
}
inline bool total(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (i != j && !m[i][j] && !m[j][i]) return false;
    return true;
}
inline bool graph(const Matrix& m) { return irreflexive(m) && symmetric(m); }
inline bool poset(const Matrix& m) { return reflexive(m) && antisymmetric(m) && transitive(m); }
inline bool strict_poset(const Matrix& m) { return irreflexive(m) && antisymmetric(m) && transitive(m); }
inline bool linear(const Matrix& m) { return poset(m) && total(m); }
inline bool tournament(const Matrix& m) { return irreflexive(m) && antisymmetric(m) && total(m); }

}  // namespace pred

inline fraisse::AgeSpec age(const std::string& name) { return *fraisse::builtin_age(name); }

}  // namespace support
