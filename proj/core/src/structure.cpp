#include "fraisse/structure.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fraisse {

namespace {

constexpr std::size_t kDenseLimit = std::size_t{1} << 20;

}  // namespace

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity < 1) throw std::invalid_argument("symbol " + s.name + " has arity < 1");
        if (s.name.empty()) throw std::invalid_argument("empty symbol name");
        if (!seen.insert(s.name).second) throw std::invalid_argument("duplicate symbol " + s.name);
    }
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

int Signature::max_arity() const {
    int m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
}

Structure::Structure(Signature sig, int size) : sig_(std::move(sig)), size_(size), rels_(sig_.size()) {
    if (size < 0) throw std::invalid_argument("negative structure size");
    rebuild_dense();
}

std::size_t Structure::tuple_count() const {
    std::size_t n = 0;
    for (const auto& r : rels_) n += r.size();
    return n;
}

std::optional<std::size_t> Structure::dense_index(std::size_t symbol, std::span<const Elem> tuple) const {
    if (dense_[symbol].empty()) return std::nullopt;
    std::size_t idx = 0;
    for (Elem e : tuple) idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(e);
    return idx;
}

void Structure::rebuild_dense() {
    dense_.assign(rels_.size(), {});
    for (std::size_t s = 0; s < rels_.size(); ++s) {
        std::size_t cells = 1;
        bool fits = true;
        for (int i = 0; i < sig_[s].arity; ++i) {
            cells *= static_cast<std::size_t>(std::max(size_, 1));
            if (cells > kDenseLimit) {
                fits = false;
                break;
            }
        }
        if (!fits) continue;
        dense_[s].assign(cells, 0);
        for (const auto& t : rels_[s]) dense_[s][*dense_index(s, t)] = 1;
    }
}

bool Structure::holds(std::size_t symbol, std::span<const Elem> tuple) const {
    if (auto idx = dense_index(symbol, tuple)) return dense_[symbol][*idx] != 0;
    const auto& r = rels_[symbol];
    return std::binary_search(r.begin(), r.end(), tuple,
                              [](const auto& a, const auto& b) {
                                  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                              });
}

void Structure::add(std::size_t symbol, Tuple tuple) {
    if (symbol >= rels_.size()) throw std::invalid_argument("symbol index out of range");
    if (static_cast<int>(tuple.size()) != sig_[symbol].arity)
        throw std::invalid_argument("tuple length does not match arity of " + sig_[symbol].name);
    for (Elem e : tuple)
        if (e < 0 || e >= size_) throw std::invalid_argument("tuple entry out of range");
    auto& r = rels_[symbol];
    auto it = std::lower_bound(r.begin(), r.end(), tuple);
    if (it != r.end() && *it == tuple) return;
    if (auto idx = dense_index(symbol, tuple)) dense_[symbol][*idx] = 1;
    r.insert(it, std::move(tuple));
}

void Structure::remove(std::size_t symbol, const Tuple& tuple) {
    auto& r = rels_[symbol];
    auto it = std::lower_bound(r.begin(), r.end(), tuple);
    if (it == r.end() || *it != tuple) return;
    if (auto idx = dense_index(symbol, tuple)) dense_[symbol][*idx] = 0;
    r.erase(it);
}

Structure Structure::induced(std::span<const Elem> elems) const {
    std::vector<Elem> relabel(static_cast<std::size_t>(size_), kUnassigned);
    for (std::size_t i = 0; i < elems.size(); ++i) relabel[static_cast<std::size_t>(elems[i])] = static_cast<Elem>(i);
    Structure out(sig_, static_cast<int>(elems.size()));
    for (std::size_t s = 0; s < rels_.size(); ++s) {
        for (const auto& t : rels_[s]) {
            Tuple mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (Elem e : t) {
                Elem m = relabel[static_cast<std::size_t>(e)];
                if (m == kUnassigned) {
                    inside = false;
                    break;
                }
                mapped.push_back(m);
            }
            if (inside) out.add(s, std::move(mapped));
        }
    }
    return out;
}

Structure Structure::with_extra(int extra) const {
    Structure out = *this;
    out.size_ += extra;
    out.rebuild_dense();
    return out;
}

std::vector<int> Structure::encoding() const {
    std::vector<int> enc{size_};
    for (const auto& r : rels_) {
        enc.push_back(static_cast<int>(r.size()));
        for (const auto& t : r) enc.insert(enc.end(), t.begin(), t.end());
    }
    return enc;
}

std::string_view to_string(MorphismKind kind) {
    switch (kind) {
        case MorphismKind::hom: return "hom";
        case MorphismKind::embedding: return "embedding";
        case MorphismKind::iso: return "iso";
    }
    return "?";
}

bool is_morphism(const Structure& a, const Structure& b, std::span<const Elem> map, MorphismKind kind) {
    if (!(a.signature() == b.signature())) return false;
    if (static_cast<int>(map.size()) != a.size()) return false;
    for (Elem e : map)
        if (e < 0 || e >= b.size()) return false;
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        for (const auto& t : a.tuples(s)) {
            Tuple img;
            for (Elem e : t) img.push_back(map[static_cast<std::size_t>(e)]);
            if (!b.holds(s, img)) return false;
        }
    }
    if (kind == MorphismKind::hom) return true;
    std::vector<char> used(static_cast<std::size_t>(b.size()), 0);
    for (Elem e : map) {
        if (used[static_cast<std::size_t>(e)]) return false;
        used[static_cast<std::size_t>(e)] = 1;
    }
    // Reflection: count image tuples of b inside the image and compare.
    std::vector<Elem> inverse(static_cast<std::size_t>(b.size()), kUnassigned);
    for (std::size_t i = 0; i < map.size(); ++i) inverse[static_cast<std::size_t>(map[i])] = static_cast<Elem>(i);
    for (std::size_t s = 0; s < b.signature().size(); ++s) {
        for (const auto& t : b.tuples(s)) {
            Tuple pre;
            bool inside = true;
            for (Elem e : t) {
                Elem p = inverse[static_cast<std::size_t>(e)];
                if (p == kUnassigned) {
                    inside = false;
                    break;
                }
                pre.push_back(p);
            }
            if (inside && !a.holds(s, pre)) return false;
        }
    }
    if (kind == MorphismKind::iso) return a.size() == b.size();
    return true;
}

std::vector<Elem> compose(std::span<const Elem> f, std::span<const Elem> g) {
    std::vector<Elem> out;
    out.reserve(g.size());
    for (Elem x : g) out.push_back(f[static_cast<std::size_t>(x)]);
    return out;
}

std::vector<Elem> identity_map(int n) {
    std::vector<Elem> id(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
    return id;
}

}  // namespace fraisse
