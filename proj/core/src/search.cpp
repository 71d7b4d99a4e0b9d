#include "fraisse/search.hpp"

#include <algorithm>
#include <map>

#include "fraisse/error.hpp"

namespace fraisse {

namespace {

void require_same_signature(const Structure& a, const Structure& b) {
    if (!(a.signature() == b.signature())) throw Error("signature-mismatch", "");
}

/// Backtracking over source elements in index order. A tuple is checked as
/// soon as its largest entry is assigned.
class Backtracker {
public:
    Backtracker(const Structure& source, const Structure& target, const PartialMap& partial,
                const SearchOptions& options, const std::function<bool(const std::vector<Elem>&)>& visit)
        : src_(source), tgt_(target), partial_(partial), opts_(options), visit_(visit),
          kind_(partial.required_kind),
          map_(static_cast<std::size_t>(source.size()), kUnassigned),
          used_(static_cast<std::size_t>(target.size()), 0),
          closing_(static_cast<std::size_t>(source.size())) {
        for (std::size_t s = 0; s < src_.signature().size(); ++s)
            for (const auto& t : src_.tuples(s))
                closing_[static_cast<std::size_t>(*std::max_element(t.begin(), t.end()))].emplace_back(s, &t);
    }

    void run() {
        if (static_cast<int>(partial_.assigned.size()) != src_.size()) return;
        for (Elem v : partial_.assigned)
            if (v != kUnassigned && (v < 0 || v >= tgt_.size())) return;
        if (kind_ == MorphismKind::iso && src_.size() != tgt_.size()) return;
        if (kind_ != MorphismKind::hom) {
            std::vector<char> seen(static_cast<std::size_t>(tgt_.size()), 0);
            for (Elem v : partial_.assigned) {
                if (v == kUnassigned) continue;
                if (seen[static_cast<std::size_t>(v)]) return;
                seen[static_cast<std::size_t>(v)] = 1;
            }
        }
        step(0);
    }

private:
    bool step(Elem i) {
        if (i == src_.size()) {
            ++found_;
            if (!visit_(map_)) return false;
            return !(opts_.limit && found_ >= *opts_.limit);
        }
        auto ui = static_cast<std::size_t>(i);
        auto try_value = [&](Elem v) -> bool {
            if (kind_ != MorphismKind::hom && used_[static_cast<std::size_t>(v)]) return true;
            map_[ui] = v;
            if (consistent(i)) {
                if (kind_ != MorphismKind::hom) used_[static_cast<std::size_t>(v)] = 1;
                bool go_on = step(i + 1);
                if (kind_ != MorphismKind::hom) used_[static_cast<std::size_t>(v)] = 0;
                if (!go_on) return false;
            }
            map_[ui] = kUnassigned;
            return true;
        };
        Elem fixed = partial_.assigned[ui];
        if (fixed != kUnassigned) return try_value(fixed);
        if (ui < opts_.candidates.size() && !opts_.candidates[ui].empty()) {
            for (Elem v : opts_.candidates[ui])
                if (v >= 0 && v < tgt_.size() && !try_value(v)) return false;
            return true;
        }
        for (Elem v = 0; v < tgt_.size(); ++v)
            if (!try_value(v)) return false;
        return true;
    }

    bool consistent(Elem i) {
        Tuple img;
        for (const auto& [s, t] : closing_[static_cast<std::size_t>(i)]) {
            img.clear();
            for (Elem e : *t) img.push_back(map_[static_cast<std::size_t>(e)]);
            if (!tgt_.holds(s, img)) return false;
        }
        if (kind_ == MorphismKind::hom) return true;
        // Reflection over all tuples on {0..i} that contain i.
        for (std::size_t s = 0; s < src_.signature().size(); ++s) {
            int arity = src_.signature()[s].arity;
            Tuple t(static_cast<std::size_t>(arity), 0);
            Tuple image(static_cast<std::size_t>(arity));
            while (true) {
                if (std::find(t.begin(), t.end(), i) != t.end()) {
                    for (std::size_t p = 0; p < t.size(); ++p) image[p] = map_[static_cast<std::size_t>(t[p])];
                    if (tgt_.holds(s, image) && !src_.holds(s, t)) return false;
                }
                int p = arity - 1;
                while (p >= 0 && t[static_cast<std::size_t>(p)] == i) {
                    t[static_cast<std::size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) break;
                ++t[static_cast<std::size_t>(p)];
            }
        }
        return true;
    }

    const Structure& src_;
    const Structure& tgt_;
    const PartialMap& partial_;
    const SearchOptions& opts_;
    const std::function<bool(const std::vector<Elem>&)>& visit_;
    MorphismKind kind_;
    std::vector<Elem> map_;
    std::vector<char> used_;
    std::vector<std::vector<std::pair<std::size_t, const Tuple*>>> closing_;
    std::size_t found_ = 0;
};

}  // namespace

void for_each_extension(const Structure& source, const Structure& target, const PartialMap& partial,
                        const SearchOptions& options,
                        const std::function<bool(const std::vector<Elem>&)>& visit) {
    require_same_signature(source, target);
    if (options.limit && *options.limit == 0) return;
    Backtracker(source, target, partial, options, visit).run();
}

std::vector<Morphism> extend_partial(const Structure& source, const Structure& target, const PartialMap& partial,
                                     std::optional<std::size_t> limit) {
    std::vector<Morphism> out;
    SearchOptions opts;
    opts.limit = limit;
    for_each_extension(source, target, partial, opts, [&](const std::vector<Elem>& m) {
        out.push_back({m, partial.required_kind});
        return true;
    });
    return out;
}

std::vector<Morphism> find_morphisms(const Structure& a, const Structure& b, MorphismKind kind,
                                     std::optional<std::size_t> limit) {
    PartialMap p{std::vector<Elem>(static_cast<std::size_t>(a.size()), kUnassigned), kind};
    return extend_partial(a, b, p, limit);
}

std::optional<Morphism> is_isomorphic(const Structure& a, const Structure& b) {
    require_same_signature(a, b);
    if (a.size() != b.size()) return std::nullopt;
    for (std::size_t s = 0; s < a.signature().size(); ++s)
        if (a.tuples(s).size() != b.tuples(s).size()) return std::nullopt;
    auto found = find_morphisms(a, b, MorphismKind::iso, 1);
    if (found.empty()) return std::nullopt;
    return found.front();
}

namespace {

std::vector<int> refine_colors(const Structure& a) {
    auto n = static_cast<std::size_t>(a.size());
    std::vector<int> colors(n, 0);
    std::size_t classes = n == 0 ? 0 : 1;
    while (true) {
        std::vector<std::vector<long long>> sigs(n);
        for (std::size_t x = 0; x < n; ++x) sigs[x].push_back(colors[x]);
        for (std::size_t s = 0; s < a.signature().size(); ++s) {
            int arity = a.signature()[s].arity;
            for (int p = 0; p < arity; ++p) {
                std::vector<std::vector<std::vector<long long>>> per(n);
                for (const auto& t : a.tuples(s)) {
                    auto x = static_cast<std::size_t>(t[static_cast<std::size_t>(p)]);
                    std::vector<long long> pattern;
                    for (Elem e : t) {
                        pattern.push_back(colors[static_cast<std::size_t>(e)]);
                        pattern.push_back(static_cast<std::size_t>(e) == x ? 1 : 0);
                    }
                    per[x].push_back(std::move(pattern));
                }
                for (std::size_t x = 0; x < n; ++x) {
                    std::sort(per[x].begin(), per[x].end());
                    sigs[x].push_back(-1 - static_cast<long long>(s * 16 + static_cast<std::size_t>(p)));
                    sigs[x].push_back(static_cast<long long>(per[x].size()));
                    for (const auto& pat : per[x]) sigs[x].insert(sigs[x].end(), pat.begin(), pat.end());
                }
            }
        }
        auto sorted = sigs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t x = 0; x < n; ++x)
            colors[x] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sigs[x]) - sorted.begin());
        if (sorted.size() == classes) break;
        classes = sorted.size();
    }
    return colors;
}

std::vector<int> relabeled_encoding(const Structure& a, const std::vector<Elem>& label) {
    std::vector<int> enc{a.size()};
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        std::vector<Tuple> ts;
        ts.reserve(a.tuples(s).size());
        for (const auto& t : a.tuples(s)) {
            Tuple m;
            for (Elem e : t) m.push_back(label[static_cast<std::size_t>(e)]);
            ts.push_back(std::move(m));
        }
        std::sort(ts.begin(), ts.end());
        enc.push_back(static_cast<int>(ts.size()));
        for (const auto& t : ts) enc.insert(enc.end(), t.begin(), t.end());
    }
    return enc;
}

}  // namespace

CanonicalForm canonical_form(const Structure& a) {
    auto n = static_cast<std::size_t>(a.size());
    auto colors = refine_colors(a);
    // Position slots ordered by colour; slot p may take any element of colour slot_color[p].
    std::vector<int> slot_color(colors);
    std::sort(slot_color.begin(), slot_color.end());

    std::vector<Elem> label(n, kUnassigned);
    std::vector<char> used(n, 0);
    std::vector<int> best;
    std::vector<Elem> best_label;

    std::function<void(std::size_t)> place = [&](std::size_t pos) {
        if (pos == n) {
            auto enc = relabeled_encoding(a, label);
            if (best.empty() || enc < best) {
                best = std::move(enc);
                best_label = label;
            }
            return;
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (used[x] || colors[x] != slot_color[pos]) continue;
            used[x] = 1;
            label[x] = static_cast<Elem>(pos);
            place(pos + 1);
            used[x] = 0;
            label[x] = kUnassigned;
        }
    };
    place(0);
    if (n == 0) best_label.clear();

    Structure form(a.signature(), a.size());
    for (std::size_t s = 0; s < a.signature().size(); ++s)
        for (const auto& t : a.tuples(s)) {
            Tuple m;
            for (Elem e : t) m.push_back(best_label[static_cast<std::size_t>(e)]);
            form.add(s, std::move(m));
        }
    return {std::move(form), Morphism{best_label, MorphismKind::iso}};
}

}  // namespace fraisse
