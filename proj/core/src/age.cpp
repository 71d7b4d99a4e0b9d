#include "fraisse/age.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fraisse/error.hpp"
#include "fraisse/io.hpp"

namespace fraisse {

std::string_view to_string(AxiomTag tag) {
    switch (tag) {
        case AxiomTag::irreflexive: return "irreflexive";
        case AxiomTag::reflexive: return "reflexive";
        case AxiomTag::symmetric: return "symmetric";
        case AxiomTag::antisymmetric: return "antisymmetric";
        case AxiomTag::transitive: return "transitive";
        case AxiomTag::total: return "total";
        case AxiomTag::tournament: return "tournament";
        case AxiomTag::metric: return "metric";
    }
    return "?";
}

std::string_view to_string(Completion c) {
    switch (c) {
        case Completion::none: return "none";
        case Completion::transitive_closure: return "transitive-closure";
        case Completion::shortest_path: return "shortest-path";
    }
    return "?";
}

bool AgeSpec::is_metric() const {
    return std::any_of(axioms.begin(), axioms.end(), [](const Axiom& a) { return a.tag == AxiomTag::metric; });
}

bool AgeSpec::has_axiom(AxiomTag tag, std::size_t symbol) const {
    return std::any_of(axioms.begin(), axioms.end(),
                       [&](const Axiom& a) { return a.tag == tag && (tag == AxiomTag::metric || a.symbol == symbol); });
}

void AgeSpec::validate() const {
    for (const auto& ax : axioms) {
        if (ax.tag == AxiomTag::metric) continue;
        if (ax.symbol >= sig.size()) throw std::invalid_argument("axiom on unknown symbol");
        if (sig[ax.symbol].arity != 2)
            throw std::invalid_argument(std::string(to_string(ax.tag)) + " needs a binary symbol");
    }
    if (is_metric()) {
        if (distances.empty()) throw std::invalid_argument("metric age without distances");
        if (!(sig == metric_signature(distances)))
            throw std::invalid_argument("metric age signature must be r0 followed by one symbol per distance");
        for (std::size_t i = 0; i < distances.size(); ++i) {
            if (distances[i] <= Rational(0)) throw std::invalid_argument("distances must be positive");
            if (i && !(distances[i - 1] < distances[i])) throw std::invalid_argument("distances must ascend");
        }
    }
    for (const auto& f : forbidden)
        if (!(f.structure.signature() == sig)) throw std::invalid_argument("forbidden structure signature mismatch");
}

namespace {

bool has_pair(const Structure& s, std::size_t sym, Elem x, Elem y) {
    std::array<Elem, 2> t{x, y};
    return s.holds(sym, t);
}

std::optional<Rational> symbol_distance(const AgeSpec& age, std::size_t sym) {
    if (sym == 0) return Rational(0);
    if (sym - 1 < age.distances.size()) return age.distances[sym - 1];
    return std::nullopt;
}

/// Distance of a pair in a metric encoding, or the reason it is not one.
std::optional<Rational> pair_distance_checked(const AgeSpec& age, const Structure& s, Elem x, Elem y,
                                              std::string& why) {
    std::size_t k = age.sig.size();
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < k; ++i) {
        bool xy = has_pair(s, i, x, y);
        if (xy != has_pair(s, i, y, x)) {
            why = "metric(symmetric)";
            return std::nullopt;
        }
        if (xy && !first) first = i;
        if (!xy && first) {
            why = "metric(down-closed)";
            return std::nullopt;
        }
    }
    if (!first) {
        why = "metric(distance-missing)";
        return std::nullopt;
    }
    if ((*first == 0) != (x == y)) {
        why = "metric(zero-distance)";
        return std::nullopt;
    }
    return symbol_distance(age, *first);
}

}  // namespace

std::optional<Rational> encoded_distance(const AgeSpec& age, const Structure& s, Elem x, Elem y) {
    for (std::size_t i = 0; i < age.sig.size(); ++i)
        if (has_pair(s, i, x, y)) return symbol_distance(age, i);
    return std::nullopt;
}

std::optional<std::string> axiom_violation(const AgeSpec& age, const Structure& s, std::span<const Elem> elems) {
    auto name = [&](const Axiom& ax) {
        return std::string(to_string(ax.tag)) + "(" + age.sig[ax.symbol].name + ")";
    };
    for (const auto& ax : age.axioms) {
        if (ax.tag == AxiomTag::metric) {
            std::string why;
            std::vector<std::vector<std::optional<Rational>>> d(elems.size(),
                                                               std::vector<std::optional<Rational>>(elems.size()));
            for (std::size_t i = 0; i < elems.size(); ++i)
                for (std::size_t j = 0; j < elems.size(); ++j) {
                    d[i][j] = pair_distance_checked(age, s, elems[i], elems[j], why);
                    if (!d[i][j]) return why;
                }
            for (std::size_t i = 0; i < elems.size(); ++i)
                for (std::size_t j = 0; j < elems.size(); ++j)
                    for (std::size_t l = 0; l < elems.size(); ++l)
                        if (*d[i][l] > *d[i][j] + *d[j][l]) return std::string("metric(triangle)");
            continue;
        }
        std::size_t r = ax.symbol;
        for (Elem x : elems) {
            bool loop = has_pair(s, r, x, x);
            if (ax.tag == AxiomTag::irreflexive && loop) return name(ax);
            if (ax.tag == AxiomTag::reflexive && !loop) return name(ax);
            if (ax.tag == AxiomTag::tournament && loop) return name(ax);
            for (Elem y : elems) {
                bool xy = has_pair(s, r, x, y);
                bool yx = has_pair(s, r, y, x);
                switch (ax.tag) {
                    case AxiomTag::symmetric:
                        if (xy != yx) return name(ax);
                        break;
                    case AxiomTag::antisymmetric:
                        if (x != y && xy && yx) return name(ax);
                        break;
                    case AxiomTag::total:
                        if (x != y && !xy && !yx) return name(ax);
                        break;
                    case AxiomTag::tournament:
                        if (x != y && xy == yx) return name(ax);
                        break;
                    case AxiomTag::transitive:
                        if (xy)
                            for (Elem z : elems)
                                if (has_pair(s, r, y, z) && !has_pair(s, r, x, z)) return name(ax);
                        break;
                    default: break;
                }
            }
        }
    }
    return std::nullopt;
}

MemberVerdict member(const AgeSpec& age, const Structure& s) {
    if (!(s.signature() == age.sig)) throw Error("signature-mismatch", "structure is not over the signature of " + age.name);
    auto all = identity_map(s.size());
    if (auto v = axiom_violation(age, s, all)) return {false, *v};
    for (const auto& f : age.forbidden)
        if (f.structure.size() <= s.size() && !find_morphisms(f.structure, s, MorphismKind::embedding, 1).empty())
            return {false, "forbidden " + f.name + " embeds"};
    return {};
}

// --- extension generator ----------------------------------------------------

namespace {

bool config_has(const UnitConfig& c, std::size_t sym, const Tuple& t) {
    return std::any_of(c.begin(), c.end(), [&](const auto& p) { return p.first == sym && p.second == t; });
}

/// Axioms decidable from a single unit's own tuples.
bool locally_valid(const AgeSpec& age, std::span<const Elem> unit, const UnitConfig& c) {
    if (unit.size() == 1) {
        Tuple loop{unit[0], unit[0]};
        for (const auto& ax : age.axioms) {
            if (ax.tag == AxiomTag::metric) {
                for (std::size_t i = 0; i < age.sig.size(); ++i)
                    if (!config_has(c, i, loop)) return false;
                continue;
            }
            bool l = config_has(c, ax.symbol, loop);
            if ((ax.tag == AxiomTag::irreflexive || ax.tag == AxiomTag::tournament) && l) return false;
            if (ax.tag == AxiomTag::reflexive && !l) return false;
        }
        return true;
    }
    if (unit.size() != 2) return true;
    Tuple xy{unit[0], unit[1]};
    Tuple yx{unit[1], unit[0]};
    for (const auto& ax : age.axioms) {
        if (ax.tag == AxiomTag::metric) {
            bool ok = false;
            for (const auto& d : age.distances) {
                bool match = true;
                for (std::size_t i = 0; i < age.sig.size() && match; ++i) {
                    bool want = *symbol_distance(age, i) >= d;
                    match = config_has(c, i, xy) == want && config_has(c, i, yx) == want;
                }
                if (match) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
            continue;
        }
        bool a = config_has(c, ax.symbol, xy);
        bool b = config_has(c, ax.symbol, yx);
        switch (ax.tag) {
            case AxiomTag::symmetric:
                if (a != b) return false;
                break;
            case AxiomTag::antisymmetric:
                if (a && b) return false;
                break;
            case AxiomTag::total:
                if (!a && !b) return false;
                break;
            case AxiomTag::tournament:
                if (a == b) return false;
                break;
            default: break;
        }
    }
    return true;
}

bool has_global_axioms(const AgeSpec& age) {
    return std::any_of(age.axioms.begin(), age.axioms.end(), [](const Axiom& a) {
        return a.tag == AxiomTag::transitive || a.tag == AxiomTag::metric;
    });
}

class ExtensionGenerator {
public:
    ExtensionGenerator(const AgeSpec& age, const Structure& base, const ExtensionSpec& spec,
                       const std::function<bool(const Structure&)>& visit)
        : age_(age), spec_(spec), visit_(visit), base_n_(base.size()), n_(base.size() + spec.extra),
          current_(base.with_extra(spec.extra)), global_(has_global_axioms(age)) {
        if (!(base.signature() == age.sig)) throw Error("signature-mismatch", "extension base");
        auto un = static_cast<std::size_t>(n_);
        decided_.assign(un, std::vector<char>(un, 0));
        for (Elem x = 0; x < base_n_; ++x)
            for (Elem y = 0; y < base_n_; ++y) decided_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1;
        build_units();
        // Pinned units first so triangle checks see them early.
        std::stable_partition(units_.begin(), units_.end(),
                              [&](const Unit& u) { return spec_.fixed.count(u.elems) != 0; });
    }

    void run() {
        for (const auto& u : units_)
            if (u.configs.empty()) return;
        rec(0);
    }

private:
    struct Unit {
        std::vector<Elem> elems;
        std::vector<UnitConfig> configs;
    };

    void build_units() {
        int max_arity = age_.sig.max_arity();
        for (Elem m = base_n_; m < n_; ++m) {
            for (int size = 1; size <= max_arity; ++size) {
                // subsets of {0..m-1} of size-1, lexicographic
                std::vector<Elem> pick(static_cast<std::size_t>(size - 1));
                for (int i = 0; i < size - 1; ++i) pick[static_cast<std::size_t>(i)] = i;
                if (size - 1 > m) continue;
                while (true) {
                    std::vector<Elem> unit = pick;
                    unit.push_back(m);
                    add_unit(std::move(unit));
                    int i = size - 2;
                    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - (size - 1) + i) --i;
                    if (i < 0) break;
                    ++pick[static_cast<std::size_t>(i)];
                    for (int j = i + 1; j < size - 1; ++j)
                        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
                }
            }
        }
    }

    void add_unit(std::vector<Elem> elems) {
        std::vector<std::pair<std::size_t, Tuple>> slots;
        for (std::size_t s = 0; s < age_.sig.size(); ++s) {
            int arity = age_.sig[s].arity;
            if (arity < static_cast<int>(elems.size())) continue;
            std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
            while (true) {
                Tuple t;
                for (auto i : idx) t.push_back(elems[i]);
                std::set<Elem> entries(t.begin(), t.end());
                if (entries.size() == elems.size()) slots.emplace_back(s, std::move(t));
                int p = arity - 1;
                while (p >= 0 && idx[static_cast<std::size_t>(p)] + 1 == elems.size()) {
                    idx[static_cast<std::size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) break;
                ++idx[static_cast<std::size_t>(p)];
            }
        }
        if (slots.size() > 20) throw Error("search-too-large", "too many tuple slots per unit");
        Unit unit{std::move(elems), {}};
        auto fixed = spec_.fixed.find(unit.elems);
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << slots.size()); ++mask) {
            UnitConfig c;
            for (std::size_t i = 0; i < slots.size(); ++i)
                if (mask & (std::uint32_t{1} << i)) c.push_back(slots[i]);
            if (fixed != spec_.fixed.end()) {
                auto want = fixed->second;
                auto have = c;
                std::sort(want.begin(), want.end());
                std::sort(have.begin(), have.end());
                if (want != have) continue;
            }
            if (!locally_valid(age_, unit.elems, c)) continue;
            if (spec_.unit_filter && !spec_.unit_filter(unit.elems, c)) continue;
            unit.configs.push_back(std::move(c));
        }
        units_.push_back(std::move(unit));
    }

    bool pair_decided(Elem a, Elem b) const {
        return decided_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
    }

    void mark(const std::vector<Elem>& elems, char v) {
        if (elems.size() == 1) decided_[static_cast<std::size_t>(elems[0])][static_cast<std::size_t>(elems[0])] = v;
        if (elems.size() == 2) {
            decided_[static_cast<std::size_t>(elems[0])][static_cast<std::size_t>(elems[1])] = v;
            decided_[static_cast<std::size_t>(elems[1])][static_cast<std::size_t>(elems[0])] = v;
        }
    }

    bool globally_consistent(const std::vector<Elem>& elems) const {
        if (!global_ || elems.size() > 2) return true;
        auto all_decided = [&](const std::vector<Elem>& e) {
            for (Elem a : e)
                for (Elem b : e)
                    if (!pair_decided(a, b)) return false;
            return true;
        };
        if (all_decided(elems) && axiom_violation(age_, current_, elems)) return false;
        for (Elem z = 0; z < n_; ++z) {
            if (std::find(elems.begin(), elems.end(), z) != elems.end()) continue;
            auto e = elems;
            e.push_back(z);
            if (e.size() > 3 || !all_decided(e)) continue;
            if (axiom_violation(age_, current_, e)) return false;
        }
        return true;
    }

    bool rec(std::size_t ui) {
        if (ui == units_.size()) {
            if (!member(age_, current_)) return true;
            return visit_(current_);
        }
        const auto& unit = units_[ui];
        for (const auto& c : unit.configs) {
            for (const auto& [s, t] : c) current_.add(s, t);
            mark(unit.elems, 1);
            bool go_on = true;
            if (globally_consistent(unit.elems)) go_on = rec(ui + 1);
            mark(unit.elems, 0);
            for (const auto& [s, t] : c) current_.remove(s, t);
            if (!go_on) return false;
        }
        return true;
    }

    const AgeSpec& age_;
    const ExtensionSpec& spec_;
    const std::function<bool(const Structure&)>& visit_;
    Elem base_n_;
    Elem n_;
    Structure current_;
    bool global_;
    std::vector<std::vector<char>> decided_;
    std::vector<Unit> units_;
};

}  // namespace

void for_each_age_extension(const AgeSpec& age, const Structure& base, const ExtensionSpec& spec,
                            const std::function<bool(const Structure&)>& visit) {
    if (spec.extra < 0) throw std::invalid_argument("negative extension size");
    ExtensionGenerator(age, base, spec, visit).run();
}

std::vector<Structure> one_point_extensions(const AgeSpec& age, const Structure& base) {
    std::vector<Structure> out;
    ExtensionSpec spec;
    spec.extra = 1;
    for_each_age_extension(age, base, spec, [&](const Structure& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

std::vector<Structure> enumerate(const AgeSpec& age, int n) {
    if (n < 0) throw std::invalid_argument("negative enumeration size");
    std::map<std::vector<int>, Structure> reps;
    ExtensionSpec spec;
    spec.extra = n;
    for_each_age_extension(age, Structure(age.sig, 0), spec, [&](const Structure& s) {
        auto cf = canonical_form(s);
        auto key = cf.form.encoding();
        reps.try_emplace(std::move(key), std::move(cf.form));
        return true;
    });
    std::vector<Structure> out;
    out.reserve(reps.size());
    for (auto& [k, v] : reps) out.push_back(std::move(v));
    return out;
}

std::vector<Structure> enumerate_up_to(const AgeSpec& age, int n) {
    std::vector<Structure> out;
    for (int i = 0; i <= n; ++i) {
        auto level = enumerate(age, i);
        out.insert(out.end(), std::make_move_iterator(level.begin()), std::make_move_iterator(level.end()));
    }
    return out;
}

// --- free sums and completion --------------------------------------------------

FreeSum free_sum(const Structure& a, const Structure& b1, const Structure& b2, const Morphism& f1,
                 const Morphism& f2) {
    if (!is_morphism(a, b1, f1.map, MorphismKind::embedding) || !is_morphism(a, b2, f2.map, MorphismKind::embedding))
        throw Error("not-an-embedding", "free sum needs two embeddings of a common source");
    std::vector<Elem> g2(static_cast<std::size_t>(b2.size()), kUnassigned);
    for (Elem x = 0; x < a.size(); ++x) g2[static_cast<std::size_t>(f2(x))] = f1(x);
    Elem next = b1.size();
    for (auto& v : g2)
        if (v == kUnassigned) v = next++;
    Structure sum = b1.with_extra(next - b1.size());
    for (std::size_t s = 0; s < b2.signature().size(); ++s)
        for (const auto& t : b2.tuples(s)) sum.add(s, compose(g2, t));
    return {std::move(sum), Morphism{identity_map(b1.size()), MorphismKind::embedding},
            Morphism{std::move(g2), MorphismKind::embedding}};
}

namespace {

CompletionResult checked(const AgeSpec& age, Structure s) {
    if (auto v = member(age, s); !v) return {std::nullopt, v.violation};
    return {std::move(s), {}};
}

CompletionResult complete_transitive(const AgeSpec& age, Structure s) {
    for (std::size_t sym = 0; sym < age.sig.size(); ++sym) {
        if (age.has_axiom(AxiomTag::reflexive, sym))
            for (Elem x = 0; x < s.size(); ++x) s.add(sym, {x, x});
        if (!age.has_axiom(AxiomTag::transitive, sym)) continue;
        for (Elem k = 0; k < s.size(); ++k)
            for (Elem i = 0; i < s.size(); ++i)
                if (has_pair(s, sym, i, k))
                    for (Elem j = 0; j < s.size(); ++j)
                        if (has_pair(s, sym, k, j)) s.add(sym, {i, j});
    }
    return checked(age, std::move(s));
}

CompletionResult complete_metric(const AgeSpec& age, const Structure& s) {
    auto n = static_cast<std::size_t>(s.size());
    std::vector<std::vector<std::optional<Rational>>> known(n, std::vector<std::optional<Rational>>(n));
    for (Elem x = 0; x < s.size(); ++x)
        for (Elem y = 0; y < s.size(); ++y) {
            if (x == y) {
                known[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = Rational(0);
                continue;
            }
            if (!encoded_distance(age, s, x, y) && !encoded_distance(age, s, y, x)) continue;
            std::string why;
            auto d = pair_distance_checked(age, s, x, y, why);
            if (!d) return {std::nullopt, why};
            known[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = d;
        }
    // Shortest paths over the known distances give the upper bounds.
    auto upper = known;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (upper[i][k] && upper[k][j] && (!upper[i][j] || *upper[i][k] + *upper[k][j] < *upper[i][j]))
                    upper[i][j] = *upper[i][k] + *upper[k][j];
    MetricSpaceDesc m{s.size(), std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)), age.distances};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (known[i][j]) {
                m.dist[i][j] = *known[i][j];
                continue;
            }
            Rational lower(0);
            for (std::size_t w = 0; w < n; ++w)
                if (known[i][w] && known[w][j]) lower = std::max(lower, (*known[i][w] - *known[w][j]).abs());
            std::optional<Rational> pick;
            for (const auto& d : age.distances)
                if (d >= lower && (!upper[i][j] || d <= *upper[i][j])) pick = d;
            if (!pick) return {std::nullopt, "metric(no-admissible-distance)"};
            m.dist[i][j] = *pick;
        }
    return checked(age, encode_metric(m));
}

}  // namespace

CompletionResult complete(const AgeSpec& age, const Structure& s) {
    if (!(s.signature() == age.sig)) throw Error("signature-mismatch", "complete");
    switch (age.completion) {
        case Completion::none: return checked(age, s);
        case Completion::transitive_closure: return complete_transitive(age, s);
        case Completion::shortest_path: return complete_metric(age, s);
    }
    return {std::nullopt, "unknown completion"};
}

// --- metric encoding -----------------------------------------------------------

Signature metric_signature(const std::vector<Rational>& distances) {
    std::vector<Symbol> syms{{"r0", 2}};
    for (const auto& d : distances) syms.push_back({"r" + d.str(), 2});
    return Signature(std::move(syms));
}

AgeSpec metric_age(std::string name, std::vector<Rational> distances) {
    AgeSpec age;
    age.name = std::move(name);
    age.sig = metric_signature(distances);
    age.axioms = {{AxiomTag::metric, 0}};
    age.completion = Completion::shortest_path;
    age.distances = std::move(distances);
    return age;
}

Structure encode_metric(const MetricSpaceDesc& m) {
    auto sig = metric_signature(m.distances);
    Structure s(sig, m.size);
    for (Elem x = 0; x < m.size; ++x)
        for (Elem y = 0; y < m.size; ++y) {
            const auto& d = m.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
            if (d <= Rational(0)) s.add(0, {x, y});
            for (std::size_t i = 0; i < m.distances.size(); ++i)
                if (d <= m.distances[i]) s.add(i + 1, {x, y});
        }
    return s;
}

MetricSpaceDesc decode_metric(const Structure& s, const std::vector<Rational>& distances) {
    auto age = metric_age("decode", distances);
    if (!(s.signature() == age.sig)) throw Error("not-a-metric-encoding", "signature");
    auto n = static_cast<std::size_t>(s.size());
    MetricSpaceDesc m{s.size(), std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)), distances};
    for (Elem x = 0; x < s.size(); ++x)
        for (Elem y = 0; y < s.size(); ++y) {
            std::string why;
            auto d = pair_distance_checked(age, s, x, y, why);
            if (!d) throw Error("not-a-metric-encoding", why);
            m.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = *d;
        }
    return m;
}

// --- catalog ----------------------------------------------------------------------

namespace {

AgeSpec binary_age(std::string name, std::string symbol, std::vector<AxiomTag> tags, Completion completion) {
    AgeSpec age;
    age.name = std::move(name);
    age.sig = Signature({{std::move(symbol), 2}});
    for (auto t : tags) age.axioms.push_back({t, 0});
    age.completion = completion;
    return age;
}

std::vector<AgeSpec> make_builtins() {
    using enum AxiomTag;
    std::vector<AgeSpec> ages;
    ages.push_back(binary_age("graphs", "E", {irreflexive, symmetric}, Completion::none));
    auto tf = binary_age("triangle-free", "E", {irreflexive, symmetric}, Completion::none);
    Structure k3(tf.sig, 3);
    for (Elem x = 0; x < 3; ++x)
        for (Elem y = 0; y < 3; ++y)
            if (x != y) k3.add(0, {x, y});
    tf.forbidden.push_back({"K3", k3});
    ages.push_back(std::move(tf));
    ages.push_back(binary_age("posets", "le", {reflexive, antisymmetric, transitive}, Completion::transitive_closure));
    ages.push_back(
        binary_age("strict-posets", "lt", {irreflexive, antisymmetric, transitive}, Completion::transitive_closure));
    ages.push_back(binary_age("nonstrict-linear", "le", {reflexive, antisymmetric, transitive, total},
                              Completion::transitive_closure));
    ages.push_back(binary_age("strict-linear", "lt", {irreflexive, antisymmetric, transitive, total},
                              Completion::transitive_closure));
    ages.push_back(binary_age("tournaments", "arc", {tournament}, Completion::none));
    ages.push_back(metric_age("metric", {Rational(1), Rational(2)}));
    AgeSpec sets;
    sets.name = "sets";
    ages.push_back(std::move(sets));
    for (const auto& a : ages) a.validate();
    return ages;
}

}  // namespace

const std::vector<AgeSpec>& builtin_ages() {
    static const std::vector<AgeSpec> ages = make_builtins();
    return ages;
}

std::optional<AgeSpec> builtin_age(std::string_view name) {
    if (name == "linear") name = "nonstrict-linear";
    for (const auto& a : builtin_ages())
        if (a.name == name) return a;
    return std::nullopt;
}

// --- age spec files ---------------------------------------------------------------

AgeSpec parse_age_spec(std::string_view text, const std::filesystem::path& base_dir) {
    AgeSpec age;
    bool have_sig = false;
    std::vector<std::pair<std::string, std::string>> pending_axioms;
    std::vector<std::string> forbid_files;
    for (const auto& line : tokenize_lines(text)) {
        const auto& kw = line[0];
        if (kw == "age" && line.size() == 2) {
            age.name = line[1];
        } else if (kw == "signature") {
            age.sig = parse_signature_tokens(line);
            have_sig = true;
        } else if (kw == "axiom" && (line.size() == 2 || line.size() == 3)) {
            pending_axioms.emplace_back(line[1], line.size() == 3 ? line[2] : "");
        } else if (kw == "forbid" && line.size() == 2) {
            forbid_files.push_back(line[1]);
        } else if (kw == "completion" && line.size() == 2) {
            if (line[1] == "none") age.completion = Completion::none;
            else if (line[1] == "transitive-closure") age.completion = Completion::transitive_closure;
            else if (line[1] == "shortest-path") age.completion = Completion::shortest_path;
            else throw Error("parse-error", "unknown completion " + line[1]);
        } else if (kw == "distances") {
            for (std::size_t i = 1; i < line.size(); ++i) {
                try {
                    age.distances.push_back(Rational::parse(line[i]));
                } catch (const std::invalid_argument& e) {
                    throw Error("parse-error", e.what());
                }
            }
        } else {
            throw Error("parse-error", "unexpected age spec line starting with " + kw);
        }
    }
    if (age.name.empty()) throw Error("parse-error", "age spec without name");
    if (!have_sig && !age.distances.empty()) age.sig = metric_signature(age.distances);
    static const std::map<std::string, AxiomTag> tags{
        {"irreflexive", AxiomTag::irreflexive}, {"reflexive", AxiomTag::reflexive},
        {"symmetric", AxiomTag::symmetric},     {"antisymmetric", AxiomTag::antisymmetric},
        {"transitive", AxiomTag::transitive},   {"total", AxiomTag::total},
        {"tournament", AxiomTag::tournament},   {"metric", AxiomTag::metric}};
    for (const auto& [tag, sym] : pending_axioms) {
        auto it = tags.find(tag);
        if (it == tags.end()) throw Error("parse-error", "unknown axiom " + tag);
        if (it->second == AxiomTag::metric) {
            age.axioms.push_back({AxiomTag::metric, 0});
            continue;
        }
        auto idx = age.sig.find(sym);
        if (!idx) throw Error("parse-error", "axiom on unknown symbol '" + sym + "'");
        age.axioms.push_back({it->second, *idx});
    }
    for (const auto& f : forbid_files) {
        auto s = read_structure_file(base_dir / f);
        age.forbidden.push_back({std::filesystem::path(f).stem().string(), std::move(s)});
    }
    try {
        age.validate();
    } catch (const std::invalid_argument& e) {
        throw Error("parse-error", e.what());
    }
    return age;
}

AgeSpec read_age_spec_file(const std::filesystem::path& path) {
    return parse_age_spec(read_text_file(path), path.parent_path());
}

std::string describe_age_spec(const AgeSpec& age) {
    std::ostringstream out;
    out << "age " << age.name << "\n" << format_signature(age.sig) << "\n";
    for (const auto& ax : age.axioms) {
        out << "axiom " << to_string(ax.tag);
        if (ax.tag != AxiomTag::metric) out << ' ' << age.sig[ax.symbol].name;
        out << "\n";
    }
    if (!age.distances.empty()) {
        out << "distances";
        for (const auto& d : age.distances) out << ' ' << d.str();
        out << "\n";
    }
    out << "completion " << to_string(age.completion) << "\n";
    for (const auto& f : age.forbidden) out << "forbid " << f.name << "\n" << format_structure(f.structure);
    return out.str();
}

}  // namespace fraisse
