#include "fraisse/endo.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "fraisse/amalgamation.hpp"
#include "fraisse/error.hpp"
#include "fraisse/io.hpp"
#include "fraisse/search.hpp"

namespace fraisse {

namespace {

std::string show(const std::vector<Elem>& m) { return compact(Morphism{m, MorphismKind::hom}); }

template <class F>
void for_each_subset(int n, int r, F&& visit) {
    if (r > n || r < 0) return;
    std::vector<Elem> pick(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        if (!visit(pick)) return;
        int i = r - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - r + i) --i;
        if (i < 0) return;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
}

/// Candidate lists u^{-1}(target[x]) restricted to points below `limit`;
/// nullopt when some free point has no candidate.
std::optional<std::vector<std::vector<Elem>>> preimage_candidates(const std::vector<Elem>& u,
                                                                  const std::vector<Elem>& target,
                                                                  const std::vector<Elem>& fixed, int limit) {
    std::vector<std::vector<Elem>> cands(target.size());
    for (std::size_t x = 0; x < target.size(); ++x) {
        if (!fixed.empty() && fixed[x] != kUnassigned) continue;
        for (Elem y = 0; y < limit; ++y)
            if (u[static_cast<std::size_t>(y)] == target[x]) cands[x].push_back(y);
        if (cands[x].empty()) return std::nullopt;
    }
    return cands;
}

struct Discharge {
    std::vector<Elem> iota;
    int added = 0;
};

class Builder {
public:
    Builder(const LimitTower& tower, int k, int m)
        : age_(tower.age), w_(tower.top()), u_(identity_map(tower.top().size())), base_size_(tower.top().size()),
          k_(k), m_(m), um_(tower.stages[static_cast<std::size_t>(m)]) {}

    void universality() {
        for (const auto& a : enumerate_up_to(age_, k_)) {
            for (const auto& h : find_morphisms(a, um_, MorphismKind::hom)) {
                std::string what = "A=" + compact(a) + " h=" + compact(h);
                auto r = discharge(a, h.map, {});
                if (!r) throw Error("hap-failure", "universality demand " + what + " cannot be factored");
                bool collapsing = std::set<Elem>(h.map.begin(), h.map.end()).size() < h.map.size();
                log_.push_back({"universality", what, "iota=" + show(r->iota), r->added, collapsing});
                genericity(r->iota);
            }
        }
    }

    void homogeneity() {
        const Structure wu = w_;
        int n = wu.size();
        for (int r = 2; r <= k_; ++r) {
            for_each_subset(n, r, [&](const std::vector<Elem>& s) {
                Structure x = wu.induced(s);
                std::vector<Elem> target;
                for (Elem e : s) target.push_back(u_[static_cast<std::size_t>(e)]);
                for (unsigned mask = 1; mask + 1 < (1u << r); ++mask) {
                    std::vector<Elem> sub;
                    for (int i = 0; i < r; ++i)
                        if (mask & (1u << i)) sub.push_back(i);
                    homogeneity_demands(wu, s, x, target, sub);
                }
                return true;
            });
        }
    }

    EndoApprox finish(const LimitTower& tower, const Structure& universal) {
        EndoApprox e;
        e.tower = tower;
        e.base_last = tower.last();
        e.tower.links.push_back({identity_map(tower.top().size()), MorphismKind::embedding});
        e.tower.stages.push_back(universal);
        e.universal_stage = e.tower.last();
        e.tower.links.push_back({identity_map(universal.size()), MorphismKind::embedding});
        e.tower.stages.push_back(w_);
        e.u = u_;
        e.k = k_;
        e.m = m_;
        e.log = std::move(log_);
        return e;
    }

    const Structure& universe() const { return w_; }

private:
    void homogeneity_demands(const Structure& wu, const std::vector<Elem>& s, const Structure& x,
                             const std::vector<Elem>& target, const std::vector<Elem>& sub) {
        Structure xa = x.induced(sub);
        std::vector<Elem> sub_target;
        for (Elem i : sub) sub_target.push_back(target[static_cast<std::size_t>(i)]);
        auto cands = preimage_candidates(u_, sub_target, {}, wu.size());
        if (!cands) return;
        SearchOptions opts;
        opts.candidates = *cands;
        std::vector<std::vector<Elem>> psis;
        for_each_extension(xa, wu, {std::vector<Elem>(sub.size(), kUnassigned), MorphismKind::embedding}, opts,
                           [&](const std::vector<Elem>& psi) {
                               psis.push_back(psi);
                               return true;
                           });
        for (const auto& psi : psis) {
            bool trivial = true;
            std::vector<Elem> fixed(s.size(), kUnassigned);
            for (std::size_t i = 0; i < sub.size(); ++i) {
                fixed[static_cast<std::size_t>(sub[i])] = psi[i];
                trivial = trivial && psi[i] == s[static_cast<std::size_t>(sub[i])];
            }
            if (trivial) continue;
            std::string what = "S=" + show(s) + " psi: " + show(sub) + "->" + show(psi);
            auto r = discharge(x, target, fixed);
            if (!r) throw Error("aep-failure", "homogeneity demand " + what + " has no correcting embedding");
            log_.push_back({"homogeneity", what, "phi=" + show(r->iota), r->added});
        }
    }

    /// Every one-point extension of each small subset of the witness image
    /// that contains a new point is realized, with some u-value in U_L.
    void genericity(const std::vector<Elem>& iota) {
        std::vector<Elem> image = iota;
        std::sort(image.begin(), image.end());
        auto is_new = [&](Elem e) { return e >= base_size_; };
        for (int r = 1; r <= k_ && r <= static_cast<int>(image.size()); ++r) {
            for_each_subset(static_cast<int>(image.size()), r, [&](const std::vector<Elem>& pos) {
                std::vector<Elem> s;
                for (Elem p : pos) s.push_back(image[static_cast<std::size_t>(p)]);
                if (std::none_of(s.begin(), s.end(), is_new)) return true;
                realize_types(s);
                return true;
            });
        }
    }

    void realize_types(const std::vector<Elem>& s) {
        for (const auto& b : one_point_extensions(age_, w_.induced(s))) {
            std::vector<Elem> pinned = s;
            pinned.push_back(kUnassigned);
            if (!extend_partial(b, w_, {pinned, MorphismKind::embedding}, 1).empty()) continue;
            std::vector<Elem> target;
            for (Elem e : s) target.push_back(u_[static_cast<std::size_t>(e)]);
            target.push_back(kUnassigned);
            std::string what = "S=" + show(s) + " B=" + compact(b);
            bool done = false;
            for (Elem p = 0; p < base_size_ && !done; ++p) {
                target.back() = p;
                if (auto r = add_points(b, target, pinned)) {
                    log_.push_back({"genericity", what, "z=" + std::to_string(r->back()) + " u(z)=" + std::to_string(p), 1});
                    done = true;
                }
            }
            if (done) continue;
            HapInstance inst{w_.induced(s), b, universe_base(),
                             Morphism{identity_map(static_cast<int>(s.size())), MorphismKind::embedding},
                             Morphism{std::vector<Elem>(target.begin(), target.end() - 1), MorphismKind::hom}};
            if (auto proof = refute_hap(age_, inst))
                throw Error("hap-failure", "demand " + what + ": " + proof->text);
            throw Error("hap-failure", "demand " + what + ": no image for the new point within U_L (non-conclusive)");
        }
    }

    Structure universe_base() const {
        std::vector<Elem> base = identity_map(base_size_);
        return w_.induced(base);
    }

    std::optional<Discharge> discharge(const Structure& x, const std::vector<Elem>& target,
                                       const std::vector<Elem>& fixed) {
        auto n = static_cast<std::size_t>(x.size());
        std::vector<Elem> pin = fixed.empty() ? std::vector<Elem>(n, kUnassigned) : fixed;
        if (auto cands = preimage_candidates(u_, target, pin, w_.size())) {
            SearchOptions opts;
            opts.candidates = *cands;
            opts.limit = 1;
            std::optional<std::vector<Elem>> found;
            for_each_extension(x, w_, {pin, MorphismKind::embedding}, opts, [&](const std::vector<Elem>& m) {
                found = m;
                return false;
            });
            if (found) return Discharge{*found, 0};
        }
        std::vector<Elem> free;
        for (Elem i = 0; i < x.size(); ++i)
            if (pin[static_cast<std::size_t>(i)] == kUnassigned) free.push_back(i);
        std::optional<Discharge> result;
        for (int j = 1; j <= static_cast<int>(free.size()) && !result; ++j) {
            for_each_subset(static_cast<int>(free.size()), j, [&](const std::vector<Elem>& pos) {
                std::vector<char> fresh(n, 0);
                for (Elem p : pos) fresh[static_cast<std::size_t>(free[static_cast<std::size_t>(p)])] = 1;
                std::vector<Elem> keep;
                for (Elem i = 0; i < x.size(); ++i)
                    if (!fresh[static_cast<std::size_t>(i)]) keep.push_back(i);
                Structure xk = x.induced(keep);
                std::vector<Elem> kt;
                std::vector<Elem> kp;
                for (Elem i : keep) {
                    kt.push_back(target[static_cast<std::size_t>(i)]);
                    kp.push_back(pin[static_cast<std::size_t>(i)]);
                }
                auto cands = preimage_candidates(u_, kt, kp, w_.size());
                if (!cands) return true;
                SearchOptions opts;
                opts.candidates = *cands;
                for_each_extension(xk, w_, {kp, MorphismKind::embedding}, opts, [&](const std::vector<Elem>& m) {
                    std::vector<Elem> iota(n, kUnassigned);
                    for (std::size_t i = 0; i < keep.size(); ++i) iota[static_cast<std::size_t>(keep[i])] = m[i];
                    if (auto full = add_points(x, target, iota)) {
                        result = Discharge{*full, j};
                        return false;
                    }
                    return true;
                });
                return !result;
            });
        }
        return result;
    }

    /// Appends a point for every unassigned entry of iota, with u-value
    /// target[x]; relations to the image are copied from x and the rest are
    /// chosen so that u stays a homomorphism.
    std::optional<std::vector<Elem>> add_points(const Structure& x, const std::vector<Elem>& target,
                                                std::vector<Elem> iota) {
        Elem next = w_.size();
        std::vector<Elem> u_ext = u_;
        for (std::size_t i = 0; i < iota.size(); ++i)
            if (iota[i] == kUnassigned) {
                iota[i] = next++;
                u_ext.push_back(target[i]);
            }
        ExtensionSpec spec;
        spec.extra = next - w_.size();
        int max_arity = age_.sig.max_arity();
        for (int r = 1; r <= max_arity && r <= x.size(); ++r)
            for_each_subset(x.size(), r, [&](const std::vector<Elem>& unit_x) {
                std::vector<Elem> unit_w;
                for (Elem e : unit_x) unit_w.push_back(iota[static_cast<std::size_t>(e)]);
                if (std::none_of(unit_w.begin(), unit_w.end(), [&](Elem e) { return e >= w_.size(); })) return true;
                UnitConfig config;
                for (std::size_t s = 0; s < x.signature().size(); ++s)
                    for (const auto& t : x.tuples(s)) {
                        std::vector<Elem> entries(t.begin(), t.end());
                        std::sort(entries.begin(), entries.end());
                        entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
                        if (entries == unit_x) config.emplace_back(s, compose(iota, t));
                    }
                std::sort(unit_w.begin(), unit_w.end());
                spec.fixed[unit_w] = std::move(config);
                return true;
            });
        const Structure& old = w_;
        spec.unit_filter = [&](std::span<const Elem>, const UnitConfig& config) {
            for (const auto& [s, t] : config)
                if (!old.holds(s, compose(u_ext, t))) return false;
            return true;
        };
        std::optional<Structure> grown;
        for_each_age_extension(age_, w_, spec, [&](const Structure& s) {
            grown = s;
            return false;
        });
        if (!grown) return std::nullopt;
        w_ = std::move(*grown);
        u_ = std::move(u_ext);
        return iota;
    }

    const AgeSpec& age_;
    Structure w_;
    std::vector<Elem> u_;
    int base_size_;
    int k_;
    int m_;
    const Structure& um_;
    std::vector<EndoDemand> log_;
};

}  // namespace

int EndoApprox::shift(int n) const {
    const auto& un = tower.stages.at(static_cast<std::size_t>(n));
    Elem top = -1;
    for (Elem x = 0; x < un.size(); ++x) top = std::max(top, u[static_cast<std::size_t>(x)]);
    for (int t = 0; t <= tower.last(); ++t)
        if (top < tower.stages[static_cast<std::size_t>(t)].size()) return t;
    return tower.last();
}

Morphism EndoApprox::stage_map(int n) const {
    const auto& un = tower.stages.at(static_cast<std::size_t>(n));
    return {std::vector<Elem>(u.begin(), u.begin() + un.size()), MorphismKind::hom};
}

EndoApprox build_universal_endo(const LimitTower& tower, int k, int m) {
    if (k < 0 || m < 0) throw std::invalid_argument("negative level");
    if (m > tower.last()) throw Error("insufficient-certificates", "level m exceeds the tower height");
    Builder b(tower, k, m);
    b.universality();
    Structure universal = b.universe();
    b.homogeneity();
    return b.finish(tower, universal);
}

std::optional<std::string> verify_endo(const EndoApprox& e) {
    const auto& w = e.universe();
    if (static_cast<int>(e.u.size()) != w.size()) return "u is not total";
    auto base = e.tower.stages[static_cast<std::size_t>(e.base_last)].size();
    for (Elem v : e.u)
        if (v < 0 || v >= base) return "u leaves U_L";
    if (!is_morphism(w, w, e.u, MorphismKind::hom)) return "u is not a homomorphism";
    const auto& um = e.tower.stages[static_cast<std::size_t>(e.m)];
    for (const auto& a : enumerate_up_to(e.tower.age, e.k))
        for (const auto& h : find_morphisms(a, um, MorphismKind::hom)) {
            try {
                (void)factor_through(e, a, h);
            } catch (const Error& err) {
                return "A=" + compact(a) + " h=" + compact(h) + ": " + err.what();
            }
        }
    return std::nullopt;
}

Factorization factor_through(const EndoApprox& e, const Structure& a, const Morphism& h) {
    const auto& um = e.tower.stages[static_cast<std::size_t>(e.m)];
    if (a.size() > e.k) throw Error("outside-certified-level", "|A| exceeds k");
    if (static_cast<int>(h.map.size()) != a.size()) throw std::invalid_argument("map length differs from |A|");
    for (Elem v : h.map)
        if (v < 0 || v >= um.size()) throw Error("outside-certified-level", "h leaves U_m");
    if (!is_morphism(a, um, h.map, MorphismKind::hom)) throw std::invalid_argument("h is not a homomorphism");
    for (int t = 0; t <= e.tower.last(); ++t) {
        const auto& ut = e.tower.stages[static_cast<std::size_t>(t)];
        auto cands = preimage_candidates(e.u, h.map, {}, ut.size());
        if (!cands) continue;
        SearchOptions opts;
        opts.candidates = *cands;
        opts.limit = 1;
        std::optional<std::vector<Elem>> found;
        for_each_extension(a, ut, {std::vector<Elem>(h.map.size(), kUnassigned), MorphismKind::embedding}, opts,
                           [&](const std::vector<Elem>& m) {
                               found = m;
                               return false;
                           });
        if (found) return {Morphism{*found, MorphismKind::embedding}, t};
    }
    throw Error("factorization-missing", "no embedding factors " + compact(h));
}

std::pair<Morphism, Morphism> factor_agreeing(const EndoApprox& e, const Structure& a, const Morphism& f,
                                              const Morphism& g, const std::vector<Elem>& common) {
    for (Elem c : common)
        if (f(c) != g(c)) throw std::invalid_argument("f and g disagree on the common part");
    auto i1 = factor_through(e, a, f).iota;
    auto i2 = factor_through(e, a, g).iota;
    bool agree = std::all_of(common.begin(), common.end(), [&](Elem c) { return i1(c) == i2(c); });
    if (agree) return {i1, i2};
    // Correct i2 by an embedding phi of its image with u phi = u and phi i2 = i1 on the common part.
    const auto& w = e.universe();
    std::vector<Elem> image = i2.map;
    std::sort(image.begin(), image.end());
    auto pos = [&](Elem v) {
        return static_cast<std::size_t>(std::lower_bound(image.begin(), image.end(), v) - image.begin());
    };
    Structure x = w.induced(image);
    std::vector<Elem> pin(image.size(), kUnassigned);
    for (Elem c : common) pin[pos(i2(c))] = i1(c);
    std::vector<Elem> target;
    for (Elem v : image) target.push_back(e.u[static_cast<std::size_t>(v)]);
    auto cands = preimage_candidates(e.u, target, pin, w.size());
    std::optional<std::vector<Elem>> phi;
    if (cands) {
        SearchOptions opts;
        opts.candidates = *cands;
        opts.limit = 1;
        for_each_extension(x, w, {pin, MorphismKind::embedding}, opts, [&](const std::vector<Elem>& m) {
            phi = m;
            return false;
        });
    }
    if (!phi) throw Error("homogeneity-demand-unsatisfiable-at-bound", "no correcting embedding for " + compact(g));
    Morphism out{std::vector<Elem>(i2.map.size()), MorphismKind::embedding};
    for (std::size_t i = 0; i < i2.map.size(); ++i) out.map[i] = (*phi)[pos(i2.map[i])];
    return {i1, out};
}

SequenceFactorization factor_sequence(const EndoApprox& e, const Structure& a, const std::vector<Morphism>& fs) {
    if (fs.empty()) throw Error("not-convergent", "empty sequence");
    const auto& f = fs.back();
    auto len = static_cast<int>(fs.size());
    auto n = static_cast<std::size_t>(a.size());
    SequenceFactorization out;
    out.thresholds.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int j = len - 1;
        while (j > 0) {
            const auto& prev = fs[static_cast<std::size_t>(j) - 1];
            bool same = true;
            for (std::size_t p = 0; p <= i; ++p) same = same && prev.map.at(p) == f.map[p];
            if (!same) break;
            --j;
        }
        out.thresholds[i] = j;
    }
    int full = n ? out.thresholds.back() : 0;
    if (full > std::max(0, len - 2))
        throw Error("not-convergent", "the sequence only reaches its last term at index " + std::to_string(full));
    out.limit = factor_through(e, a, f).iota;
    for (int j = 0; j < len; ++j) {
        std::vector<Elem> common;
        for (std::size_t i = 0; i < n && out.thresholds[i] <= j; ++i) common.push_back(static_cast<Elem>(i));
        if (common.size() == n) out.iotas.push_back(out.limit);
        else out.iotas.push_back(factor_agreeing(e, a, f, fs[static_cast<std::size_t>(j)], common).second);
    }
    return out;
}

GateReport verify_gate(const EndoApprox& e, const std::vector<GateSample>& samples) {
    GateReport report;
    const auto& w = e.universe();
    for (const auto& s : samples) {
        GateEntry entry;
        try {
            entry.iota = factor_through(e, s.a, s.h).iota;
            bool emb = is_morphism(s.a, w, entry.iota.map, MorphismKind::embedding);
            bool eq = compose(e.u, entry.iota.map) == s.h.map;
            entry.ok = emb && eq;
            if (!entry.ok) entry.message = emb ? "u iota != g" : "iota is not an embedding";
        } catch (const std::exception& err) {
            entry.message = err.what();
        }
        if (!entry.ok) ++report.failures;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::vector<GateSample> gate_samples(const EndoApprox& e, int k, int m) {
    std::vector<GateSample> out;
    for (int j = 0; j <= m && j <= e.tower.last(); ++j) {
        const auto& uj = e.tower.stages[static_cast<std::size_t>(j)];
        for (int r = 1; r <= k; ++r)
            for_each_subset(uj.size(), r, [&](const std::vector<Elem>& s) {
                auto a = uj.induced(s);
                for (auto& h : find_morphisms(a, uj, MorphismKind::hom)) out.push_back({a, std::move(h)});
                return true;
            });
    }
    return out;
}

void dump_endo(const EndoApprox& e, const std::filesystem::path& dir) {
    dump_tower(e.tower, dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name);
        if (!out) throw Error("io-error", std::string("cannot write ") + name);
        return out;
    };
    open("u.txt") << format_map(e.u) << "\n";
    auto shift = open("shift.txt");
    for (int n = 0; n <= e.tower.last(); ++n) shift << n << ' ' << e.shift(n) << "\n";
    open("level.txt") << e.k << ' ' << e.m << ' ' << e.base_last << ' ' << e.universal_stage << "\n";
    auto log = open("demands.txt");
    for (const auto& d : e.log)
        log << d.kind << " | " << d.demand << " | " << d.witness << " | +" << d.added
            << (d.collapsing ? " | collapsing" : "") << "\n";
}

}  // namespace fraisse
