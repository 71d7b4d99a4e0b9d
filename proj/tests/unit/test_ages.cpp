#include <doctest.h>

#include <filesystem>

#include "fraisse/amalgamation.hpp"
#include "fraisse/error.hpp"
#include "fraisse/search.hpp"
#include "support.hpp"

using namespace fraisse;
namespace pred = support::pred;

#ifndef FRAISSE_CATALOG_SOURCE_DIR
#error "FRAISSE_CATALOG_SOURCE_DIR must point at catalog/"
#endif

namespace {

const std::vector<Rational> kD12{Rational(1), Rational(2)};

/// Every metric space on n points with distances in {1, 2}, by brute force.
std::vector<MetricSpaceDesc> all_metric_spaces(int n) {
    std::vector<MetricSpaceDesc> out;
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
    for (int mask = 0; mask < (1 << pairs.size()); ++mask) {
        MetricSpaceDesc m{n, std::vector<std::vector<Rational>>(static_cast<std::size_t>(n),
                                                                 std::vector<Rational>(static_cast<std::size_t>(n))),
                          kD12};
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            Rational d = (mask >> p & 1) ? Rational(2) : Rational(1);
            m.dist[static_cast<std::size_t>(pairs[p].first)][static_cast<std::size_t>(pairs[p].second)] = d;
            m.dist[static_cast<std::size_t>(pairs[p].second)][static_cast<std::size_t>(pairs[p].first)] = d;
        }
        bool ok = true;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    ok = ok && m.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)] <=
                                   m.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] +
                                       m.dist[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)];
        if (ok) out.push_back(std::move(m));
    }
    return out;
}

bool non_expansive(const MetricSpaceDesc& a, const MetricSpaceDesc& b, const std::vector<Elem>& f) {
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            if (b.dist[static_cast<std::size_t>(f[static_cast<std::size_t>(x)])][static_cast<std::size_t>(f[static_cast<std::size_t>(y)])] >
                a.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)])
                return false;
    return true;
}

}  // namespace

TEST_SUITE("ages") {

TEST_CASE("member: chain is a poset, 2-cycle is not, K3 is not triangle-free") {
    auto posets = support::age("posets");
    CHECK(member(posets, support::chain(3, false)));
    auto cyc = support::relation("le", 2, {{0, 0}, {1, 1}, {0, 1}, {1, 0}});
    auto v = member(posets, cyc);
    CHECK_FALSE(v);
    CHECK(v.violation.find("antisymmetric") != std::string::npos);
    auto tf = support::age("triangle-free");
    auto k3 = support::graph(3, {{0, 1}, {1, 2}, {0, 2}});
    auto w = member(tf, k3);
    CHECK_FALSE(w);
    CHECK(w.violation == "forbidden K3 embeds");
    CHECK(member(support::age("graphs"), k3));
    CHECK_THROWS_AS((void)member(posets, k3), Error);
}

TEST_CASE("enumeration counts match the labeled-orbit oracle") {
    struct Row {
        const char* age;
        bool (*keep)(const support::Matrix&);
    };
    const Row rows[] = {{"graphs", pred::graph},
                        {"posets", pred::poset},
                        {"strict-posets", pred::strict_poset},
                        {"nonstrict-linear", pred::linear},
                        {"tournaments", pred::tournament}};
    for (const auto& row : rows)
        for (int n = 0; n <= 4; ++n) {
            CAPTURE(row.age);
            CAPTURE(n);
            CHECK(enumerate(support::age(row.age), n).size() == support::orbit_count(n, row.keep));
        }
    CHECK(enumerate(support::age("graphs"), 3).size() == 4);
    CHECK(enumerate(support::age("graphs"), 4).size() == 11);
    CHECK(enumerate(support::age("posets"), 3).size() == 5);
    CHECK(enumerate(support::age("posets"), 4).size() == 16);
    CHECK(enumerate(support::age("tournaments"), 3).size() == 2);
    CHECK(enumerate(support::age("tournaments"), 4).size() == 4);
    for (int n = 0; n <= 6; ++n) {
        CHECK(enumerate(support::age("nonstrict-linear"), n).size() == 1);
        CHECK(enumerate(support::age("strict-linear"), n).size() == 1);
    }
}

TEST_CASE("triangle-free counts match the oracle") {
    auto keep = [](const support::Matrix& m) {
        if (!pred::graph(m)) return false;
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = a + 1; b < m.size(); ++b)
                for (std::size_t c = b + 1; c < m.size(); ++c)
                    if (m[a][b] && m[b][c] && m[a][c]) return false;
        return true;
    };
    for (int n = 0; n <= 4; ++n) CHECK(enumerate(support::age("triangle-free"), n).size() == support::orbit_count(n, keep));
}

TEST_CASE("metric enumeration matches brute force up to isomorphism") {
    auto age = support::age("metric");
    for (int n = 0; n <= 3; ++n) {
        std::vector<Structure> reps;
        for (const auto& m : all_metric_spaces(n)) {
            auto s = encode_metric(m);
            if (std::none_of(reps.begin(), reps.end(), [&](const Structure& r) { return is_isomorphic(r, s).has_value(); }))
                reps.push_back(s);
        }
        CHECK(enumerate(age, n).size() == reps.size());
    }
}

TEST_CASE("enumerated members are members, pairwise non-isomorphic, sorted, hereditary") {
    for (const auto& age : builtin_ages()) {
        int top = age.is_metric() ? 3 : 4;
        for (int n = 0; n <= top; ++n) {
            auto list = enumerate(age, n);
            for (std::size_t i = 0; i < list.size(); ++i) {
                CHECK(member(age, list[i]));
                CHECK(list[i].size() == n);
                if (i > 0) CHECK(list[i - 1].encoding() < list[i].encoding());
                for (std::size_t j = i + 1; j < list.size(); ++j) CHECK_FALSE(is_isomorphic(list[i], list[j]));
                for (int mask = 0; mask < (1 << n); ++mask) {
                    std::vector<Elem> sub;
                    for (int x = 0; x < n; ++x)
                        if (mask >> x & 1) sub.push_back(x);
                    CHECK(member(age, list[i].induced(sub)));
                }
            }
            CHECK(enumerate(age, n) == list);
        }
    }
}

TEST_CASE("free sum examples") {
    auto graphs = support::age("graphs");
    Structure empty(graphs.sig, 0);
    Structure point(graphs.sig, 1);
    auto fs = free_sum(empty, point, point, {{}, MorphismKind::embedding}, {{}, MorphismKind::embedding});
    CHECK(fs.sum == Structure(graphs.sig, 2));

    auto edge = support::graph(2, {{0, 1}});
    auto p = free_sum(point, edge, edge, {{0}, MorphismKind::embedding}, {{0}, MorphismKind::embedding});
    CHECK(p.sum.size() == 3);
    CHECK(p.sum.tuple_count() == 4);
    CHECK(is_isomorphic(p.sum, support::graph(3, {{0, 1}, {0, 2}})).has_value());

    auto posets = support::age("posets");
    auto a = support::poset(1, {});
    auto ab = support::poset(2, {{0, 1}});
    auto q = free_sum(a, ab, ab, {{0}, MorphismKind::embedding}, {{0}, MorphismKind::embedding});
    CHECK(member(posets, q.sum));
    CHECK_FALSE(q.sum.holds(0, std::vector<Elem>{1, 2}));
    CHECK_FALSE(q.sum.holds(0, std::vector<Elem>{2, 1}));
    CHECK(q.sum.holds(0, std::vector<Elem>{0, 2}));

    CHECK_THROWS_AS((void)free_sum(edge, point, point, {{0, 0}, MorphismKind::embedding}, {{0, 0}, MorphismKind::embedding}),
                    Error);
}

TEST_CASE("free sums commute and give embeddings over graphs of size <= 3") {
    auto graphs = support::age("graphs");
    auto members = enumerate_up_to(graphs, 3);
    for (const auto& a : members)
        for (const auto& b1 : members)
            for (const auto& b2 : members) {
                if (a.size() > b1.size() || a.size() > b2.size()) continue;
                for (const auto& f1 : find_morphisms(a, b1, MorphismKind::embedding))
                    for (const auto& f2 : find_morphisms(a, b2, MorphismKind::embedding)) {
                        auto fs = free_sum(a, b1, b2, f1, f2);
                        CHECK(fs.sum.size() == b1.size() + b2.size() - a.size());
                        CHECK(compose(fs.g1.map, f1.map) == compose(fs.g2.map, f2.map));
                        CHECK(support::bf_is(b1, fs.sum, fs.g1.map, MorphismKind::embedding));
                        CHECK(support::bf_is(b2, fs.sum, fs.g2.map, MorphismKind::embedding));
                    }
            }
}

TEST_CASE("completion examples") {
    auto posets = support::age("posets");
    auto s = support::relation("le", 3, {{0, 1}, {1, 2}});
    auto c = complete(posets, s);
    REQUIRE(c);
    CHECK(c.completed->holds(0, std::vector<Elem>{0, 2}));
    CHECK(*c.completed == support::chain(3, false));

    auto bad = complete(posets, support::relation("le", 2, {{0, 1}, {1, 0}}));
    CHECK_FALSE(bad);
    CHECK(bad.reason.find("antisymmetric") != std::string::npos);

    auto metric = support::age("metric");
    Structure m(metric.sig, 3);
    for (Elem x = 0; x < 3; ++x)
        for (std::size_t sym = 0; sym < 3; ++sym) m.add(sym, {x, x});
    for (auto [x, y] : std::vector<std::pair<Elem, Elem>>{{0, 1}, {1, 0}, {1, 2}, {2, 1}}) {
        m.add(1, {x, y});
        m.add(2, {x, y});
    }
    auto mc = complete(metric, m);
    REQUIRE(mc);
    CHECK(encoded_distance(metric, *mc.completed, 0, 2) == Rational(2));
    CHECK(encoded_distance(metric, *mc.completed, 0, 1) == Rational(1));
}

TEST_CASE("metric encoding examples") {
    MetricSpaceDesc one{1, {{Rational(0)}}, kD12};
    auto s1 = encode_metric(one);
    for (std::size_t sym = 0; sym < 3; ++sym) CHECK(s1.holds(sym, std::vector<Elem>{0, 0}));

    MetricSpaceDesc two{2, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}, kD12};
    auto s2 = encode_metric(two);
    CHECK_FALSE(s2.holds(0, std::vector<Elem>{0, 1}));
    CHECK(s2.holds(1, std::vector<Elem>{0, 1}));
    CHECK(s2.holds(2, std::vector<Elem>{0, 1}));

    MetricSpaceDesc far{2, {{Rational(0), Rational(2)}, {Rational(2), Rational(0)}}, kD12};
    auto homs = find_morphisms(encode_metric(far), s2, MorphismKind::hom);
    CHECK(homs.size() == 4);
}

TEST_CASE("metric round trip and non-expansive maps are homs") {
    auto age = support::age("metric");
    std::vector<MetricSpaceDesc> spaces;
    for (int n = 0; n <= 3; ++n)
        for (auto& m : all_metric_spaces(n)) spaces.push_back(std::move(m));
    for (const auto& m : spaces) {
        auto s = encode_metric(m);
        CHECK(member(age, s));
        CHECK(decode_metric(s, kD12) == m);
    }
    for (const auto& a : spaces)
        for (const auto& b : spaces) {
            if (a.size > 2 && b.size > 2) continue;
            auto sa = encode_metric(a);
            auto sb = encode_metric(b);
            for (const auto& f : support::all_maps(a.size, b.size))
                CHECK(non_expansive(a, b, f) == is_morphism(sa, sb, f, MorphismKind::hom));
        }
}

TEST_CASE("decode rejects broken down-closure") {
    auto age = support::age("metric");
    Structure s(age.sig, 2);
    for (Elem x = 0; x < 2; ++x)
        for (std::size_t sym = 0; sym < 3; ++sym) s.add(sym, {x, x});
    s.add(1, {0, 1});
    s.add(1, {1, 0});  // distance <= 1 but not <= 2
    try {
        (void)decode_metric(s, kD12);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "not-a-metric-encoding");
    }
}

TEST_CASE("one-point extensions restrict to their base") {
    for (const auto& age : builtin_ages())
        for (const auto& base : enumerate_up_to(age, 2)) {
            auto exts = one_point_extensions(age, base);
            CHECK_FALSE(exts.empty());
            for (const auto& e : exts) {
                CHECK(member(age, e));
                CHECK(e.induced(identity_map(base.size())) == base);
            }
        }
}

TEST_CASE("extension generator matches brute force on graphs and posets") {
    auto graphs = support::age("graphs");
    std::size_t count = 0;
    for_each_age_extension(graphs, support::graph(2, {{0, 1}}), {2, {}, {}}, [&](const Structure& s) {
        CHECK(member(graphs, s));
        ++count;
        return true;
    });
    CHECK(count == 32);

    auto posets = support::age("posets");
    auto base = support::chain(2, false);
    std::size_t expected = 0;
    for (int mask = 0; mask < (1 << 9); ++mask) {
        support::Matrix m(3, std::vector<bool>(3));
        for (int c = 0; c < 9; ++c) m[static_cast<std::size_t>(c / 3)][static_cast<std::size_t>(c % 3)] = mask >> c & 1;
        if (pred::poset(m) && m[0][1] && !m[1][0]) ++expected;
    }
    std::size_t got = 0;
    for_each_age_extension(posets, base, {1, {}, {}}, [&](const Structure&) {
        ++got;
        return true;
    });
    CHECK(got == expected);
}

TEST_CASE("catalog files describe the built-in ages") {
    namespace fs = std::filesystem;
    fs::path dir = FRAISSE_CATALOG_SOURCE_DIR;
    for (const auto& age : builtin_ages()) {
        CAPTURE(age.name);
        auto file = read_age_spec_file(dir / (age.name + ".age"));
        CHECK(describe_age_spec(file) == describe_age_spec(age));
        CHECK(age_spec_hash(file) == age_spec_hash(age));
    }
    auto sphere = read_age_spec_file(dir / "metric-sphere.age");
    CHECK(sphere.is_metric());
    CHECK(sphere.distances == std::vector<Rational>{Rational(1, 2), Rational(1)});
}

TEST_CASE("age spec parse errors") {
    CHECK_THROWS_AS((void)parse_age_spec("signature E:2\n"), Error);
    CHECK_THROWS_AS((void)parse_age_spec("age x\nsignature E:2\naxiom bogus E\n"), Error);
    CHECK_THROWS_AS((void)parse_age_spec("age x\nsignature E:2\naxiom symmetric F\n"), Error);
    CHECK_THROWS_AS((void)parse_age_spec("age x\nsignature E:2\ncompletion magic\n"), Error);
    auto a = parse_age_spec("age x\nsignature E:2\naxiom symmetric E\n");
    CHECK(a.has_axiom(AxiomTag::symmetric, 0));
    CHECK(builtin_age("linear")->name == "nonstrict-linear");
    CHECK_FALSE(builtin_age("nope"));
}

}  // TEST_SUITE
