#include <doctest.h>

#include <map>

#include "fraisse/error.hpp"
#include "fraisse/io.hpp"
#include "fraisse/rational.hpp"
#include "fraisse/search.hpp"
#include "support.hpp"

using namespace fraisse;
using support::all_maps;
using support::bf_morphisms;

namespace {

std::vector<std::vector<Elem>> maps_of(const std::vector<Morphism>& ms) {
    std::vector<std::vector<Elem>> out;
    for (const auto& m : ms) out.push_back(m.map);
    return out;
}

Structure cycle(int n) {
    std::vector<std::pair<Elem, Elem>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return support::graph(n, e);
}

/// Every labeled binary relation on n points.
std::vector<Structure> labeled_digraphs(int n) {
    std::vector<Structure> out;
    auto cells = n * n;
    for (int mask = 0; mask < (1 << cells); ++mask) {
        Structure s(support::binary("R"), n);
        for (int c = 0; c < cells; ++c)
            if (mask >> c & 1) s.add(0, {c / n, c % n});
        out.push_back(std::move(s));
    }
    return out;
}

std::string oracle_class(const Structure& s) {
    int n = s.size();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string code;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Elem> t{perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]};
                code += s.holds(0, t) ? '1' : '0';
            }
        if (best.empty() || code < best) best = code;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::to_string(n) + ":" + best;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("singleton to singleton has exactly one hom") {
    Structure a(support::binary("E"), 1);
    CHECK(find_morphisms(a, a, MorphismKind::hom).size() == 1);
}

TEST_CASE("strict 2-chain embeds into strict 3-chain three ways") {
    auto a = support::chain(2, true);
    auto b = support::chain(3, true);
    auto found = maps_of(find_morphisms(a, b, MorphismKind::embedding));
    CHECK(found == bf_morphisms(a, b, MorphismKind::embedding));
    CHECK(found.size() == 3);
}

TEST_CASE("K3 has no hom into C5") {
    auto k3 = support::graph(3, {{0, 1}, {1, 2}, {0, 2}});
    auto c5 = cycle(5);
    CHECK(all_maps(3, 5).size() == 125);
    CHECK(bf_morphisms(k3, c5, MorphismKind::hom).empty());
    CHECK(find_morphisms(k3, c5, MorphismKind::hom).empty());
}

TEST_CASE("limit truncates in lexicographic order") {
    auto a = support::graph(2, {{0, 1}});
    auto c5 = cycle(5);
    auto all = find_morphisms(a, c5, MorphismKind::hom);
    auto two = find_morphisms(a, c5, MorphismKind::hom, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == all[0]);
    CHECK(two[1] == all[1]);
    CHECK(std::is_sorted(all.begin(), all.end(), [](const Morphism& x, const Morphism& y) { return x.map < y.map; }));
}

TEST_CASE("signature mismatch is an error") {
    auto g = support::graph(2, {{0, 1}});
    auto p = support::chain(2, false);
    try {
        (void)find_morphisms(g, p, MorphismKind::hom);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "signature-mismatch");
    }
}

TEST_CASE("extend_partial: total valid map returns itself") {
    auto c = support::chain(3, false);
    auto out = extend_partial(c, c, {{0, 1, 2}, MorphismKind::hom});
    REQUIRE(out.size() == 1);
    CHECK(out[0].map == std::vector<Elem>{0, 1, 2});
}

TEST_CASE("extend_partial: empty map on 2-chains as iso has one extension") {
    auto c = support::chain(2, true);
    auto out = extend_partial(c, c, {{kUnassigned, kUnassigned}, MorphismKind::iso});
    REQUIRE(out.size() == 1);
    CHECK(out[0].map == std::vector<Elem>{0, 1});
}

TEST_CASE("extend_partial: K3 vertex into C5 has no hom extension") {
    auto k3 = support::graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(extend_partial(k3, cycle(5), {{0, kUnassigned, kUnassigned}, MorphismKind::hom}).empty());
}

TEST_CASE("extend_partial: inconsistent partial map yields nothing") {
    auto g = support::graph(2, {});
    CHECK(extend_partial(g, g, {{0, 0}, MorphismKind::embedding}).empty());
}

TEST_CASE("is_isomorphic: path vs star and chain vs antichain") {
    auto p3 = support::graph(3, {{0, 1}, {1, 2}});
    auto star = support::graph(3, {{0, 1}, {0, 2}});
    auto iso = is_isomorphic(p3, star);
    REQUIRE(iso);
    CHECK(support::bf_is(p3, star, iso->map, MorphismKind::iso));
    CHECK(is_isomorphic(star, p3).has_value());
    CHECK(is_isomorphic(p3, p3).has_value());
    CHECK_FALSE(is_isomorphic(support::chain(3, false), support::poset(3, {})).has_value());
}

TEST_CASE("canonical form: relabeled 4-element posets agree") {
    auto a = support::poset(4, {{0, 1}, {0, 2}, {2, 3}});
    std::vector<Elem> relabel{2, 0, 3, 1};
    Structure b(a.signature(), 4);
    for (const auto& t : a.tuples(0)) b.add(0, compose(relabel, t));
    auto ca = canonical_form(a);
    auto cb = canonical_form(b);
    CHECK(ca.form == cb.form);
    CHECK(is_morphism(a, ca.form, ca.relabeling.map, MorphismKind::iso));
    CHECK(canonical_form(ca.form).form == ca.form);
}

TEST_CASE("canonical form: edge orientation does not matter") {
    Structure x(support::binary("E"), 2);
    x.add(0, {0, 1});
    x.add(0, {1, 0});
    Structure y(support::binary("E"), 2);
    y.add(0, {1, 0});
    y.add(0, {0, 1});
    CHECK(canonical_form(x).form == canonical_form(y).form);
}

TEST_CASE("canonical form separates exactly the isomorphism classes of digraphs up to size 3") {
    for (int n = 0; n <= 3; ++n) {
        std::map<std::string, std::vector<int>> oracle_to_canon;
        std::map<std::vector<int>, std::string> canon_to_oracle;
        for (const auto& s : labeled_digraphs(n)) {
            auto cf = canonical_form(s);
            CHECK(is_morphism(s, cf.form, cf.relabeling.map, MorphismKind::iso));
            CHECK(canonical_form(cf.form).form == cf.form);
            auto enc = cf.form.encoding();
            auto cls = oracle_class(s);
            auto [it, fresh] = oracle_to_canon.try_emplace(cls, enc);
            CHECK(it->second == enc);
            auto [jt, fresh2] = canon_to_oracle.try_emplace(enc, cls);
            CHECK(jt->second == cls);
        }
        if (n == 3) CHECK(oracle_to_canon.size() == 104);  // digraphs with loops on 3 points
    }
}

TEST_CASE("morphism search agrees with brute force on graphs and posets up to size 4") {
    for (const char* name : {"graphs", "posets"}) {
        auto age = support::age(name);
        auto members = enumerate_up_to(age, 4);
        for (const auto& a : members)
            for (const auto& b : members) {
                if (a.size() + b.size() > 7) continue;
                auto homs = maps_of(find_morphisms(a, b, MorphismKind::hom));
                auto embs = maps_of(find_morphisms(a, b, MorphismKind::embedding));
                CHECK(homs == bf_morphisms(a, b, MorphismKind::hom));
                CHECK(embs == bf_morphisms(a, b, MorphismKind::embedding));
                CHECK(std::includes(homs.begin(), homs.end(), embs.begin(), embs.end()));
            }
    }
}

TEST_CASE("composites of homs are homs") {
    auto age = support::age("posets");
    auto members = enumerate_up_to(age, 3);
    for (const auto& a : members)
        for (const auto& b : members)
            for (const auto& c : members)
                for (const auto& f : find_morphisms(a, b, MorphismKind::hom))
                    for (const auto& g : find_morphisms(b, c, MorphismKind::hom))
                        CHECK(is_morphism(a, c, compose(g.map, f.map), MorphismKind::hom));
}

TEST_CASE("search is deterministic") {
    auto a = support::graph(3, {{0, 1}});
    auto b = cycle(5);
    CHECK(find_morphisms(a, b, MorphismKind::hom) == find_morphisms(a, b, MorphismKind::hom));
}

TEST_CASE("structure basics") {
    Structure s(support::binary("E"), 3);
    s.add(0, {0, 1});
    s.add(0, {0, 1});
    CHECK(s.tuple_count() == 1);
    CHECK(s.holds(0, std::vector<Elem>{0, 1}));
    s.remove(0, {0, 1});
    CHECK_FALSE(s.holds(0, std::vector<Elem>{0, 1}));
    CHECK_THROWS(s.add(0, {0, 3}));
    CHECK_THROWS(s.add(0, {0}));
    CHECK_THROWS(Signature({{"E", 2}, {"E", 1}}));
    CHECK_THROWS(Signature({{"E", 0}}));
    auto p = support::chain(3, true).induced(std::vector<Elem>{0, 2});
    CHECK(p == support::chain(2, true));
    CHECK(support::chain(2, true).with_extra(1).size() == 3);
}

TEST_CASE("structure file round trip and comments") {
    auto s = support::poset(3, {{0, 1}});
    auto text = format_structure(s);
    CHECK(parse_structure(text) == s);
    auto t = parse_structure("# a comment\nsignature E:2\nsize 2\nrel E 0 1 # trailing\nrel E 1 0\n");
    CHECK(t == support::graph(2, {{0, 1}}));
    CHECK_THROWS_AS((void)parse_structure("signature E:2\nsize 2\nrel E 0 5\n"), Error);
    CHECK_THROWS_AS((void)parse_structure("signature E:2\nsize 2\nrel F 0 1\n"), Error);
}

TEST_CASE("map lists") {
    auto maps = parse_map_list("0 1 2\n# skip\n2 2 2\n");
    REQUIRE(maps.size() == 2);
    CHECK(maps[1] == std::vector<Elem>{2, 2, 2});
    CHECK(parse_map_list(format_map_list(maps)) == maps);
}

TEST_CASE("rationals are exact") {
    Rational half(1, 2);
    CHECK(half + half == Rational(1));
    CHECK(Rational(2, 4) == half);
    CHECK(Rational(1, 3) < half);
    CHECK(Rational::parse("3/6") == half);
    CHECK(Rational::parse("2") == Rational(2));
    CHECK(half.str() == "1/2");
    CHECK_THROWS(Rational::parse("x"));
}

}  // TEST_SUITE
