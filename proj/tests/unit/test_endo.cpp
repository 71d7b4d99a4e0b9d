#include <doctest.h>

#include <set>

#include "fraisse/endo.hpp"
#include "fraisse/error.hpp"
#include "fraisse/search.hpp"
#include "support.hpp"

using namespace fraisse;
using support::age;

namespace {

const EndoApprox& nonstrict_22() {
    static const EndoApprox e = build_universal_endo(build_tower(age("nonstrict-linear"), 2, 3), 2, 2);
    return e;
}

/// Factorization postconditions, checked straight from the definitions.
void check_factors(const EndoApprox& e, const Structure& a, const Morphism& iota, const Morphism& h) {
    CHECK(support::bf_is(a, e.universe(), iota.map, MorphismKind::embedding));
    CHECK(compose(e.u, iota.map) == h.map);
}

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_SUITE("endo") {

TEST_CASE("strict linear orders: u is the identity") {
    auto t = build_tower(age("strict-linear"), 2, 3);
    auto e = build_universal_endo(t, 2, 2);
    CHECK_FALSE(verify_endo(e));
    CHECK(e.u == identity_map(e.universe().size()));
    auto samples = gate_samples(e, 2, 2);
    REQUIRE_FALSE(samples.empty());
    auto report = verify_gate(e, samples);
    CHECK(report.ok());
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(report.entries[i].iota.map == samples[i].h.map);
}

TEST_CASE("non-strict linear orders: u collapses a pair") {
    const auto& e = nonstrict_22();
    CHECK_FALSE(verify_endo(e));
    CHECK(support::bf_is(e.universe(), e.universe(), e.u, MorphismKind::hom));
    CHECK(std::set<Elem>(e.u.begin(), e.u.end()).size() < e.u.size());
    CHECK(std::any_of(e.log.begin(), e.log.end(), [](const EndoDemand& d) { return d.collapsing; }));
    for (int n = 0; n <= e.tower.last(); ++n) {
        auto un = e.stage_map(n);
        CHECK(un.map.size() == static_cast<std::size_t>(e.tower.stages[static_cast<std::size_t>(n)].size()));
        for (Elem v : un.map) CHECK(v < e.tower.stages[static_cast<std::size_t>(e.shift(n))].size());
        if (n > 0) CHECK(e.shift(n) >= e.shift(n - 1));
    }
}

TEST_CASE("triangle-free graphs: the construction gets stuck on HAP") {
    auto t = build_tower(age("triangle-free"), 2, 3);
    try {
        (void)build_universal_endo(t, 2, 2);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == "hap-failure");
        CHECK(std::string(err.what()).find("K3") != std::string::npos);
    }
}

TEST_CASE("level must lie within the tower") {
    auto t = build_tower(age("strict-linear"), 2, 1);
    CHECK(error_code([&] { (void)build_universal_endo(t, 2, t.last() + 1); }) == "insufficient-certificates");
}

TEST_CASE("factor_through examples") {
    const auto& e = nonstrict_22();
    const auto& um = e.tower.stages[static_cast<std::size_t>(e.m)];
    REQUIRE(um.size() >= 2);

    auto two = support::chain(2, false);
    Morphism constant{{0, 0}, MorphismKind::hom};
    auto f = factor_through(e, two, constant);
    check_factors(e, two, f.iota, constant);
    CHECK(f.iota(0) != f.iota(1));

    auto one = support::chain(1, false);
    for (Elem x = 0; x < um.size(); ++x) {
        Morphism h{{x}, MorphismKind::hom};
        check_factors(e, one, factor_through(e, one, h).iota, h);
    }

    CHECK(error_code([&] { (void)factor_through(e, support::chain(3, false), Morphism{{0, 0, 0}, MorphismKind::hom}); })
          == "outside-certified-level");
    Elem outside = um.size();
    if (outside < e.universe().size())
        CHECK(error_code([&] { (void)factor_through(e, one, Morphism{{outside}, MorphismKind::hom}); })
              == "outside-certified-level");
}

TEST_CASE("factor_through with identity u returns h") {
    auto e = build_universal_endo(build_tower(age("strict-linear"), 2, 2), 2, 1);
    auto two = support::chain(2, true);
    const auto& um = e.tower.stages[static_cast<std::size_t>(e.m)];
    for (const auto& h : find_morphisms(two, um, MorphismKind::hom)) CHECK(factor_through(e, two, h).iota.map == h.map);
}

TEST_CASE("factor_agreeing: conclusions on every applicable triple") {
    const auto& e = nonstrict_22();
    const auto& um = e.tower.stages[static_cast<std::size_t>(e.m)];
    int triples = 0;
    for (const auto& a : enumerate_up_to(e.tower.age, 2)) {
        auto homs = find_morphisms(a, um, MorphismKind::hom);
        for (const auto& f : homs)
            for (const auto& g : homs)
                for (int mask = 0; mask < (1 << a.size()); ++mask) {
                    std::vector<Elem> common;
                    bool agree = true;
                    for (Elem x = 0; x < a.size(); ++x)
                        if (mask >> x & 1) {
                            common.push_back(x);
                            agree = agree && f(x) == g(x);
                        }
                    if (!agree) continue;
                    auto [i1, i2] = factor_agreeing(e, a, f, g, common);
                    check_factors(e, a, i1, f);
                    check_factors(e, a, i2, g);
                    for (Elem c : common) CHECK(i1(c) == i2(c));
                    if (f == g) CHECK(i1 == i2);
                    ++triples;
                }
    }
    CHECK(triples > 0);
}

TEST_CASE("factor_sequence: constant, eventually constant, alternating") {
    const auto& e = nonstrict_22();
    auto two = support::chain(2, false);
    Morphism f{{0, 1}, MorphismKind::hom};
    Morphism g{{0, 0}, MorphismKind::hom};
    Morphism h{{1, 1}, MorphismKind::hom};

    auto c = factor_sequence(e, two, {f, f, f});
    for (const auto& iota : c.iotas) CHECK(iota == c.limit);
    CHECK(c.thresholds == std::vector<int>{0, 0});
    check_factors(e, two, c.limit, f);

    auto ev = factor_sequence(e, two, {h, g, f, f, f});
    CHECK(ev.thresholds == std::vector<int>{1, 2});
    for (std::size_t j = 0; j < ev.iotas.size(); ++j) {
        check_factors(e, two, ev.iotas[j], std::vector<Morphism>{h, g, f, f, f}[j]);
        if (j >= 2) CHECK(ev.iotas[j] == ev.limit);
        if (j >= 1) CHECK(ev.iotas[j](0) == ev.limit(0));
    }

    CHECK(error_code([&] { (void)factor_sequence(e, two, {f, g, f, g, f, g}); }) == "not-convergent");
    CHECK(error_code([&] { (void)factor_sequence(e, two, {}); }) == "not-convergent");
}

TEST_CASE("verify_gate: empty list, u itself, all homs at stage 1") {
    const auto& e = nonstrict_22();
    auto empty = verify_gate(e, {});
    CHECK(empty.ok());
    CHECK(empty.entries.empty());

    const auto& u1 = e.tower.stages[1];
    auto self = verify_gate(e, {{u1, e.stage_map(1)}});
    if (u1.size() <= e.k && e.shift(1) <= e.m) {
        CHECK(self.ok());
        CHECK(self.entries[0].iota.map == identity_map(u1.size()));
    }

    auto report = verify_gate(e, gate_samples(e, 2, 1));
    CHECK(report.ok());
    for (const auto& entry : report.entries) CHECK(entry.message.empty());
}

TEST_CASE("verify_gate reports a sample that cannot factor") {
    const auto& e = nonstrict_22();
    auto report = verify_gate(e, {{support::chain(3, false), Morphism{{0, 0, 0}, MorphismKind::hom}}});
    CHECK(report.failures == 1);
    CHECK_FALSE(report.entries[0].message.empty());
}

}  // TEST_SUITE
