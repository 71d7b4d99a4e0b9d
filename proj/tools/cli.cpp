#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "catalog_matrix.hpp"
#include "fraisse/amalgamation.hpp"
#include "fraisse/endo.hpp"
#include "fraisse/error.hpp"
#include "fraisse/io.hpp"
#include "fraisse/topology.hpp"
#include "fraisse/tower.hpp"

namespace fraisse::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AgeSpec require_age(const std::string& name) {
    auto age = resolve_age(name);
    if (!age) throw UsageError("unknown age '" + name + "'");
    return *age;
}

/// Writes to `path` when given, otherwise to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("io-error", "cannot write " + path);
    f << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct Globals {
    unsigned workers = 1;
    std::string format = "text";
};

// --- check ---------------------------------------------------------------------

struct CheckArgs {
    std::string age;
    std::string property;
    int size = 3;
    int search_bound = -1;
    int pushout_size = -1;
    std::string out;
};

int cmd_check(const CheckArgs& a, const Globals& g, std::ostream& out) {
    auto prop = parse_property(a.property);
    if (!prop) throw UsageError("unknown property '" + a.property + "'");
    auto age = require_age(a.age);
    CheckOptions opts;
    opts.size_bound = a.size;
    opts.search_bound = a.search_bound;
    opts.pushout_test_size = a.pushout_size;
    opts.workers = g.workers;
    opts.keep_records = g.format == "records";
    auto report = check_property(*prop, age, opts);
    emit(g.format == "records" ? format_records(report) : format_text(report), a.out, out);
    switch (report.verdict) {
        case Verdict::certified: return kExitOk;
        case Verdict::refuted: return kExitFailure;
        case Verdict::unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

// --- catalog -------------------------------------------------------------------

struct CatalogArgs {
    int size = 3;
    std::string ages;
    std::string properties;
    std::string out;
};

int cmd_catalog(const CatalogArgs& a, const Globals& g, std::ostream& out) {
    std::vector<std::pair<CatalogEntry, AgeSpec>> ages;
    std::set<std::string> wanted;
    for (const auto& n : split_list(a.ages)) wanted.insert(n);
    for (const auto& e : catalog_entries())
        if (wanted.empty() || wanted.count(e.age)) ages.emplace_back(e, require_age(e.age));
    for (const auto& n : wanted)
        if (std::none_of(ages.begin(), ages.end(), [&](const auto& p) { return p.first.age == n; }))
            throw UsageError("age '" + n + "' is not in the catalog");
    std::vector<Property> props;
    for (const auto& n : split_list(a.properties)) {
        auto p = parse_property(n);
        if (!p) throw UsageError("unknown property '" + n + "'");
        props.push_back(*p);
    }
    if (props.empty()) props = all_properties();
    CheckOptions opts;
    opts.size_bound = a.size;
    opts.workers = g.workers;
    auto result = run_catalog(ages, props, opts);
    emit(g.format == "records" ? format_catalog_records(result) : format_catalog_text(result, props), a.out, out);
    return result.mismatches == 0 ? kExitOk : kExitFailure;
}

// --- build-endo ----------------------------------------------------------------

struct EndoArgs {
    std::string age;
    int k = 2;
    int m = 2;
    int rounds = -1;
    std::string out;
};

std::size_t collapsed_pairs(const EndoApprox& e) {
    std::size_t n = 0;
    for (std::size_t x = 0; x < e.u.size(); ++x)
        for (std::size_t y = x + 1; y < e.u.size(); ++y)
            if (e.u[x] == e.u[y]) ++n;
    return n;
}

int cmd_build_endo(const EndoArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    auto age = require_age(a.age);
    if (a.k < 0 || a.m < 0) throw UsageError("--k and --m must be non-negative");
    int rounds = a.rounds >= 0 ? a.rounds : a.m + 1;
    auto tower = build_tower(age, a.k, rounds);
    EndoApprox e;
    try {
        e = build_universal_endo(tower, a.k, a.m);
    } catch (const Error& ex) {
        if (ex.code() != "hap-failure" && ex.code() != "aep-failure") throw;
        err << "stuck demand: " << ex.what() << "\n";
        if (!a.out.empty()) {
            dump_tower(tower, a.out);
            std::ofstream(fs::path(a.out) / "failure.txt") << ex.what() << "\n";
        }
        return kExitFailure;
    }
    auto problem = verify_endo(e);
    auto gate = verify_gate(e, gate_samples(e, a.k, a.m));
    if (!a.out.empty()) dump_endo(e, a.out);

    std::size_t collapsing = 0;
    std::size_t added = 0;
    std::map<std::string, std::size_t> kinds;
    for (const auto& d : e.log) {
        ++kinds[d.kind];
        collapsing += d.collapsing ? 1 : 0;
        added += static_cast<std::size_t>(d.added);
    }
    bool identity = e.u == identity_map(static_cast<int>(e.u.size()));
    if (g.format == "records") {
        nlohmann::ordered_json j;
        j["tool-version"] = std::string(kToolVersion);
        j["age"] = age.name;
        j["age-hash"] = age_spec_hash(age);
        j["k"] = a.k;
        j["m"] = a.m;
        j["rounds"] = rounds;
        std::vector<int> sizes;
        for (const auto& s : e.tower.stages) sizes.push_back(s.size());
        j["stage-sizes"] = sizes;
        j["u"] = e.u;
        j["identity"] = identity;
        j["collapsed-pairs"] = collapsed_pairs(e);
        j["demands"] = e.log.size();
        j["collapsing-demands"] = collapsing;
        j["points-added"] = added;
        j["verify"] = problem ? *problem : std::string("ok");
        j["gate-samples"] = gate.entries.size();
        j["gate-failures"] = gate.failures;
        out << j.dump() << "\n";
    } else {
        out << kToolVersion << "\nbuild-endo age " << age.name << " (" << age_spec_hash(age) << ") k " << a.k
            << " m " << a.m << " rounds " << rounds << "\nstages";
        for (const auto& s : e.tower.stages) out << ' ' << s.size();
        out << "\nu " << (identity ? "identity" : "non-identity") << ", collapsed pairs "
            << collapsed_pairs(e) << "\ndemands " << e.log.size();
        for (const auto& [k, n] : kinds) out << "  " << k << " " << n;
        out << "\ncollapsing demands " << collapsing << "\npoints added " << added << "\nverify "
            << (problem ? *problem : std::string("ok")) << "\ngate " << gate.entries.size() << " samples, "
            << gate.failures << " failures\n";
        for (const auto& entry : gate.entries)
            if (!entry.ok) {
                out << "first gate failure: " << entry.message << "\n";
                break;
            }
    }
    return !problem && gate.ok() ? kExitOk : kExitFailure;
}

// --- enumerate / build-tower ---------------------------------------------------

int cmd_enumerate(const std::string& age_name, int size, bool up_to, const Globals& g, std::ostream& out) {
    auto age = require_age(age_name);
    auto list = up_to ? enumerate_up_to(age, size) : enumerate(age, size);
    if (g.format == "records") {
        for (const auto& s : list) {
            nlohmann::ordered_json j;
            j["size"] = s.size();
            j["structure"] = compact(s);
            out << j.dump() << "\n";
        }
    } else {
        out << list.size() << " structures\n";
        for (const auto& s : list) out << compact(s) << "\n";
    }
    return kExitOk;
}

int cmd_build_tower(const std::string& age_name, int k, int rounds, const std::string& dir, std::ostream& out) {
    auto age = require_age(age_name);
    auto tower = build_tower(age, k, rounds);
    if (!dir.empty()) dump_tower(tower, dir);
    out << "stages";
    for (const auto& s : tower.stages) out << ' ' << s.size();
    out << "\n";
    bool ok = true;
    for (const auto& c : tower.certificates) {
        auto v = certify_extension(tower, c.k, c.stage);
        out << "certificate k=" << c.k << " stage=" << c.stage << " " << (v.ok ? "ok" : "MISSING") << "\n";
        ok = ok && v.ok;
    }
    return ok ? kExitOk : kExitFailure;
}

// --- laws / weak-orbits --------------------------------------------------------

std::vector<Map> load_maps(const std::string& path, int n) {
    if (!path.empty()) {
        auto maps = parse_map_list(read_text_file(path));
        if (maps.empty()) throw UsageError("map file is empty");
        return maps;
    }
    if (n < 1) throw UsageError("give --maps or a positive --n");
    return full_transformation_monoid(n);
}

int cmd_laws(const std::string& maps_path, int n, std::ostream& out) {
    auto maps = load_maps(maps_path, n);
    auto ctx = UltrametricContext::identity(static_cast<int>(maps.front().size()));
    auto r = check_metric_laws(ctx, maps);
    out << "maps " << maps.size() << "\nmetric checks " << r.metric_checks << "\nultrametric checks "
        << r.ultrametric_checks << "\nsubinvariance checks " << r.subinvariance_checks << "\nequality checks "
        << r.equality_checks << "\nviolations " << r.violations << "\n";
    if (r.first_counterexample) out << "first counterexample: " << *r.first_counterexample << "\n";
    return r.ok() ? kExitOk : kExitFailure;
}

int cmd_weak_orbits(const std::string& maps_path, const std::string& structure_path, int n, std::ostream& out) {
    std::vector<Map> monoid;
    if (!structure_path.empty()) monoid = endomorphism_monoid(read_structure_file(structure_path));
    else monoid = load_maps(maps_path, n);
    int size = static_cast<int>(monoid.front().size());
    auto p = weak_orbits(size, monoid);
    out << "monoid " << monoid.size() << " maps on " << size << " points\nweak orbits " << p.blocks.size() << "\n";
    for (const auto& b : p.blocks) out << "  {" << format_map(b) << "}\n";
    auto zeros = left_zeros(monoid);
    out << "left zeros " << zeros.size() << "\n";
    for (const auto& z : zeros) out << "  " << format_map(z) << "\n";
    return kExitOk;
}

}  // namespace

std::optional<AgeSpec> resolve_age(const std::string& name) {
    std::error_code ec;
    if (fs::is_regular_file(name, ec)) return read_age_spec_file(name);
    if (const char* dir = std::getenv(kCatalogDirEnv); dir && *dir) {
        fs::path p = fs::path(dir) / (name + ".age");
        if (fs::is_regular_file(p, ec)) return read_age_spec_file(p);
    }
    return builtin_age(name);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bounded Fraisse-theory workbench", "fraisse"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--workers", g.workers, "worker threads for property checks")->check(CLI::Range(1u, 256u));
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"text", "records"}));
    app.fallthrough();

    CheckArgs ca;
    auto* check = app.add_subcommand("check", "check one property on one age");
    check->add_option("--age", ca.age, "catalog name or .age file")->required();
    check->add_option("--property", ca.property, "HP, JEP, AP, HAP, AEP, strictAP or freeAP")->required();
    check->add_option("--size", ca.size, "size bound")->check(CLI::NonNegativeNumber);
    check->add_option("--search-bound", ca.search_bound, "largest amalgam searched");
    check->add_option("--pushout-size", ca.pushout_size, "test size for pushout checks");
    check->add_option("--out", ca.out, "report file");

    CatalogArgs cat;
    auto* catalog = app.add_subcommand("catalog", "verdict matrix against the expected catalog");
    catalog->add_option("--size", cat.size, "size bound")->check(CLI::NonNegativeNumber);
    catalog->add_option("--ages", cat.ages, "comma-separated subset of catalog ages");
    catalog->add_option("--properties", cat.properties, "comma-separated subset of properties");
    catalog->add_option("--out", cat.out, "report file");

    EndoArgs ea;
    auto* endo = app.add_subcommand("build-endo", "build and verify a universal endomorphism approximation");
    endo->add_option("--age", ea.age)->required();
    endo->add_option("--k", ea.k, "largest factored structure");
    endo->add_option("--m", ea.m, "largest certified stage");
    endo->add_option("--rounds", ea.rounds, "tower rounds (default m + 1)");
    endo->add_option("--out", ea.out, "dump directory");

    std::string en_age;
    int en_size = 3;
    bool en_up_to = false;
    auto* en = app.add_subcommand("enumerate", "members of an age up to isomorphism");
    en->add_option("--age", en_age)->required();
    en->add_option("--size", en_size)->check(CLI::NonNegativeNumber);
    en->add_flag("--up-to", en_up_to, "all sizes up to --size");

    std::string tw_age, tw_out;
    int tw_k = 2, tw_rounds = 2;
    auto* tw = app.add_subcommand("build-tower", "finite approximation of the limit");
    tw->add_option("--age", tw_age)->required();
    tw->add_option("--k", tw_k)->check(CLI::NonNegativeNumber);
    tw->add_option("--rounds", tw_rounds)->check(CLI::NonNegativeNumber);
    tw->add_option("--out", tw_out, "dump directory");

    std::string maps_path, structure_path;
    int n = 0;
    auto* laws = app.add_subcommand("laws", "ultrametric and subinvariance laws on a map list");
    laws->add_option("--maps", maps_path, "map list file (default: all self-maps of --n points)");
    laws->add_option("--n", n);
    auto* wo = app.add_subcommand("weak-orbits", "weak orbits and left zeros of a monoid");
    wo->add_option("--maps", maps_path, "map list file");
    wo->add_option("--structure", structure_path, "structure file; uses its endomorphism monoid");
    wo->add_option("--n", n);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*check) return cmd_check(ca, g, out);
        if (*catalog) return cmd_catalog(cat, g, out);
        if (*endo) return cmd_build_endo(ea, g, out, err);
        if (*en) return cmd_enumerate(en_age, en_size, en_up_to, g, out);
        if (*tw) return cmd_build_tower(tw_age, tw_k, tw_rounds, tw_out, out);
        if (*laws) return cmd_laws(maps_path, n, out);
        if (*wo) return cmd_weak_orbits(maps_path, structure_path, n, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == "parse-error" || e.code() == "io-error" ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace fraisse::cli
