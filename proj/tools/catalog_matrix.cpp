#include "catalog_matrix.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace fraisse::cli {

std::string_view to_string(Expectation e) {
    switch (e) {
        case Expectation::certified: return "certified";
        case Expectation::refuted: return "refuted";
        case Expectation::not_certified: return "not-certified";
    }
    return "?";
}

std::string_view to_string(CellStatus s) {
    switch (s) {
        case CellStatus::met: return "met";
        case CellStatus::mismatch: return "MISMATCH";
        case CellStatus::vacuous: return "vacuous";
        case CellStatus::informational: return "-";
    }
    return "?";
}

const std::vector<CatalogEntry>& catalog_entries() {
    using P = Property;
    using E = Expectation;
    auto fraisse_class = [](std::map<P, E> extra) {
        std::map<P, E> m{{P::HP, E::certified}, {P::JEP, E::certified}, {P::AP, E::certified}};
        m.insert(extra.begin(), extra.end());
        return m;
    };
    static const std::vector<CatalogEntry> entries{
        {"graphs",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::strictAP, E::certified},
                        {P::freeAP, E::certified}}),
         "free amalgamation class"},
        {"triangle-free",
         fraisse_class({{P::HAP, E::refuted}, {P::AEP, E::certified}, {P::strictAP, E::certified},
                        {P::freeAP, E::certified}}),
         "free amalgamation class without HAP"},
        {"posets",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::strictAP, E::certified},
                        {P::freeAP, E::refuted}}),
         "strict AP via transitive closure"},
        {"strict-posets",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::strictAP, E::certified},
                        {P::freeAP, E::refuted}}),
         "strict AP via transitive closure"},
        {"nonstrict-linear",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::strictAP, E::not_certified},
                        {P::freeAP, E::refuted}}),
         "AEP without strict AP"},
        {"strict-linear",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::strictAP, E::not_certified},
                        {P::freeAP, E::refuted}}),
         "homs are embeddings"},
        {"tournaments",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::strictAP, E::not_certified},
                        {P::freeAP, E::refuted}}),
         "homs are embeddings"},
        {"metric",
         fraisse_class({{P::HAP, E::certified}, {P::AEP, E::certified}, {P::freeAP, E::refuted}}),
         "shortest-path amalgamation over D = {1, 2}"},
    };
    return entries;
}

CellStatus judge(const PropertyReport& report, std::optional<Expectation> expected) {
    if (report.vacuous) return CellStatus::vacuous;
    if (!expected) return CellStatus::informational;
    bool ok = false;
    switch (*expected) {
        case Expectation::certified: ok = report.verdict == Verdict::certified; break;
        case Expectation::refuted: ok = report.verdict == Verdict::refuted; break;
        case Expectation::not_certified: ok = report.verdict != Verdict::certified; break;
    }
    return ok ? CellStatus::met : CellStatus::mismatch;
}

CatalogResult run_catalog(const std::vector<std::pair<CatalogEntry, AgeSpec>>& ages,
                          const std::vector<Property>& properties, const CheckOptions& options) {
    CatalogResult out;
    out.size_bound = options.size_bound;
    CheckOptions opts = options;
    opts.keep_records = false;
    for (const auto& [entry, age] : ages)
        for (Property p : properties) {
            auto report = check_property(p, age, opts);
            CatalogCell cell;
            cell.age = entry.age;
            cell.age_hash = report.age_hash;
            cell.property = p;
            cell.verdict = report.verdict;
            cell.instances = report.certified + report.refuted + report.unknown;
            if (auto it = entry.expected.find(p); it != entry.expected.end()) cell.expected = it->second;
            cell.status = judge(report, cell.expected);
            if (!report.records.empty()) cell.first_problem = report.records.front().detail;
            switch (cell.status) {
                case CellStatus::met: ++out.met; break;
                case CellStatus::mismatch: ++out.mismatches; break;
                case CellStatus::vacuous: ++out.vacuous; break;
                case CellStatus::informational: break;
            }
            out.cells.push_back(std::move(cell));
        }
    return out;
}

std::string format_catalog_text(const CatalogResult& r, const std::vector<Property>& properties) {
    std::ostringstream out;
    out << kToolVersion << "\ncatalog size-bound " << r.size_bound << "\n\n";
    out << std::left << std::setw(18) << "age";
    for (Property p : properties) out << std::setw(22) << to_string(p);
    out << "\n";
    std::string current;
    for (const auto& c : r.cells) {
        if (c.age != current) {
            if (!current.empty()) out << "\n";
            current = c.age;
            out << std::setw(18) << c.age;
        }
        std::string cell = c.verdict == Verdict::certified ? "certified" : std::string(to_string(c.verdict));
        if (c.status != CellStatus::informational) cell += " (" + std::string(to_string(c.status)) + ")";
        out << std::setw(22) << cell;
    }
    if (!current.empty()) out << "\n";
    out << "\n";
    for (const auto& c : r.cells)
        if (c.status == CellStatus::mismatch)
            out << "mismatch: " << c.age << " " << to_string(c.property) << " expected "
                << to_string(*c.expected) << ", got " << to_string(c.verdict)
                << (c.first_problem.empty() ? "" : " (" + c.first_problem + ")") << "\n";
    out << "met " << r.met << "  mismatches " << r.mismatches << "  vacuous " << r.vacuous << "\n";
    return out.str();
}

std::string format_catalog_records(const CatalogResult& r) {
    using nlohmann::ordered_json;
    std::string out;
    for (const auto& c : r.cells) {
        ordered_json j;
        j["age"] = c.age;
        j["age-hash"] = c.age_hash;
        j["property"] = std::string(to_string(c.property));
        j["size-bound"] = r.size_bound;
        j["verdict"] = std::string(to_string(c.verdict));
        j["instances"] = c.instances;
        j["expected"] = c.expected ? ordered_json(std::string(to_string(*c.expected))) : ordered_json(nullptr);
        j["status"] = std::string(to_string(c.status));
        out += j.dump() + "\n";
    }
    ordered_json s;
    s["summary"] = true;
    s["tool-version"] = std::string(kToolVersion);
    s["size-bound"] = r.size_bound;
    s["met"] = r.met;
    s["mismatches"] = r.mismatches;
    s["vacuous"] = r.vacuous;
    out += s.dump() + "\n";
    return out;
}

}  // namespace fraisse::cli
