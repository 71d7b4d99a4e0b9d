#include <atomic>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fraisse/amalgamation.hpp"
#include "fraisse/search.hpp"

namespace fraisse {

std::string age_spec_hash(const AgeSpec& age) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : describe_age_spec(age)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

namespace {

struct TaskResult {
    std::vector<InstanceRecord> records;
    bool nonempty = false;
};

using Task = std::function<TaskResult()>;

InstanceRecord record(std::string instance, Verdict v, std::string detail) {
    return {0, std::move(instance), v, std::move(detail)};
}

/// Morphism lists between representatives, computed once before fan-out.
class MorphismCache {
public:
    explicit MorphismCache(const std::vector<Structure>& reps) : reps_(reps) {}

    const std::vector<Morphism>& get(std::size_t i, std::size_t j, MorphismKind kind) {
        auto key = std::make_tuple(i, j, kind);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, find_morphisms(reps_[i], reps_[j], kind)).first;
        return it->second;
    }

private:
    const std::vector<Structure>& reps_;
    std::map<std::tuple<std::size_t, std::size_t, MorphismKind>, std::vector<Morphism>> cache_;
};

std::string describe(const ApInstance& in) {
    return "A=" + compact(in.A) + " B1=" + compact(in.B1) + " B2=" + compact(in.B2) + " f1=" + compact(in.f1) +
           " f2=" + compact(in.f2);
}

std::string describe(const ApSolution& s) {
    return "D=" + compact(s.D) + " g1=" + compact(s.g1) + " g2=" + compact(s.g2);
}

std::string describe(const HapInstance& in) {
    return "A=" + compact(in.A) + " B=" + compact(in.B) + " T1=" + compact(in.T1) + " g=" + compact(in.g) +
           " a=" + compact(in.a);
}

std::string describe(const HapSolution& s) {
    return "T2=" + compact(s.T2) + " b=" + compact(s.b) + " h=" + compact(s.h);
}

std::string describe(const AepInstance& in) {
    return "A=" + compact(in.A) + " B1=" + compact(in.B1) + " B2=" + compact(in.B2) + " T=" + compact(in.T) +
           " f1=" + compact(in.f1) + " f2=" + compact(in.f2) + " h1=" + compact(in.h1) + " h2=" + compact(in.h2);
}

std::string describe(const AepSolution& s) {
    return "C=" + compact(s.C) + " g1=" + compact(s.g1) + " g2=" + compact(s.g2) + " T'=" + compact(s.T_prime) +
           " h=" + compact(s.h) + " k=" + compact(s.k);
}

[[noreturn]] void bad_witness(const std::string& what, const std::string& instance) {
    throw std::logic_error("solver produced an invalid witness (" + what + ") for " + instance);
}

/// Any amalgam of the instance within the bound whose square is a pushout.
std::optional<std::pair<ApSolution, PushoutVerdict>> find_pushout(const AgeSpec& age, const ApInstance& in,
                                                                  int bound, int test_size) {
    auto square = [&](const ApSolution& s) {
        return PushoutSquare{in.A, in.B1, in.B2, s.D, in.f1, in.f2, s.g1, s.g2};
    };
    std::optional<std::pair<ApSolution, PushoutVerdict>> found;
    if (bound < 0) bound = in.B1.size() + in.B2.size() - in.A.size();
    for (int j = 0; in.B1.size() + j <= bound && !found; ++j) {
        ExtensionSpec spec;
        spec.extra = j;
        for_each_age_extension(age, in.B1, spec, [&](const Structure& d) {
            PartialMap p{std::vector<Elem>(static_cast<std::size_t>(in.B2.size()), kUnassigned),
                         MorphismKind::embedding};
            for (Elem x = 0; x < in.A.size(); ++x) p.assigned[static_cast<std::size_t>(in.f2(x))] = in.f1(x);
            for_each_extension(in.B2, d, p, {}, [&](const std::vector<Elem>& g2) {
                ApSolution s{d, Morphism{identity_map(in.B1.size()), MorphismKind::embedding},
                             Morphism{g2, MorphismKind::embedding}};
                auto v = verify_pushout(age, square(s), test_size);
                if (!v.certified) return true;
                found.emplace(std::move(s), std::move(v));
                return false;
            });
            return !found;
        });
    }
    return found;
}

class Planner {
public:
    Planner(Property property, const AgeSpec& age, const CheckOptions& opts)
        : property_(property), age_(age), opts_(opts), reps_(enumerate_up_to(age, opts.size_bound)),
          cache_(reps_) {}

    std::vector<Task> plan() {
        switch (property_) {
            case Property::HP: plan_hp(); break;
            case Property::JEP: plan_jep(); break;
            case Property::AP:
            case Property::strictAP:
            case Property::freeAP: plan_ap(); break;
            case Property::HAP: plan_hap(); break;
            case Property::AEP: plan_aep(); break;
        }
        return std::move(tasks_);
    }

private:
    const Structure& rep(std::size_t i) const { return reps_[i]; }

    void plan_hp() {
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            tasks_.push_back([this, i] {
                const auto& s = rep(i);
                TaskResult r;
                r.nonempty = s.size() > 0;
                auto n = s.size();
                for (unsigned mask = 0; mask < (1u << n); ++mask) {
                    std::vector<Elem> sub;
                    for (Elem x = 0; x < n; ++x)
                        if (mask & (1u << x)) sub.push_back(x);
                    if (auto v = member(age_, s.induced(sub)); !v) {
                        r.records.push_back(record("S=" + compact(s), Verdict::refuted,
                                                   "substructure on " + compact(Morphism{sub}) +
                                                       " is not a member: " + v.violation));
                        return r;
                    }
                }
                r.records.push_back(record("S=" + compact(s), Verdict::certified,
                                           std::to_string(1u << n) + " induced substructures are members"));
                return r;
            });
        }
    }

    void plan_jep() {
        Structure empty(age_.sig, 0);
        for (std::size_t i = 0; i < reps_.size(); ++i)
            for (std::size_t j = 0; j < reps_.size(); ++j)
                tasks_.push_back([this, i, j, empty] {
                    ApInstance in{empty, rep(i), rep(j), Morphism{{}, MorphismKind::embedding},
                                  Morphism{{}, MorphismKind::embedding}};
                    TaskResult r;
                    r.nonempty = in.B1.size() + in.B2.size() > 0;
                    r.records.push_back(solve_ap_record(in));
                    return r;
                });
    }

    InstanceRecord solve_ap_record(const ApInstance& in) const {
        auto text = describe(in);
        auto sol = solve_ap(age_, in, opts_.search_bound);
        if (!sol) return record(text, Verdict::unknown, "no amalgam within search bound (non-conclusive)");
        if (auto bad = check_ap_solution(age_, in, *sol)) bad_witness(*bad, text);
        return record(text, Verdict::certified, describe(*sol));
    }

    InstanceRecord free_ap_record(const ApInstance& in) const {
        auto text = describe(in);
        auto fs = free_sum(in.A, in.B1, in.B2, in.f1, in.f2);
        if (auto v = member(age_, fs.sum); !v)
            return record(text, Verdict::refuted, "free sum " + compact(fs.sum) + " is not a member: " + v.violation);
        auto c = complete(age_, fs.sum);
        if (!c || !(*c.completed == fs.sum))
            return record(text, Verdict::refuted, "completion changes the free sum " + compact(fs.sum));
        ApSolution sol{fs.sum, fs.g1, fs.g2};
        if (auto bad = check_ap_solution(age_, in, sol)) bad_witness(*bad, text);
        return record(text, Verdict::certified, describe(sol));
    }

    InstanceRecord strict_ap_record(const ApInstance& in) const {
        auto text = describe(in);
        int test_size = opts_.pushout_test_size >= 0 ? opts_.pushout_test_size : opts_.size_bound;
        auto first = solve_ap(age_, in, opts_.search_bound);
        if (first) {
            PushoutSquare sq{in.A, in.B1, in.B2, first->D, in.f1, in.f2, first->g1, first->g2};
            if (auto v = verify_pushout(age_, sq, test_size); v.certified)
                return record(text, Verdict::certified,
                              describe(*first) + " pushout against " + std::to_string(v.checked) + " cocones");
        }
        if (auto other = find_pushout(age_, in, opts_.search_bound, test_size)) {
            if (auto bad = check_ap_solution(age_, in, other->first)) bad_witness(*bad, text);
            return record(text, Verdict::certified,
                          describe(other->first) + " pushout against " + std::to_string(other->second.checked) +
                              " cocones");
        }
        return record(text, Verdict::unknown, "no pushout amalgam within search bound (non-conclusive)");
    }

    void plan_ap() {
        for (std::size_t a = 0; a < reps_.size(); ++a)
            for (std::size_t b1 = 0; b1 < reps_.size(); ++b1)
                for (std::size_t b2 = 0; b2 < reps_.size(); ++b2) {
                    const auto& e1 = cache_.get(a, b1, MorphismKind::embedding);
                    const auto& e2 = cache_.get(a, b2, MorphismKind::embedding);
                    if (e1.empty() || e2.empty()) continue;
                    tasks_.push_back([this, a, b1, b2, &e1, &e2] {
                        TaskResult r;
                        r.nonempty = rep(b1).size() + rep(b2).size() > 0;
                        for (const auto& f1 : e1)
                            for (const auto& f2 : e2) {
                                ApInstance in{rep(a), rep(b1), rep(b2), f1, f2};
                                if (property_ == Property::AP) r.records.push_back(solve_ap_record(in));
                                else if (property_ == Property::freeAP) r.records.push_back(free_ap_record(in));
                                else r.records.push_back(strict_ap_record(in));
                            }
                        return r;
                    });
                }
    }

    void plan_hap() {
        for (std::size_t a = 0; a < reps_.size(); ++a)
            for (std::size_t b = 0; b < reps_.size(); ++b)
                for (std::size_t t = 0; t < reps_.size(); ++t) {
                    const auto& gs = cache_.get(a, b, MorphismKind::embedding);
                    const auto& as = cache_.get(a, t, MorphismKind::hom);
                    if (gs.empty() || as.empty()) continue;
                    tasks_.push_back([this, a, b, t, &gs, &as] {
                        TaskResult r;
                        r.nonempty = rep(b).size() + rep(t).size() > 0;
                        for (const auto& g : gs)
                            for (const auto& am : as) {
                                HapInstance in{rep(a), rep(b), rep(t), g, am};
                                r.records.push_back(hap_record(in));
                            }
                        return r;
                    });
                }
    }

    InstanceRecord hap_record(const HapInstance& in) const {
        auto text = describe(in);
        if (auto proof = refute_hap(age_, in)) return record(text, Verdict::refuted, proof->text);
        auto sol = solve_hap(age_, in, opts_.search_bound);
        if (!sol) return record(text, Verdict::unknown, "no solution within search bound (non-conclusive)");
        if (auto bad = check_hap_solution(age_, in, *sol)) bad_witness(*bad, text);
        return record(text, Verdict::certified, describe(*sol));
    }

    void plan_aep() {
        for (std::size_t a = 0; a < reps_.size(); ++a)
            for (std::size_t b1 = 0; b1 < reps_.size(); ++b1)
                for (std::size_t b2 = 0; b2 < reps_.size(); ++b2) {
                    const auto& e1 = cache_.get(a, b1, MorphismKind::embedding);
                    const auto& e2 = cache_.get(a, b2, MorphismKind::embedding);
                    if (e1.empty() || e2.empty()) continue;
                    for (std::size_t t = 0; t < reps_.size(); ++t) {
                        const auto& hs1 = cache_.get(b1, t, MorphismKind::hom);
                        if (hs1.empty()) continue;
                        tasks_.push_back([this, a, b1, b2, t, &e1, &e2, &hs1] {
                            TaskResult r;
                            r.nonempty = rep(b1).size() + rep(b2).size() + rep(t).size() > 0;
                            for (const auto& f1 : e1)
                                for (const auto& f2 : e2)
                                    for (const auto& h1 : hs1) {
                                        PartialMap p{std::vector<Elem>(static_cast<std::size_t>(rep(b2).size()),
                                                                       kUnassigned),
                                                     MorphismKind::hom};
                                        for (Elem x = 0; x < rep(a).size(); ++x)
                                            p.assigned[static_cast<std::size_t>(f2(x))] = h1(f1(x));
                                        for (const auto& h2 : extend_partial(rep(b2), rep(t), p)) {
                                            AepInstance in{rep(a), rep(b1), rep(b2), rep(t), f1, f2, h1, h2};
                                            r.records.push_back(aep_record(in));
                                        }
                                    }
                            return r;
                        });
                    }
                }
    }

    InstanceRecord aep_record(const AepInstance& in) const {
        auto text = describe(in);
        auto sol = solve_aep(age_, in, opts_.search_bound);
        if (!sol) return record(text, Verdict::unknown, "no solution within search bound (non-conclusive)");
        if (auto bad = check_aep_solution(age_, in, *sol)) bad_witness(*bad, text);
        return record(text, Verdict::certified, describe(*sol));
    }

    Property property_;
    const AgeSpec& age_;
    const CheckOptions& opts_;
    std::vector<Structure> reps_;
    MorphismCache cache_;
    std::vector<Task> tasks_;
};

std::vector<TaskResult> run_tasks(const std::vector<Task>& tasks, unsigned workers) {
    std::vector<TaskResult> results(tasks.size());
    if (workers <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            try {
                results[i] = tasks[i]();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace

PropertyReport check_property(Property property, const AgeSpec& age, const CheckOptions& options) {
    PropertyReport report;
    report.property = property;
    report.age = age.name;
    report.age_hash = age_spec_hash(age);
    report.size_bound = options.size_bound;
    report.search_bound = options.search_bound;

    Planner planner(property, age, options);
    auto results = run_tasks(planner.plan(), options.workers);
    std::size_t id = 0;
    for (auto& r : results) {
        if (r.nonempty) report.vacuous = false;
        for (auto& rec : r.records) {
            rec.id = id++;
            switch (rec.verdict) {
                case Verdict::certified: ++report.certified; break;
                case Verdict::refuted: ++report.refuted; break;
                case Verdict::unknown: ++report.unknown; break;
            }
            if (options.keep_records || rec.verdict != Verdict::certified) report.records.push_back(std::move(rec));
        }
    }
    report.verdict = report.refuted ? Verdict::refuted : report.unknown ? Verdict::unknown : Verdict::certified;
    return report;
}

std::string format_records(const PropertyReport& report) {
    using nlohmann::ordered_json;
    std::string out;
    for (const auto& rec : report.records) {
        ordered_json j;
        j["property"] = std::string(to_string(report.property));
        j["age"] = report.age;
        j["instance-id"] = rec.id;
        j["instance"] = rec.instance;
        j["verdict"] = std::string(to_string(rec.verdict));
        const char* key = rec.verdict == Verdict::certified ? "witness" : rec.verdict == Verdict::refuted ? "proof" : "note";
        j[key] = rec.detail;
        out += j.dump() + "\n";
    }
    ordered_json s;
    s["summary"] = true;
    s["tool-version"] = std::string(kToolVersion);
    s["property"] = std::string(to_string(report.property));
    s["age"] = report.age;
    s["age-hash"] = report.age_hash;
    s["size-bound"] = report.size_bound;
    if (report.search_bound >= 0) s["search-bound"] = report.search_bound;
    else s["search-bound"] = nullptr;
    s["verdict"] = std::string(to_string(report.verdict));
    s["vacuous"] = report.vacuous;
    s["instances"] = report.certified + report.refuted + report.unknown;
    s["certified"] = report.certified;
    s["refuted"] = report.refuted;
    s["unknown"] = report.unknown;
    out += s.dump() + "\n";
    return out;
}

std::string format_text(const PropertyReport& report) {
    std::ostringstream out;
    out << kToolVersion << "\n"
        << "property " << to_string(report.property) << "  age " << report.age << " (" << report.age_hash << ")\n"
        << "size-bound " << report.size_bound << "  search-bound "
        << (report.search_bound >= 0 ? std::to_string(report.search_bound) : std::string("default")) << "\n"
        << "verdict " << to_string(report.verdict) << (report.vacuous ? " (vacuous)" : "") << "\n"
        << "instances " << report.certified + report.refuted + report.unknown << ": " << report.certified
        << " certified, " << report.refuted << " refuted, " << report.unknown << " unknown\n";
    for (const auto& rec : report.records) {
        if (rec.verdict == Verdict::certified) continue;
        out << "#" << rec.id << " " << to_string(rec.verdict) << "\n  instance " << rec.instance << "\n  "
            << rec.detail << "\n";
        break;
    }
    return out.str();
}

}  // namespace fraisse
