// End-to-end acceptance checks. One PASS/FAIL line per criterion; the
// process exits nonzero if any criterion fails.

#include "edp/construction.hpp"
#include "edp/encoder.hpp"
#include "edp/sat.hpp"
#include "edp/search.hpp"
#include "edp/seqcore.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace edp;

namespace {

const char* status_name(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Exhausted: return "exhausted";
    default: return "budget";
    }
}

struct Criterion {
    bool pass;
    std::string detail;
};

// ---- 1: first discrepancy-1 counterexample length is 12 --------------------

Criterion crit1(std::ostream& log) {
    auto hit = search_edp1(11, 1);
    auto miss = search_edp1(12, 1);
    bool ok = hit.status == SearchStatus::Found && hit.witness &&
              discrepancy(*hit.witness).value <= 1 &&
              miss.status == SearchStatus::Exhausted;
    log << "c1 " << status_name(hit.status) << ' '
        << (hit.witness ? format_sequence(*hit.witness) : "-") << ' '
        << status_name(miss.status) << ' ' << hit.stats.nodes << ' '
        << miss.stats.nodes << '\n';
    return {ok, "search(11,1)=" + std::string(status_name(hit.status)) +
                    " search(12,1)=" + status_name(miss.status)};
}

// ---- 2: multiplicative discrepancy-1 threshold is 10 ------------------------

Criterion crit2(std::ostream& log) {
    auto hit = search_edp2(9, 1);
    auto miss = search_edp2(10, 1);
    bool ok = hit.status == SearchStatus::Found && hit.witness &&
              discrepancy(*hit.witness).value <= 1 &&
              miss.status == SearchStatus::Exhausted;
    log << "c2 " << status_name(hit.status) << ' '
        << (hit.witness ? format_sequence(*hit.witness) : "-") << ' '
        << status_name(miss.status) << '\n';
    return {ok, "search(9,1)=" + std::string(status_name(hit.status)) +
                    " search(10,1)=" + status_name(miss.status)};
}

// ---- 3: multiplicative discrepancy-2 threshold is 247 -----------------------

Criterion crit3(std::ostream& log) {
    SearchBudget budget;
    budget.max_seconds = 3600.0;
    auto hit = search_edp2(246, 2, budget);
    auto miss = search_edp2(247, 2, budget);
    bool ok = hit.status == SearchStatus::Found && hit.witness &&
              !is_completely_multiplicative(*hit.witness) &&
              hit.witness->at(1) == 1 && prefix_discrepancy(*hit.witness) <= 2 &&
              miss.status == SearchStatus::Exhausted;
    log << "c3 " << status_name(hit.status) << ' '
        << (hit.witness ? format_sequence(*hit.witness) : "-") << ' '
        << status_name(miss.status) << '\n';
    return {ok, "search(246,2)=" + std::string(status_name(hit.status)) +
                    " search(247,2)=" + status_name(miss.status)};
}

// ---- 4: the length-819 discrepancy-3 prefix of the mu3 sequence -------------

Criterion crit4(std::ostream& log) {
    Sequence w = walters(2000);
    std::size_t lgp = longest_good_prefix(w, 3);
    Sequence prefix;
    for (std::size_t i = 1; i <= std::min<std::size_t>(lgp, w.size()); ++i)
        prefix.push_back(w.at(i));
    long long d = discrepancy(prefix).value;
    log << "c4 " << lgp << ' ' << d << '\n';
    bool ok = lgp == 819 && d == 3;
    return {ok, "longest_good_prefix=" + std::to_string(lgp) +
                    " disc=" + std::to_string(d)};
}

// ---- 5: encodings are sound and complete at small sizes --------------------

bool model_allowed(const CnfInstance& base, const Sequence& x) {
    CnfInstance probe = base;
    for (std::size_t i = 1; i <= x.size(); ++i)
        probe.clauses.push_back({x.at(i) > 0 ? static_cast<int>(i)
                                             : -static_cast<int>(i)});
    SatResult r = sat_solve(probe);
    if (r.status == SatStatus::BudgetExceeded)
        throw std::runtime_error("unexpected solver budget hit");
    return r.status == SatStatus::Sat;
}

Criterion crit5(std::ostream& log) {
    for (int C : {1, 2}) {
        for (std::size_t n = 1; n <= 10; ++n) {
            EncodingConfig cfg{n, C, Problem::Edp1, StateMode::OneHot, {}};
            auto [cnf, vm] = encode_edp1(cfg);
            std::uint64_t models = 0;
            for (std::uint32_t b = 0; b < (1u << n); ++b) {
                Sequence x;
                for (std::size_t i = 0; i < n; ++i)
                    x.push_back((b >> i) & 1 ? -1 : +1);
                bool expected = discrepancy(x).value <= C;
                if (model_allowed(cnf, x) != expected)
                    return {false, "mismatch in the first encoding at n=" +
                                       std::to_string(n) + " C=" + std::to_string(C)};
                models += expected;
            }
            log << "c5a " << n << ' ' << C << ' ' << models << '\n';
        }
        for (std::size_t n = 1; n <= 12; ++n) {
            EncodingConfig cfg{n, C, Problem::Edp2, StateMode::OneHot, {}};
            auto [cnf, vm] = encode_edp2(cfg);
            std::uint64_t models = 0;
            for (std::uint32_t b = 0; b < (1u << n); ++b) {
                Sequence x;
                for (std::size_t i = 0; i < n; ++i)
                    x.push_back((b >> i) & 1 ? -1 : +1);
                bool expected = x.at(1) == 1 && !is_completely_multiplicative(x) &&
                                prefix_discrepancy(x) <= C;
                if (model_allowed(cnf, x) != expected)
                    return {false, "mismatch in the multiplicative encoding at n=" +
                                       std::to_string(n) + " C=" + std::to_string(C)};
                models += expected;
            }
            log << "c5b " << n << ' ' << C << ' ' << models << '\n';
        }
    }
    return {true, "model sets match exhaustive enumeration"};
}

// ---- 6: one-hot and binary state encodings are equisatisfiable --------------

Criterion crit6(std::ostream& log) {
    for (int C : {1, 2}) {
        for (std::size_t n = 1; n <= 10; ++n) {
            for (Problem prob : {Problem::Edp1, Problem::Edp2}) {
                EncodingConfig cfg{n, C, prob, StateMode::OneHot, {}};
                auto [oh, vm1] = encode(cfg);
                cfg.mode = StateMode::Binary;
                auto [bin, vm2] = encode(cfg);
                SatStatus a = sat_solve(oh).status;
                SatStatus b = sat_solve(bin).status;
                log << "c6 " << n << ' ' << C << ' ' << (prob == Problem::Edp1)
                    << ' ' << (a == SatStatus::Sat) << ' ' << (b == SatStatus::Sat)
                    << '\n';
                if (a != b)
                    return {false, "modes disagree at n=" + std::to_string(n) +
                                       " C=" + std::to_string(C)};
            }
        }
    }
    return {true, "one-hot and binary agree on SAT/UNSAT"};
}

// ---- 7: the mod-p witness table ---------------------------------------------

Criterion crit7(std::ostream& log, WitnessCache& cache) {
    SearchBudget ten_min;
    ten_min.max_seconds = 600.0;
    std::string bad;

    auto attempt = [&](std::size_t p, int cprime, const SearchBudget& budget,
                       bool may_timeout) {
        auto r = solve_disc_mod_p(p, cprime, budget);
        log << "c7 " << p << ' ' << cprime << ' ' << status_name(r.status);
        if (r.witness) {
            log << ' ' << format_sequence(r.witness->y);
            cache.store(*r.witness);
        }
        log << '\n';
        if (r.status == SearchStatus::Found) return;
        if (r.status == SearchStatus::BudgetExceeded && may_timeout) return;
        if (!bad.empty()) bad += "; ";
        bad += "p=" + std::to_string(p) + " C'=" + std::to_string(cprime) + " " +
               status_name(r.status);
    };

    for (std::size_t p : {1, 3, 5, 7, 9}) attempt(p, 1, ten_min, false);
    for (std::size_t p : {11, 13, 15, 17, 25, 27}) attempt(p, 2, ten_min, false);
    SearchBudget hour;
    hour.max_seconds = 3600.0;
    for (std::size_t p : {45, 81}) attempt(p, 2, hour, true);

    if (!bad.empty())
        return {false, bad + " (exhaustive: no length-6 witness keeps every "
                             "difference pattern of p=7 inside a +-1 band)"};
    return {true, "all listed p solved"};
}

// ---- 8: composition preserves the discrepancy bound --------------------------

Criterion crit8(std::ostream& log, const WitnessCache& cache) {
    auto base = search_edp2(246, 2);
    auto w9 = cache.load(9, 1);
    if (base.status != SearchStatus::Found || !base.witness || !w9)
        return {false, "missing base sequence or p=9 witness"};
    Sequence x = compose(*base.witness, *w9);
    long long d = discrepancy(x).value;
    log << "c8 " << x.size() << ' ' << d << '\n';
    if (x.size() != 2214 || d > 3)
        return {false, "composed length " + std::to_string(x.size()) +
                           " discrepancy " + std::to_string(d)};

    std::vector<ModPWitness> witnesses;
    for (std::size_t p : {3, 5, 9})
        if (auto w = cache.load(p, 1)) witnesses.push_back(*w);
    for (std::size_t p : {11, 13, 15, 17, 25, 27})
        if (auto w = cache.load(p, 2)) witnesses.push_back(*w);

    std::mt19937 rng(7); // fixed seed keeps the run reproducible
    for (int rep = 0; rep < 100; ++rep) {
        Sequence z;
        std::size_t len = 1 + rng() % 200;
        for (std::size_t i = 0; i < len; ++i) z.push_back(rng() & 1 ? 1 : -1);
        long long dz = discrepancy(z).value;
        for (const auto& w : witnesses) {
            long long dx = discrepancy(compose(z, w)).value;
            log << "c8r " << rep << ' ' << w.p << ' ' << dz << ' ' << dx << '\n';
            if (dx < dz || dx > dz + w.cprime)
                return {false, "bound violated for p=" + std::to_string(w.p)};
        }
    }
    return {true, "length-2214 composition and 100 random bases within bounds"};
}

// ---- 9: very large instances stream out as well-formed DIMACS ---------------

class ValidatingSink final : public ClauseSink {
public:
    explicit ValidatingSink(int num_vars) : num_vars_(num_vars) {}
    void add(std::span<const int> lits) override {
        if (lits.empty()) ok_ = false;
        for (int l : lits) {
            if (l == 0 || std::abs(l) > num_vars_) ok_ = false;
            hash_ = (hash_ ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(l))) *
                    1099511628211ull;
        }
        ++count_;
    }
    bool ok() const { return ok_; }
    std::uint64_t count() const { return count_; }
    std::uint64_t hash() const { return hash_; }

private:
    int num_vars_;
    bool ok_ = true;
    std::uint64_t count_ = 0;
    std::uint64_t hash_ = 1469598103934665603ull;
};

bool dimacs_file_well_formed(const std::filesystem::path& file, int num_vars,
                             std::uint64_t num_clauses) {
    std::ifstream in(file);
    std::string tok;
    if (!(in >> tok) || tok != "p") return false;
    if (!(in >> tok) || tok != "cnf") return false;
    long long v, k;
    if (!(in >> v >> k) || v != num_vars ||
        static_cast<std::uint64_t>(k) != num_clauses)
        return false;
    std::uint64_t seen = 0;
    long long lit;
    bool open = false;
    while (in >> lit) {
        if (lit == 0) {
            if (!open) return false;
            open = false;
            ++seen;
        } else {
            if (std::llabs(lit) > v) return false;
            open = true;
        }
    }
    return !open && in.eof() && seen == num_clauses;
}

Criterion crit9() {
    // First problem, n = 1161 at C = 2: stream to disk and re-scan.
    EncodingConfig big1{1161, 2, Problem::Edp1, StateMode::OneHot, {}};
    ClauseCounter counter1;
    VarMap vm1 = encode_edp1(big1, counter1);

    auto tmp = std::filesystem::temp_directory_path() / "edp_acceptance_big.cnf";
    {
        std::ofstream out(tmp);
        out << "p cnf " << vm1.num_vars() << ' ' << counter1.count() << '\n';
        DimacsClauseWriter writer(out);
        encode_edp1(big1, writer);
    }
    bool file_ok = dimacs_file_well_formed(tmp, vm1.num_vars(), counter1.count());
    std::filesystem::remove(tmp);

    ValidatingSink check1(vm1.num_vars());
    encode_edp1(big1, check1);

    // Multiplicative problem, n = 127646 at C = 3: structural checks on the
    // stream only; the instance is far too large to solve here.
    EncodingConfig big2{127646, 3, Problem::Edp2, StateMode::OneHot, {}};
    ClauseCounter counter2;
    VarMap vm2 = encode_edp2(big2, counter2);
    ValidatingSink check2(vm2.num_vars());
    encode_edp2(big2, check2);

    // Variable ids of the big varmaps must be injective and cover 1..V.
    auto injective = [](const VarMap& vm) {
        std::vector<char> seen(static_cast<std::size_t>(vm.num_vars()) + 1, 0);
        auto mark = [&](int id) {
            if (id < 1 || id > vm.num_vars() || seen[id]) return false;
            seen[id] = 1;
            return true;
        };
        for (std::size_t i = 1; i <= vm.n(); ++i)
            if (!mark(vm.p(i))) return false;
        if (!mark(vm.bad())) return false;
        for (std::size_t d : vm.tracked())
            for (std::size_t m = 1; m <= vm.layers(d); ++m)
                for (int j = -vm.C(); j <= vm.C(); ++j)
                    if (!mark(vm.state(d, m, j))) return false;
        for (int id = 1; id <= vm.num_vars(); ++id)
            if (!seen[id]) return false;
        return true;
    };

    bool ok = file_ok && check1.ok() && check1.count() == counter1.count() &&
              check2.ok() && check2.count() == counter2.count() &&
              injective(vm1) && injective(vm2);
    std::ostringstream detail;
    detail << "edp1(1161,2): " << vm1.num_vars() << " vars " << counter1.count()
           << " clauses; edp2(127646,3): " << vm2.num_vars() << " vars "
           << counter2.count() << " clauses";
    return {ok, detail.str()};
}

} // namespace

int main() {
    int failures = 0;
    auto report = [&](int idx, const char* title, const Criterion& c) {
        std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << idx << " ("
                  << title << "): " << c.detail << '\n';
        std::cout.flush();
        if (!c.pass) ++failures;
    };

    auto cache_dir = std::filesystem::temp_directory_path() / "edp_acceptance_cache";
    std::filesystem::remove_all(cache_dir);
    WitnessCache cache(cache_dir.string());

    // Criteria 1-8 run twice; criterion 10 compares the transcripts.
    auto run_1_to_8 = [&](bool report_results) {
        std::ostringstream log;
        Criterion cs[8] = {crit1(log), crit2(log), crit3(log), crit4(log),
                           crit5(log), crit6(log), crit7(log, cache),
                           crit8(log, cache)};
        if (report_results) {
            report(1, "first discrepancy-1 counterexample at 12", cs[0]);
            report(2, "multiplicative discrepancy-1 threshold at 10", cs[1]);
            report(3, "multiplicative discrepancy-2 threshold at 247", cs[2]);
            report(4, "length-819 discrepancy-3 prefix", cs[3]);
            report(5, "encoding soundness and completeness", cs[4]);
            report(6, "one-hot / binary equisatisfiability", cs[5]);
            report(7, "mod-p witness table", cs[6]);
            report(8, "composition bound at desk scale", cs[7]);
        }
        return log.str();
    };

    std::string first = run_1_to_8(true);
    report(9, "large instances stream well-formed DIMACS", crit9());
    std::string second = run_1_to_8(false);
    report(10, "single-threaded determinism",
           {first == second, first == second
                                 ? "criteria 1-8 transcripts byte-identical"
                                 : "transcripts differ between runs"});

    std::filesystem::remove_all(cache_dir);
    if (failures) std::cout << failures << " criteria failed\n";
    return failures ? 1 : 0;
}
