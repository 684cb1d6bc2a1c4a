#include "edp/construction.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace edp {

namespace {

using clock_type = std::chrono::steady_clock;

// pattern of 1-based indices i*d mod p for i = 1..q-1; never hits 0
std::vector<std::size_t> pattern(std::size_t p, std::size_t d) {
    std::size_t q = p / std::gcd(d, p);
    std::vector<std::size_t> idx;
    idx.reserve(q - 1);
    for (std::size_t i = 1; i < q; ++i) {
        std::size_t r = (i * d) % p;
        if (r == 0) throw std::logic_error("pattern index hit 0");
        idx.push_back(r);
    }
    return idx;
}

} // namespace

std::optional<ModPViolation> check_disc_mod_p(const Sequence& y, std::size_t p, int cprime) {
    if (p < 1 || cprime < 1) throw std::invalid_argument("need p >= 1 and cprime >= 1");
    if (y.size() != p - 1) throw std::invalid_argument("witness must have length p-1");
    for (std::size_t d = 1; d < p; ++d) {
        auto idx = pattern(p, d);
        long long s = 0;
        for (std::size_t m = 1; m <= idx.size(); ++m) {
            s += y.at(idx[m - 1]);
            if (std::llabs(s) > cprime) return ModPViolation{d, m, s};
        }
        if (s != 0) return ModPViolation{d, 0, s};
    }
    return std::nullopt;
}

namespace {

struct ModPSearch {
    std::size_t p;
    long long cprime;
    std::vector<std::vector<std::size_t>> patterns; // per d = 1..p-1
    std::vector<std::int8_t> y;                     // 1-based, 0 = unassigned
    std::uint64_t nodes = 0;
    std::uint64_t max_nodes;
    clock_type::time_point deadline;
    bool budget_hit = false;
    std::size_t max_depth = 0;

    ModPSearch(std::size_t p, int cprime, const SearchBudget& b)
        : p(p), cprime(cprime), y(p, 0), max_nodes(b.max_nodes),
          deadline(clock_type::now() + std::chrono::duration_cast<clock_type::duration>(
                                           std::chrono::duration<double>(b.max_seconds))) {
        patterns.reserve(p);
        for (std::size_t d = 1; d < p; ++d) patterns.push_back(pattern(p, d));
    }

    // Walks every pattern prefix that is fully assigned given y_1..y_k.
    // Rejects when a partial sum leaves the band, when a complete pattern
    // misses zero, or when the remaining entries cannot cancel the sum.
    bool feasible(std::size_t k) const {
        for (const auto& idx : patterns) {
            long long s = 0;
            std::size_t m = 0;
            for (; m < idx.size() && idx[m] <= k; ++m) {
                s += y[idx[m]];
                if (std::llabs(s) > cprime) return false;
            }
            std::size_t rem = idx.size() - m;
            if (rem == 0) {
                if (s != 0) return false;
            } else if (std::llabs(s) > static_cast<long long>(rem) ||
                       (static_cast<long long>(rem) - std::llabs(s)) % 2 != 0) {
                return false;
            }
        }
        return true;
    }

    bool tick() {
        ++nodes;
        if (nodes > max_nodes ||
            ((nodes & 4095) == 0 && clock_type::now() > deadline))
            budget_hit = true;
        return budget_hit;
    }

    // Found / Exhausted / Stopped as in the other searches
    int dfs(std::size_t k) {
        if (k >= p) return 0; // all of y_1..y_{p-1} assigned and feasible
        max_depth = std::max(max_depth, k);
        bool stopped = false;
        for (int s : {+1, -1}) {
            if (tick()) return 2;
            y[k] = static_cast<std::int8_t>(s);
            if (feasible(k)) {
                int r = dfs(k + 1);
                if (r == 0) return 0;
                if (r == 2) stopped = true;
            }
            y[k] = 0;
            if (stopped) return 2;
        }
        return 1;
    }
};

} // namespace

ModPResult solve_disc_mod_p(std::size_t p, int cprime, const SearchBudget& budget) {
    if (p < 1 || cprime < 1) throw std::invalid_argument("need p >= 1 and cprime >= 1");
    auto start = clock_type::now();
    ModPResult res;
    if (p == 1) {
        res.status = SearchStatus::Found;
        res.witness = ModPWitness{1, cprime, Sequence{}};
        return res;
    }
    ModPSearch srch(p, cprime, budget);
    int r = srch.dfs(1);
    res.stats.nodes = srch.nodes;
    res.stats.max_depth = srch.max_depth;
    res.stats.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    if (r == 0) {
        Sequence y;
        for (std::size_t i = 1; i < p; ++i) y.push_back(srch.y[i]);
        ModPWitness w{p, cprime, std::move(y)};
        if (check_disc_mod_p(w.y, p, cprime))
            throw std::logic_error("solve_disc_mod_p witness failed verification");
        res.status = SearchStatus::Found;
        res.witness = std::move(w);
    } else if (r == 1) {
        res.status = SearchStatus::Exhausted;
    } else {
        res.status = SearchStatus::BudgetExceeded;
    }
    return res;
}

Sequence compose(const Sequence& z, const ModPWitness& w) {
    if (z.empty()) throw std::invalid_argument("base sequence must be nonempty");
    if (w.p != w.y.size() + 1) throw std::invalid_argument("witness length must be p-1");
    if (w.p > 1 && check_disc_mod_p(w.y, w.p, w.cprime))
        throw std::invalid_argument("invalid mod-p witness");
    Sequence x;
    for (std::size_t j = 1; j <= z.size(); ++j) {
        for (std::size_t i = 1; i < w.p; ++i) x.push_back(w.y.at(i));
        x.push_back(z.at(j));
    }
    return x;
}

AmplifyResult amplify(const Sequence& z, const CompositionPlan& plan) {
    AmplifyResult res;
    res.x = z;
    res.claimed = discrepancy(z).value;
    for (const auto& step : plan.steps) {
        res.x = compose(res.x, step);
        res.claimed += step.cprime;
    }
    res.actual = discrepancy(res.x).value;
    if (res.actual > res.claimed)
        throw ConstructionError("composition bound violated: claimed " +
                                std::to_string(res.claimed) + " but discrepancy is " +
                                std::to_string(res.actual));
    return res;
}

std::string format_witness(const ModPWitness& w) {
    std::ostringstream out;
    out << "p " << w.p << " C " << w.cprime << '\n';
    out << format_sequence(w.y);
    return out.str();
}

ModPWitness parse_witness(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        break;
    }
    std::istringstream hdr(line);
    std::string kp, kc;
    std::size_t p;
    int cprime;
    if (!(hdr >> kp >> p >> kc >> cprime) || kp != "p" || kc != "C")
        throw std::invalid_argument("bad witness header: " + line);
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ModPWitness w{p, cprime, parse_sequence(rest)};
    if (w.y.size() != p - 1)
        throw std::invalid_argument("witness body has wrong length");
    return w;
}

std::string WitnessCache::path(std::size_t p, int cprime) const {
    return dir_ + "/modp_" + std::to_string(p) + "_" + std::to_string(cprime) + ".txt";
}

std::optional<ModPWitness> WitnessCache::load(std::size_t p, int cprime) const {
    std::ifstream in(path(p, cprime));
    if (!in) return std::nullopt;
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ModPWitness w = parse_witness(text);
    if (w.p != p || w.cprime != cprime || (p > 1 && check_disc_mod_p(w.y, p, cprime)))
        return std::nullopt; // stale or corrupt entry, ignore
    return w;
}

void WitnessCache::store(const ModPWitness& w) const {
    std::filesystem::create_directories(dir_);
    std::ofstream out(path(w.p, w.cprime));
    out << format_witness(w);
}

} // namespace edp
