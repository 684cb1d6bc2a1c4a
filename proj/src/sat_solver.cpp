#include "edp/sat.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace edp {

namespace {

// internal literal: var v (0-based) positive -> 2v, negative -> 2v+1
inline int toLit(int dimacs) {
    int v = dimacs > 0 ? dimacs : -dimacs;
    return 2 * (v - 1) + (dimacs < 0);
}
inline int neg(int lit) { return lit ^ 1; }
inline int litVar(int lit) { return lit >> 1; }
inline int toDimacs(int lit) { return (lit & 1) ? -(litVar(lit) + 1) : litVar(lit) + 1; }

std::uint64_t luby(std::uint64_t i) {
    // sequence 1 1 2 1 1 2 4 ...
    std::uint64_t k = 1;
    while ((1ull << k) - 1 < i + 1) ++k;
    while ((1ull << k) - 1 != i + 1) {
        --k;
        i -= (1ull << k) - 1;
    }
    return 1ull << (k - 1);
}

struct Solver {
    int nvars;
    std::vector<std::vector<int>> clauses; // original + learnt, internal lits
    std::size_t num_original = 0;
    std::vector<std::vector<std::pair<int, int>>> watches; // per lit: (clause idx, blocker)
    std::vector<int8_t> assign;  // per var: 0 unset, 1 true, -1 false
    std::vector<int8_t> phase;   // saved phase, init true (+1 first)
    std::vector<int> trail;
    std::vector<std::size_t> trail_lim;
    std::vector<int> reason;     // per var: clause idx or -1
    std::vector<int> level;      // per var
    std::vector<double> activity;
    double var_inc = 1.0;
    std::vector<int8_t> seen;
    std::size_t qhead = 0;
    std::uint64_t conflicts = 0, decisions = 0, propagations = 0;
    bool unsat = false;

    explicit Solver(int nv) : nvars(nv) {
        watches.resize(2 * nv);
        assign.assign(nv, 0);
        phase.assign(nv, 1);
        reason.assign(nv, -1);
        level.assign(nv, 0);
        activity.assign(nv, 0.0);
        seen.assign(nv, 0);
    }

    bool value(int lit) const { return assign[litVar(lit)] == ((lit & 1) ? -1 : 1); }
    bool isFalse(int lit) const { return assign[litVar(lit)] == ((lit & 1) ? 1 : -1); }
    bool isSet(int lit) const { return assign[litVar(lit)] != 0; }
    int decisionLevel() const { return static_cast<int>(trail_lim.size()); }

    void enqueue(int lit, int from) {
        int v = litVar(lit);
        assign[v] = (lit & 1) ? -1 : 1;
        reason[v] = from;
        level[v] = decisionLevel();
        trail.push_back(lit);
    }

    void watchClause(std::size_t ci) {
        auto& c = clauses[ci];
        watches[neg(c[0])].push_back({static_cast<int>(ci), c[1]});
        watches[neg(c[1])].push_back({static_cast<int>(ci), c[0]});
    }

    // returns false on immediate top-level conflict
    bool addClause(std::vector<int> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if (lits[i] == neg(lits[i + 1])) return true; // tautology
        // drop root-false literals, detect root-satisfied clauses
        std::vector<int> out;
        for (int l : lits) {
            if (isSet(l)) {
                if (value(l)) return true;
                continue;
            }
            out.push_back(l);
        }
        if (out.empty()) return false;
        if (out.size() == 1) {
            enqueue(out[0], -1);
            return propagate() == -1;
        }
        clauses.push_back(std::move(out));
        watchClause(clauses.size() - 1);
        return true;
    }

    // returns conflicting clause index or -1
    int propagate() {
        while (qhead < trail.size()) {
            int lit = trail[qhead++];
            ++propagations;
            auto& ws = watches[lit];
            std::size_t i = 0, j = 0;
            int confl = -1;
            for (; i < ws.size(); ++i) {
                auto [ci, blocker] = ws[i];
                if (isSet(blocker) && value(blocker)) {
                    ws[j++] = ws[i];
                    continue;
                }
                auto& c = clauses[static_cast<std::size_t>(ci)];
                int flit = neg(lit);
                if (c[0] == flit) std::swap(c[0], c[1]);
                if (isSet(c[0]) && value(c[0])) {
                    ws[j++] = {ci, c[0]};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (!isFalse(c[k])) {
                        std::swap(c[1], c[k]);
                        watches[neg(c[1])].push_back({ci, c[0]});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {ci, c[0]};
                if (isSet(c[0])) { // c[0] false: conflict
                    confl = ci;
                    ++i;
                    break;
                }
                enqueue(c[0], ci);
            }
            for (; i < ws.size(); ++i) ws[j++] = ws[i];
            ws.resize(j);
            if (confl != -1) return confl;
        }
        return -1;
    }

    void bump(int v) {
        if ((activity[v] += var_inc) > 1e100) {
            for (auto& a : activity) a *= 1e-100;
            var_inc *= 1e-100;
        }
    }

    void backtrack(int lvl) {
        if (decisionLevel() <= lvl) return;
        for (std::size_t i = trail.size(); i > trail_lim[static_cast<std::size_t>(lvl)]; --i) {
            int v = litVar(trail[i - 1]);
            phase[v] = assign[v];
            assign[v] = 0;
            reason[v] = -1;
        }
        trail.resize(trail_lim[static_cast<std::size_t>(lvl)]);
        trail_lim.resize(static_cast<std::size_t>(lvl));
        qhead = trail.size();
    }

    // 1UIP learning; returns (learnt clause, backtrack level)
    std::pair<std::vector<int>, int> analyze(int confl) {
        std::vector<int> learnt{0}; // slot for the asserting literal
        int counter = 0;
        int lit = -1;
        std::size_t idx = trail.size();
        do {
            auto& c = clauses[static_cast<std::size_t>(confl)];
            for (std::size_t k = (lit == -1 ? 0 : 1); k < c.size(); ++k) {
                int q = c[k];
                int v = litVar(q);
                if (seen[v] || level[v] == 0) continue;
                seen[v] = 1;
                bump(v);
                if (level[v] == decisionLevel())
                    ++counter;
                else
                    learnt.push_back(q);
            }
            while (!seen[litVar(trail[idx - 1])]) --idx;
            lit = trail[--idx];
            int v = litVar(lit);
            seen[v] = 0;
            confl = reason[v];
        } while (--counter > 0);
        learnt[0] = neg(lit);
        int btLevel = 0;
        if (learnt.size() > 1) {
            std::size_t maxi = 1;
            for (std::size_t k = 2; k < learnt.size(); ++k)
                if (level[litVar(learnt[k])] > level[litVar(learnt[maxi])]) maxi = k;
            std::swap(learnt[1], learnt[maxi]);
            btLevel = level[litVar(learnt[1])];
        }
        for (int q : learnt) seen[litVar(q)] = 0;
        return {std::move(learnt), btLevel};
    }

    int pickBranchVar() {
        int best = -1;
        double bestAct = -1.0;
        for (int v = 0; v < nvars; ++v)
            if (assign[v] == 0 && activity[v] > bestAct) {
                bestAct = activity[v];
                best = v;
            }
        return best;
    }

    SatStatus run(const SatBudget& budget) {
        using clock = std::chrono::steady_clock;
        auto start = clock::now();
        if (propagate() != -1) return SatStatus::Unsat;
        std::uint64_t restart_num = 0;
        std::uint64_t conflict_target = conflicts + 64 * luby(restart_num);
        while (true) {
            int confl = propagate();
            if (confl != -1) {
                ++conflicts;
                if (decisionLevel() == 0) return SatStatus::Unsat;
                auto [learnt, btLevel] = analyze(confl);
                backtrack(btLevel);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], -1);
                } else {
                    clauses.push_back(std::move(learnt));
                    watchClause(clauses.size() - 1);
                    enqueue(clauses.back()[0], static_cast<int>(clauses.size() - 1));
                }
                var_inc /= 0.95;
                if (conflicts >= budget.max_conflicts) return SatStatus::BudgetExceeded;
                if ((conflicts & 1023) == 0 &&
                    std::chrono::duration<double>(clock::now() - start).count() >
                        budget.max_seconds)
                    return SatStatus::BudgetExceeded;
            } else {
                if (conflicts >= conflict_target) {
                    backtrack(0);
                    conflict_target = conflicts + 64 * luby(++restart_num);
                    continue;
                }
                int v = pickBranchVar();
                if (v == -1) return SatStatus::Sat;
                ++decisions;
                trail_lim.push_back(trail.size());
                enqueue(phase[v] == -1 ? 2 * v + 1 : 2 * v, -1);
            }
        }
    }
};

} // namespace

SatResult sat_solve(const CnfInstance& instance, const SatBudget& budget) {
    for (const auto& c : instance.clauses)
        for (int l : c)
            if (l == 0 || std::abs(l) > instance.num_vars)
                throw std::invalid_argument("literal out of range in CNF instance");

    Solver s(instance.num_vars);
    SatResult res;
    bool ok = true;
    for (const auto& c : instance.clauses) {
        if (c.empty()) {
            ok = false;
            break;
        }
        std::vector<int> lits;
        lits.reserve(c.size());
        for (int l : c) lits.push_back(toLit(l));
        if (!s.addClause(std::move(lits))) {
            ok = false;
            break;
        }
    }
    s.num_original = s.clauses.size();
    res.status = ok ? s.run(budget) : SatStatus::Unsat;
    res.conflicts = s.conflicts;
    res.decisions = s.decisions;
    res.propagations = s.propagations;
    if (res.status == SatStatus::Sat) {
        res.model.reserve(static_cast<std::size_t>(instance.num_vars));
        for (int v = 1; v <= instance.num_vars; ++v)
            res.model.push_back(s.assign[v - 1] == -1 ? -v : v);
        for (const auto& c : instance.clauses) {
            bool sat = false;
            for (int l : c)
                if (res.model[static_cast<std::size_t>(std::abs(l)) - 1] == l) sat = true;
            if (!sat) throw std::logic_error("sat_solve produced a non-model");
        }
    }
    return res;
}

} // namespace edp
