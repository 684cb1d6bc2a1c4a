#include "edp/search.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edp {

namespace {

using clock_type = std::chrono::steady_clock;

enum class Dfs { Found, Exhausted, Stopped };

struct Shared {
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> budget_hit{false};
    std::uint64_t max_nodes;
    clock_type::time_point deadline;

    Shared(const SearchBudget& b)
        : max_nodes(b.max_nodes),
          deadline(clock_type::now() +
                   std::chrono::duration_cast<clock_type::duration>(
                       std::chrono::duration<double>(b.max_seconds))) {}

    // one node expansion; true means the caller must unwind
    bool tick() {
        std::uint64_t c = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (c > max_nodes ||
            ((c & 4095) == 0 && clock_type::now() > deadline)) {
            budget_hit.store(true, std::memory_order_relaxed);
            stop.store(true, std::memory_order_relaxed);
        }
        return stop.load(std::memory_order_relaxed);
    }
};

struct Edp1Worker {
    std::size_t n;
    long long C;
    const std::vector<std::vector<std::uint32_t>>& divs;
    Shared& sh;
    std::vector<long long> sums;   // per difference d
    std::vector<std::int8_t> vals; // 1-based
    std::size_t max_depth = 0;

    Edp1Worker(std::size_t n, long long C, const std::vector<std::vector<std::uint32_t>>& divs,
               Shared& sh)
        : n(n), C(C), divs(divs), sh(sh), sums(n + 1, 0), vals(n + 1, 0) {}

    Dfs dfs(std::size_t k) {
        if (k > n) return Dfs::Found;
        max_depth = std::max(max_depth, k);
        bool stopped = false;
        for (int s : {+1, -1}) {
            if (sh.tick()) return Dfs::Stopped;
            bool ok = true;
            for (auto d : divs[k]) {
                sums[d] += s;
                if (std::llabs(sums[d]) > C) ok = false;
            }
            if (ok) {
                vals[k] = static_cast<std::int8_t>(s);
                Dfs r = dfs(k + 1);
                if (r == Dfs::Found) return r;
                if (r == Dfs::Stopped) stopped = true;
            }
            for (auto d : divs[k]) sums[d] -= s;
            if (stopped) return Dfs::Stopped;
        }
        return Dfs::Exhausted;
    }
};

struct Edp2Worker {
    std::size_t n;
    long long C;
    const std::vector<std::size_t>& spf;
    Shared& sh;
    const std::vector<std::int8_t>* forced = nullptr; // per prime position, 0 = free
    std::vector<std::int8_t> vals;
    std::size_t max_depth = 0;

    Edp2Worker(std::size_t n, long long C, const std::vector<std::size_t>& spf, Shared& sh)
        : n(n), C(C), spf(spf), sh(sh), vals(n + 1, 0) {}

    bool branches(std::size_t k) const {
        return k >= 2 && spf[k] == k && (!forced || (*forced)[k] == 0);
    }

    Dfs dfs(std::size_t k, long long sum) {
        if (k > n) return Dfs::Found;
        max_depth = std::max(max_depth, k);
        if (!branches(k)) {
            if (sh.tick()) return Dfs::Stopped;
            int v;
            if (k == 1)
                v = 1;
            else if (spf[k] == k)
                v = (*forced)[k];
            else
                v = vals[spf[k]] * vals[k / spf[k]];
            long long ns = sum + v;
            if (std::llabs(ns) > C) return Dfs::Exhausted;
            vals[k] = static_cast<std::int8_t>(v);
            return dfs(k + 1, ns);
        }
        bool stopped = false;
        for (int s : {+1, -1}) {
            if (sh.tick()) return Dfs::Stopped;
            long long ns = sum + s;
            if (std::llabs(ns) <= C) {
                vals[k] = static_cast<std::int8_t>(s);
                Dfs r = dfs(k + 1, ns);
                if (r == Dfs::Found) return r;
                if (r == Dfs::Stopped) stopped = true;
            }
            if (stopped) return Dfs::Stopped;
        }
        return Dfs::Exhausted;
    }
};

Sequence to_sequence(const std::vector<std::int8_t>& vals, std::size_t n) {
    Sequence x;
    for (std::size_t i = 1; i <= n; ++i) x.push_back(vals[i]);
    return x;
}

struct MergeResult {
    Dfs status = Dfs::Exhausted;
    std::optional<Sequence> witness;
    std::size_t max_depth = 0;
};

// prefix-splitting driver shared by both searches: `enumerate` yields the
// root tasks, `run_task` explores one task and reports its result
template <typename RunTask>
MergeResult run_parallel(std::size_t num_tasks, int threads, Shared& sh, RunTask run_task) {
    std::vector<int> status(num_tasks, -1);
    std::vector<std::optional<Sequence>> wits(num_tasks);
    std::vector<std::size_t> depths(num_tasks, 0);
#ifdef _OPENMP
    #pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (long long t = 0; t < static_cast<long long>(num_tasks); ++t) {
        if (sh.stop.load(std::memory_order_relaxed) &&
            !sh.budget_hit.load(std::memory_order_relaxed)) {
            status[t] = static_cast<int>(Dfs::Stopped);
            continue;
        }
        auto [st, w, depth] = run_task(static_cast<std::size_t>(t));
        status[t] = static_cast<int>(st);
        wits[t] = std::move(w);
        depths[t] = depth;
        if (st == Dfs::Found) sh.stop.store(true, std::memory_order_relaxed);
    }
    (void)threads;
    MergeResult out;
    bool any_stopped = false;
    for (std::size_t t = 0; t < num_tasks; ++t) {
        out.max_depth = std::max(out.max_depth, depths[t]);
        if (status[t] == static_cast<int>(Dfs::Found) && !out.witness) {
            out.status = Dfs::Found;
            out.witness = wits[t];
        }
        if (status[t] == static_cast<int>(Dfs::Stopped)) any_stopped = true;
    }
    if (out.status != Dfs::Found && any_stopped) out.status = Dfs::Stopped;
    return out;
}

SearchOutcome finish(const MergeResult& merged, const Shared& sh, clock_type::time_point start) {
    SearchOutcome out;
    out.stats.nodes = sh.nodes.load();
    out.stats.max_depth = merged.max_depth;
    out.stats.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    if (merged.status == Dfs::Found) {
        out.status = SearchStatus::Found;
        out.witness = merged.witness;
    } else if (merged.status == Dfs::Exhausted && !sh.budget_hit.load()) {
        out.status = SearchStatus::Exhausted;
    } else {
        out.status = SearchStatus::BudgetExceeded;
    }
    return out;
}

int split_depth(int threads) {
    int s = 0;
    while ((1 << s) < 8 * threads) ++s;
    return s;
}

} // namespace

SearchOutcome search_edp1(std::size_t n, int C, const SearchBudget& budget) {
    if (n < 1 || C < 1) throw std::invalid_argument("need n >= 1 and C >= 1");
    auto start = clock_type::now();
    std::vector<std::vector<std::uint32_t>> divs(n + 1);
    for (std::size_t d = 1; d <= n; ++d)
        for (std::size_t k = d; k <= n; k += d) divs[k].push_back(static_cast<std::uint32_t>(d));

    Shared sh(budget);
    MergeResult merged;
    int threads = std::max(1, budget.threads);
    if (threads == 1) {
        Edp1Worker w(n, C, divs, sh);
        Dfs r = w.dfs(1);
        merged.status = r;
        merged.max_depth = w.max_depth;
        if (r == Dfs::Found) merged.witness = to_sequence(w.vals, n);
    } else {
        // enumerate viable sign prefixes of length s, then split across threads
        std::size_t s = std::min(n, static_cast<std::size_t>(split_depth(threads)));
        std::vector<std::vector<std::int8_t>> prefixes;
        Edp1Worker gen(n, C, divs, sh);
        auto collect = [&](auto&& self, std::size_t k) -> void {
            if (k > s) {
                prefixes.emplace_back(gen.vals.begin() + 1, gen.vals.begin() + 1 + s);
                return;
            }
            for (int v : {+1, -1}) {
                bool ok = true;
                for (auto d : divs[k]) {
                    gen.sums[d] += v;
                    if (std::llabs(gen.sums[d]) > C) ok = false;
                }
                if (ok) {
                    gen.vals[k] = static_cast<std::int8_t>(v);
                    self(self, k + 1);
                }
                for (auto d : divs[k]) gen.sums[d] -= v;
            }
        };
        collect(collect, 1);
        merged = run_parallel(prefixes.size(), threads, sh, [&](std::size_t t) {
            Edp1Worker w(n, C, divs, sh);
            for (std::size_t k = 1; k <= s; ++k) {
                int v = prefixes[t][k - 1];
                w.vals[k] = static_cast<std::int8_t>(v);
                for (auto d : divs[k]) w.sums[d] += v;
            }
            Dfs r = w.dfs(s + 1);
            std::optional<Sequence> wit;
            if (r == Dfs::Found) wit = to_sequence(w.vals, n);
            return std::tuple{r, std::move(wit), w.max_depth};
        });
    }
    SearchOutcome out = finish(merged, sh, start);
    if (out.status == SearchStatus::Found &&
        discrepancy(*out.witness).value > C)
        throw std::logic_error("search_edp1 witness failed verification");
    return out;
}

SearchOutcome search_edp2(std::size_t n, int C, const SearchBudget& budget) {
    if (n < 1 || C < 1) throw std::invalid_argument("need n >= 1 and C >= 1");
    auto start = clock_type::now();
    auto spf = smallest_prime_factor_sieve(n);
    auto primes = primes_up_to(n);

    Shared sh(budget);
    MergeResult merged;
    int threads = std::max(1, budget.threads);
    if (threads == 1 || primes.empty()) {
        Edp2Worker w(n, C, spf, sh);
        Dfs r = w.dfs(1, 0);
        merged.status = r;
        merged.max_depth = w.max_depth;
        if (r == Dfs::Found) merged.witness = to_sequence(w.vals, n);
    } else {
        std::size_t t = std::min(primes.size(), static_cast<std::size_t>(split_depth(threads)));
        std::size_t num_tasks = std::size_t{1} << t;
        merged = run_parallel(num_tasks, threads, sh, [&](std::size_t task) {
            std::vector<std::int8_t> forced(n + 1, 0);
            for (std::size_t i = 0; i < t; ++i)
                forced[primes[i]] = (task >> i) & 1 ? -1 : +1;
            Edp2Worker w(n, C, spf, sh);
            w.forced = &forced;
            Dfs r = w.dfs(1, 0);
            std::optional<Sequence> wit;
            if (r == Dfs::Found) wit = to_sequence(w.vals, n);
            return std::tuple{r, std::move(wit), w.max_depth};
        });
    }
    SearchOutcome out = finish(merged, sh, start);
    if (out.status == SearchStatus::Found) {
        const Sequence& x = *out.witness;
        if (x.at(1) != 1 || is_completely_multiplicative(x) ||
            discrepancy(x).value > C)
            throw std::logic_error("search_edp2 witness failed verification");
    }
    return out;
}

ThresholdReport threshold(Problem problem, int C, const SearchBudget& budget) {
    auto run = [&](std::size_t n) {
        return problem == Problem::Edp1 ? search_edp1(n, C, budget)
                                        : search_edp2(n, C, budget);
    };
    ThresholdReport rep;
    std::size_t lo = 0, hi = 0; // largest Found / smallest Exhausted
    for (std::size_t n = 1;; n *= 2) {
        SearchOutcome r = run(n);
        rep.nodes += r.stats.nodes;
        if (r.status == SearchStatus::Found) {
            lo = n;
        } else if (r.status == SearchStatus::Exhausted) {
            hi = n;
            break;
        } else {
            rep.longest_found = lo;
            rep.smallest_unknown = n;
            return rep;
        }
    }
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        SearchOutcome r = run(mid);
        rep.nodes += r.stats.nodes;
        if (r.status == SearchStatus::Found) {
            lo = mid;
        } else if (r.status == SearchStatus::Exhausted) {
            hi = mid;
        } else {
            rep.longest_found = lo;
            rep.smallest_unknown = mid;
            return rep;
        }
    }
    rep.value = hi;
    rep.longest_found = lo;
    return rep;
}

} // namespace edp
