#include "edp/search.hpp"

#include <doctest.h>

#include <random>

using namespace edp;

namespace {

// exhaustive truth-table oracle
bool oracle_sat(const CnfInstance& cnf) {
    const int V = cnf.num_vars;
    for (std::uint64_t bits = 0; bits < (1ull << V); ++bits) {
        bool ok = true;
        for (const auto& c : cnf.clauses) {
            bool sat = false;
            for (int l : c) {
                int v = std::abs(l);
                bool val = (bits >> (v - 1)) & 1;
                if ((l > 0) == val) sat = true;
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

Sequence nth_sequence(std::size_t n, std::uint32_t bits) {
    Sequence x;
    for (std::size_t i = 0; i < n; ++i) x.push_back((bits >> i) & 1 ? -1 : +1);
    return x;
}

bool exists_by_enumeration(std::size_t n, int C) {
    for (std::uint32_t b = 0; b < (1u << n); ++b)
        if (discrepancy(nth_sequence(n, b)).value <= C) return true;
    return false;
}

} // namespace

TEST_CASE("sat_solve trivial cases") {
    CHECK(sat_solve({1, {{1}, {-1}}}).status == SatStatus::Unsat);
    CHECK(sat_solve({0, {}}).status == SatStatus::Sat);
    CHECK(sat_solve({2, {{1, 2}, {-1, 2}, {1, -2}}}).status == SatStatus::Sat);
    CHECK(sat_solve({1, {{}}}).status == SatStatus::Unsat);
    CHECK_THROWS_AS((void)sat_solve({1, {{2}}}), std::invalid_argument);
}

TEST_CASE("sat_solve agrees with the truth-table oracle on random instances") {
    std::mt19937 rng(42);
    int sat_count = 0;
    for (int rep = 0; rep < 300; ++rep) {
        int V = 1 + static_cast<int>(rng() % 12);
        int K = 1 + static_cast<int>(rng() % (3 * V));
        CnfInstance cnf;
        cnf.num_vars = V;
        for (int k = 0; k < K; ++k) {
            Clause c;
            int len = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < len; ++i) {
                int v = 1 + static_cast<int>(rng() % V);
                c.push_back(rng() & 1 ? v : -v);
            }
            cnf.clauses.push_back(std::move(c));
        }
        bool expected = oracle_sat(cnf);
        auto res = sat_solve(cnf);
        REQUIRE(res.status != SatStatus::BudgetExceeded);
        CHECK((res.status == SatStatus::Sat) == expected);
        sat_count += expected;
    }
    CHECK(sat_count > 0);
    CHECK(sat_count < 300);
}

TEST_CASE("sat_solve on the encoded milestones") {
    CHECK(sat_solve(encode({11, 1, Problem::Edp1}).first).status == SatStatus::Sat);
    CHECK(sat_solve(encode({12, 1, Problem::Edp1}).first).status == SatStatus::Unsat);
    CHECK(sat_solve(encode({9, 1, Problem::Edp2}).first).status == SatStatus::Sat);
    CHECK(sat_solve(encode({10, 1, Problem::Edp2}).first).status == SatStatus::Unsat);
}

TEST_CASE("sat_solve budget") {
    SatBudget tiny;
    tiny.max_conflicts = 1;
    auto res = sat_solve(encode({12, 1, Problem::Edp1}).first, tiny);
    CHECK(res.status == SatStatus::BudgetExceeded);
}

TEST_CASE("search_edp1 basics") {
    auto r = search_edp1(1, 1);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.witness->size() == 1);

    CHECK(search_edp1(11, 1).status == SearchStatus::Found);
    CHECK(search_edp1(12, 1).status == SearchStatus::Exhausted);
    CHECK_THROWS_AS((void)search_edp1(0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)search_edp1(5, 0), std::invalid_argument);
}

TEST_CASE("search_edp1 agrees with full enumeration") {
    for (int C : {1, 2}) {
        for (std::size_t n = 1; n <= 16; ++n) {
            bool expected = exists_by_enumeration(n, C);
            auto r = search_edp1(n, C);
            REQUIRE(r.status != SearchStatus::BudgetExceeded);
            CHECK((r.status == SearchStatus::Found) == expected);
            if (r.status == SearchStatus::Found)
                CHECK(discrepancy(*r.witness).value <= C);
        }
    }
}

TEST_CASE("search_edp2 agrees with enumeration over prime signs") {
    for (int C : {1, 2}) {
        for (std::size_t n : {1, 5, 9, 10, 17, 24, 30}) {
            auto primes = primes_up_to(n);
            bool expected = false;
            for (std::uint32_t bits = 0; bits < (1u << primes.size()); ++bits) {
                PrimeAssignment pa;
                for (std::size_t i = 0; i < primes.size(); ++i)
                    pa[primes[i]] = (bits >> i) & 1 ? -1 : 1;
                if (prefix_discrepancy(extend_multiplicative(pa, n)) <= C) {
                    expected = true;
                    break;
                }
            }
            auto r = search_edp2(n, C);
            REQUIRE(r.status != SearchStatus::BudgetExceeded);
            CHECK((r.status == SearchStatus::Found) == expected);
        }
    }
}

TEST_CASE("search_edp2 witnesses are multiplicative") {
    auto r = search_edp2(9, 1);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(!is_completely_multiplicative(*r.witness));
    CHECK(r.witness->at(1) == 1);
    CHECK(prefix_discrepancy(*r.witness) <= 1);
}

TEST_CASE("parallel search agrees with single-threaded status") {
    SearchBudget par;
    par.threads = 4;
    for (std::size_t n : {11, 12}) {
        CHECK(search_edp1(n, 1, par).status == search_edp1(n, 1).status);
        CHECK(search_edp2(n, 1, par).status == search_edp2(n, 1).status);
    }
}

TEST_CASE("budget truncation never reports Exhausted") {
    SearchBudget tiny;
    tiny.max_nodes = 4;
    CHECK(search_edp1(12, 1, tiny).status == SearchStatus::BudgetExceeded);
    CHECK(search_edp2(10, 1, tiny).status == SearchStatus::BudgetExceeded);
}

TEST_CASE("thresholds reproduce the known small bounds") {
    auto e1 = threshold(Problem::Edp1, 1);
    REQUIRE(e1.value.has_value());
    CHECK(*e1.value == 12);
    CHECK(e1.longest_found == 11);

    auto e2 = threshold(Problem::Edp2, 1);
    REQUIRE(e2.value.has_value());
    CHECK(*e2.value == 10);

    // first exhausted length is never prime
    CHECK(!is_prime(*e1.value));
    CHECK(!is_prime(*e2.value));
}

TEST_CASE("threshold reports a bracket when the budget runs out") {
    // 30 nodes: enough to find the length-11 witness (22 nodes) but not to
    // exhaust length 12 (66 nodes)
    SearchBudget tiny;
    tiny.max_nodes = 30;
    auto r = threshold(Problem::Edp1, 1, tiny);
    CHECK(!r.value.has_value());
    CHECK(r.smallest_unknown.has_value());
    CHECK(r.longest_found < *r.smallest_unknown);
}

TEST_CASE("E2(2) = 247") {
    auto r246 = search_edp2(246, 2);
    REQUIRE(r246.status == SearchStatus::Found);
    CHECK(prefix_discrepancy(*r246.witness) <= 2);
    CHECK(search_edp2(247, 2).status == SearchStatus::Exhausted);
    CHECK(!is_prime(247));
}
