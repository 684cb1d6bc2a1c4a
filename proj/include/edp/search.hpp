#pragma once

#include "edp/encoder.hpp"
#include "edp/sat.hpp"
#include "edp/seqcore.hpp"

#include <cstdint>
#include <optional>

namespace edp {

struct SearchBudget {
    std::uint64_t max_nodes = 1'000'000'000;
    double max_seconds = 3600.0;
    int threads = 1;
};

enum class SearchStatus { Found, Exhausted, BudgetExceeded };

struct SearchStats {
    std::uint64_t nodes = 0;
    std::size_t max_depth = 0;
    double seconds = 0.0;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::BudgetExceeded;
    std::optional<Sequence> witness;
    SearchStats stats;
};

/// Backtracking over x_1..x_n (+1 tried first), every d-HAP partial sum
/// maintained incrementally and pruned at the [-C, C] band. Exhausted is
/// only reported when the whole space was covered. Found witnesses are
/// re-verified through discrepancy() before being returned.
SearchOutcome search_edp1(std::size_t n, int C, const SearchBudget& budget = {});

/// Branches only on prime positions in increasing order; composite
/// positions are products of earlier decisions. Prunes on the d=1 prefix
/// sums, which bound the full discrepancy for multiplicative sequences.
SearchOutcome search_edp2(std::size_t n, int C, const SearchBudget& budget = {});

struct ThresholdReport {
    /// Smallest length at which the search exhausts, when both sides
    /// completed within budget.
    std::optional<std::size_t> value;
    std::size_t longest_found = 0;
    std::optional<std::size_t> smallest_unknown;
    std::uint64_t nodes = 0;
};

ThresholdReport threshold(Problem problem, int C, const SearchBudget& budget = {});

} // namespace edp
