#pragma once

#include "edp/encoder.hpp"

#include <cstdint>
#include <vector>

namespace edp {

struct SatBudget {
    std::uint64_t max_conflicts = UINT64_MAX;
    double max_seconds = 3600.0;
};

enum class SatStatus { Sat, Unsat, BudgetExceeded };

struct SatResult {
    SatStatus status = SatStatus::BudgetExceeded;
    /// Signed literal per variable 1..V when status == Sat.
    std::vector<int> model;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
};

/// Conflict-driven solver with watched-literal propagation, 1UIP learning,
/// Luby restarts and phase saving. Deterministic for a fixed budget.
/// A Sat model is checked against every input clause before it is returned.
SatResult sat_solve(const CnfInstance& instance, const SatBudget& budget = {});

} // namespace edp
