#pragma once

#include "edp/search.hpp"
#include "edp/seqcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace edp {

/// A length p-1 sequence whose rotated difference patterns all stay
/// within +-cprime and sum to zero. p = 1 carries the empty witness.
struct ModPWitness {
    std::size_t p = 1;
    int cprime = 1;
    Sequence y;
};

struct ModPViolation {
    std::size_t d = 0;
    std::size_t m = 0; // 0 when the full pattern sum is nonzero
    long long sum = 0;
};

/// nullopt = pass. For every d in [1, p-1], with q = p / gcd(d, p), the
/// partial sums of (y_{d mod p}, y_{2d mod p}, ...) stay within
/// [-cprime, cprime] for m < q and the full sum over i = 1..q-1 is zero.
std::optional<ModPViolation> check_disc_mod_p(const Sequence& y, std::size_t p, int cprime);

struct ModPResult {
    SearchStatus status = SearchStatus::BudgetExceeded;
    std::optional<ModPWitness> witness;
    SearchStats stats;
};

/// Depth-first search over y_1..y_{p-1} with incremental band pruning plus
/// parity/cancellation feasibility of the sum-zero condition. Deterministic
/// for a fixed budget.
ModPResult solve_disc_mod_p(std::size_t p, int cprime, const SearchBudget& budget = {});

/// Interleaves the witness with a base sequence: |z| rows of
/// (y_1, ..., y_{p-1}, z_j). The result has length p*|z| and discrepancy
/// between disc(z) and disc(z) + cprime.
Sequence compose(const Sequence& z, const ModPWitness& w);

struct CompositionPlan {
    std::vector<ModPWitness> steps;
};

struct AmplifyResult {
    Sequence x;
    long long claimed = 0; // disc(z) + sum of step bounds
    long long actual = 0;  // re-verified discrepancy
};

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Applies every step of the plan and re-verifies the claimed bound by
/// direct discrepancy evaluation; throws ConstructionError if the true
/// discrepancy exceeds the claim.
AmplifyResult amplify(const Sequence& z, const CompositionPlan& plan);

/// Witness file: header "p <p> C <cprime>" followed by a sequence line.
std::string format_witness(const ModPWitness& w);
ModPWitness parse_witness(std::string_view text);

/// Directory of witness files modp_<p>_<cprime>.txt; first solutions are
/// persisted and reused.
class WitnessCache {
public:
    explicit WitnessCache(std::string dir) : dir_(std::move(dir)) {}
    std::optional<ModPWitness> load(std::size_t p, int cprime) const;
    void store(const ModPWitness& w) const;

private:
    std::string path(std::size_t p, int cprime) const;
    std::string dir_;
};

} // namespace edp
