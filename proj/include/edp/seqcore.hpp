#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace edp {

/// A ±1 sequence, 1-indexed as in all HAP formulas. Index 0 does not exist.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::vector<std::int8_t> signs);

    std::size_t size() const { return signs_.size(); }
    bool empty() const { return signs_.empty(); }

    /// 1-based access; returns +1 or -1.
    int at(std::size_t i) const { return signs_[i - 1]; }

    void push_back(int sign);
    void pop_back() { signs_.pop_back(); }

    Sequence prefix(std::size_t len) const;

    bool operator==(const Sequence&) const = default;

private:
    std::vector<std::int8_t> signs_;
};

/// A homogeneous arithmetic progression d, 2d, ..., md together with the
/// signed sum of the sequence along it. d = m = 0 is the sentinel witness
/// of the empty sequence.
struct HapWitness {
    std::size_t d = 0;
    std::size_t m = 0;
    long long sum = 0;
};

struct DiscrepancyReport {
    long long value = 0;
    HapWitness witness;
};

/// Exact discrepancy max_{d,m} |sum_{i<=m} x_{i*d}|, with the witness that
/// attains it (smallest d, then smallest m). Parallelized over d; agrees
/// with discrepancy_serial bit for bit.
DiscrepancyReport discrepancy(const Sequence& x);

/// Serial reference implementation, kept for testing and benchmarking.
DiscrepancyReport discrepancy_serial(const Sequence& x);

/// max_m |sum_{i<=m} x_i|, i.e. discrepancy restricted to d = 1.
long long prefix_discrepancy(const Sequence& x);

/// Extracts (x_d, x_{2d}, ..., x_{floor(n/d)*d}). Requires 1 <= d <= n.
Sequence hap_subsequence(const Sequence& x, std::size_t d);

struct MultViolation {
    std::size_t d = 0;
    std::size_t i = 0;
};

/// nullopt when x_{i*d} = x_i * x_d for all i, d >= 2 with i*d <= n;
/// otherwise the lexicographically smallest violating (d, i).
std::optional<MultViolation> is_completely_multiplicative(const Sequence& x);

/// Sign chosen at each prime position. Must cover every prime <= n when
/// extending to length n.
using PrimeAssignment = std::map<std::size_t, int>;

/// The multiplicative extension: x_1 = +1, x_k = product of prime signs
/// over the factorization of k with multiplicity.
Sequence extend_multiplicative(const PrimeAssignment& pa, std::size_t n);

/// mu3(i): +1 if i = 1 mod 3, -1 if i = 2 mod 3, -mu3(i/3) otherwise.
int walters_value(std::size_t i);

/// The improved Walters sequence (mu3(1), ..., mu3(n)).
Sequence walters(std::size_t n);

/// Largest L <= n with discrepancy(prefix L) <= C; 0 if even x_1 breaks it.
std::size_t longest_good_prefix(const Sequence& x, long long C);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what);
    std::size_t line;
    std::size_t column;
};

/// Accepts '+'/'-' glyph runs and whitespace-separated tokens 1/+1/-1,
/// in any mixture; '#' starts a comment running to end of line.
Sequence parse_sequence(std::string_view text);

/// '+'/'-' glyphs in rows of 100. parse_sequence(format_sequence(x)) == x.
std::string format_sequence(const Sequence& x);

std::vector<std::size_t> primes_up_to(std::size_t n);
bool is_prime(std::size_t n);

/// Smallest prime factor for every index 2..n (index 0/1 unused).
std::vector<std::size_t> smallest_prime_factor_sieve(std::size_t n);

} // namespace edp
