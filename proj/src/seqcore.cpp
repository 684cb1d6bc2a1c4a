#include "edp/seqcore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edp {

Sequence::Sequence(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
    for (auto s : signs_)
        if (s != 1 && s != -1)
            throw std::invalid_argument("sequence entry must be +1 or -1");
}

void Sequence::push_back(int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("sequence entry must be +1 or -1");
    signs_.push_back(static_cast<std::int8_t>(sign));
}

Sequence Sequence::prefix(std::size_t len) const {
    if (len > size())
        throw std::invalid_argument("prefix longer than sequence");
    return Sequence(std::vector<std::int8_t>(signs_.begin(), signs_.begin() + len));
}

namespace {

// value first, then smallest d, then smallest m
bool better(const DiscrepancyReport& a, const DiscrepancyReport& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.witness.d != b.witness.d) return a.witness.d < b.witness.d;
    return a.witness.m < b.witness.m;
}

DiscrepancyReport scan_difference(const Sequence& x, std::size_t d) {
    DiscrepancyReport best;
    long long s = 0;
    const std::size_t M = x.size() / d;
    for (std::size_t m = 1; m <= M; ++m) {
        s += x.at(m * d);
        long long a = std::llabs(s);
        if (a > best.value) best = {a, {d, m, s}};
    }
    return best;
}

} // namespace

DiscrepancyReport discrepancy_serial(const Sequence& x) {
    DiscrepancyReport best;
    for (std::size_t d = 1; d <= x.size(); ++d) {
        DiscrepancyReport r = scan_difference(x, d);
        if (better(r, best)) best = r;
    }
    return best;
}

DiscrepancyReport discrepancy(const Sequence& x) {
    const std::size_t n = x.size();
    DiscrepancyReport best;
#ifdef _OPENMP
    #pragma omp parallel
    {
        DiscrepancyReport local;
        #pragma omp for schedule(dynamic, 64) nowait
        for (long long d = 1; d <= static_cast<long long>(n); ++d) {
            DiscrepancyReport r = scan_difference(x, static_cast<std::size_t>(d));
            if (better(r, local)) local = r;
        }
        #pragma omp critical
        {
            if (better(local, best)) best = local;
        }
    }
#else
    best = discrepancy_serial(x);
#endif
    return best;
}

long long prefix_discrepancy(const Sequence& x) {
    long long s = 0, best = 0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        s += x.at(i);
        best = std::max(best, std::llabs(s));
    }
    return best;
}

Sequence hap_subsequence(const Sequence& x, std::size_t d) {
    if (d < 1 || d > x.size())
        throw std::invalid_argument("common difference out of range");
    Sequence r;
    for (std::size_t i = d; i <= x.size(); i += d) r.push_back(x.at(i));
    return r;
}

std::optional<MultViolation> is_completely_multiplicative(const Sequence& x) {
    const std::size_t n = x.size();
    for (std::size_t d = 2; d * 2 <= n; ++d)
        for (std::size_t i = 2; i * d <= n; ++i)
            if (x.at(i * d) != x.at(i) * x.at(d)) return MultViolation{d, i};
    return std::nullopt;
}

Sequence extend_multiplicative(const PrimeAssignment& pa, std::size_t n) {
    auto spf = smallest_prime_factor_sieve(n);
    std::vector<std::int8_t> out(n);
    if (n >= 1) out[0] = 1;
    for (std::size_t k = 2; k <= n; ++k) {
        std::size_t p = spf[k];
        auto it = pa.find(p);
        if (it == pa.end())
            throw std::invalid_argument("prime assignment missing prime " + std::to_string(p));
        if (it->second != 1 && it->second != -1)
            throw std::invalid_argument("prime sign must be +1 or -1");
        out[k - 1] = static_cast<std::int8_t>(out[k / p - 1] * it->second);
    }
    return Sequence(std::move(out));
}

int walters_value(std::size_t i) {
    int sign = 1;
    while (i % 3 == 0) {
        i /= 3;
        sign = -sign;
    }
    return i % 3 == 1 ? sign : -sign;
}

Sequence walters(std::size_t n) {
    Sequence r;
    for (std::size_t i = 1; i <= n; ++i) r.push_back(walters_value(i));
    return r;
}

std::size_t longest_good_prefix(const Sequence& x, long long C) {
    if (C < 1) throw std::invalid_argument("bound must be >= 1");
    const std::size_t n = x.size();
    std::vector<long long> sums(n + 1, 0);
    for (std::size_t L = 1; L <= n; ++L) {
        // every HAP sum that changes at prefix length L has d | L
        for (std::size_t d = 1; d * d <= L; ++d) {
            if (L % d != 0) continue;
            sums[d] += x.at(L);
            if (std::llabs(sums[d]) > C) return L - 1;
            std::size_t e = L / d;
            if (e != d) {
                sums[e] += x.at(L);
                if (std::llabs(sums[e]) > C) return L - 1;
            }
        }
    }
    return n;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + what),
      line(line), column(column) {}

Sequence parse_sequence(std::string_view text) {
    Sequence r;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < n) {
        char c = text[i];
        if (c == '#') {
            while (i < n && text[i] != '\n') advance(1);
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '+' || c == '-') {
            if (i + 1 < n && text[i + 1] == '1') {
                r.push_back(c == '+' ? 1 : -1);
                advance(2);
            } else {
                r.push_back(c == '+' ? 1 : -1);
                advance(1);
            }
        } else if (c == '1') {
            r.push_back(1);
            advance(1);
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        // tokens must be delimited; "+1" followed directly by a digit is bad
        if (i < n && std::isdigit(static_cast<unsigned char>(text[i])))
            throw ParseError(line, col, "unexpected digit");
    }
    return r;
}

std::string format_sequence(const Sequence& x) {
    std::string out;
    out.reserve(x.size() + x.size() / 100 + 1);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        out += x.at(i) > 0 ? '+' : '-';
        if (i % 100 == 0) out += '\n';
    }
    if (!x.empty() && x.size() % 100 != 0) out += '\n';
    return out;
}

std::vector<std::size_t> primes_up_to(std::size_t n) {
    std::vector<std::size_t> primes;
    std::vector<bool> comp(n + 1, false);
    for (std::size_t k = 2; k <= n; ++k) {
        if (comp[k]) continue;
        primes.push_back(k);
        for (std::size_t j = k * k; j <= n; j += k) comp[j] = true;
    }
    return primes;
}

bool is_prime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::size_t> smallest_prime_factor_sieve(std::size_t n) {
    std::vector<std::size_t> spf(n + 1, 0);
    for (std::size_t k = 2; k <= n; ++k) {
        if (spf[k] != 0) continue;
        for (std::size_t j = k; j <= n; j += k)
            if (spf[j] == 0) spf[j] = k;
    }
    return spf;
}

} // namespace edp
