#pragma once

#include "edp/seqcore.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace edp {

/// Clause as signed DIMACS literals (variable ids are >= 1).
using Clause = std::vector<int>;

struct CnfInstance {
    int num_vars = 0;
    std::vector<Clause> clauses;
};

/// Receives clauses as they are generated. Streaming sinks let the very
/// large instances be emitted without materializing them.
class ClauseSink {
public:
    virtual ~ClauseSink() = default;
    virtual void add(std::span<const int> lits) = 0;
};

class CnfBuilder final : public ClauseSink {
public:
    explicit CnfBuilder(int num_vars) { cnf_.num_vars = num_vars; }
    void add(std::span<const int> lits) override {
        cnf_.clauses.emplace_back(lits.begin(), lits.end());
    }
    CnfInstance take() { return std::move(cnf_); }

private:
    CnfInstance cnf_;
};

class ClauseCounter final : public ClauseSink {
public:
    void add(std::span<const int>) override { ++count_; }
    std::uint64_t count() const { return count_; }

private:
    std::uint64_t count_ = 0;
};

enum class StateMode { OneHot, Binary };
enum class Problem { Edp1, Edp2 };

struct StreamlinerSpec {
    enum class Kind { Period, Walters, Mult };
    Kind kind;
    // period(p, t): a = p, b = t;  walters(w): a = w;  mult(m, l): a = m, b = l
    std::size_t a = 0;
    std::size_t b = 0;

    static StreamlinerSpec period(std::size_t p, std::size_t t) { return {Kind::Period, p, t}; }
    static StreamlinerSpec walters(std::size_t w) { return {Kind::Walters, w, 0}; }
    static StreamlinerSpec mult(std::size_t m, std::size_t l) { return {Kind::Mult, m, l}; }
};

struct EncodingConfig {
    std::size_t n = 1;
    int C = 1;
    Problem problem = Problem::Edp1;
    StateMode mode = StateMode::OneHot;
    std::vector<StreamlinerSpec> streamliners;
};

/// Variable layout. Sequence variables p_i get ids 1..n, the bad state
/// s_B gets n+1, and automaton state variables follow in (d, m, j|bit)
/// order for the tracked differences (d ascending).
class VarMap {
public:
    VarMap(std::size_t n, int C, StateMode mode, std::vector<std::size_t> tracked);

    std::size_t n() const { return n_; }
    int C() const { return C_; }
    StateMode mode() const { return mode_; }
    const std::vector<std::size_t>& tracked() const { return tracked_; }

    /// Layers per tracked difference d: m = 1 .. floor(n/d)+1.
    std::size_t layers(std::size_t d) const { return n_ / d + 1; }

    int p(std::size_t i) const { return static_cast<int>(i); }
    int bad() const { return static_cast<int>(n_) + 1; }

    /// One-hot state variable for s_j^{(m,d)}, -C <= j <= C.
    int state(std::size_t d, std::size_t m, int j) const;
    /// Binary-mode bit variable for layer (m,d), bit 0 = least significant.
    int state_bit(std::size_t d, std::size_t m, int bit) const;

    int bits_per_layer() const { return bits_; }
    int states_per_layer() const { return 2 * C_ + 1; }
    int num_vars() const { return num_vars_; }

private:
    std::size_t track_base(std::size_t d) const;

    std::size_t n_;
    int C_;
    StateMode mode_;
    int bits_;
    int num_vars_;
    std::vector<std::size_t> tracked_;
    std::vector<std::size_t> base_; // parallel to tracked_
};

/// Automaton track for difference d: initial state, +-1 transitions, and
/// the bad-state implications at the band edges.
void encode_track(std::size_t n, int C, std::size_t d, const VarMap& vm, ClauseSink& sink);

/// Exactly-one-state clauses for every layer of the given tracked d.
/// In binary mode this instead forbids the unused bit patterns.
void encode_uniqueness(std::size_t n, int C, std::size_t d, const VarMap& vm, ClauseSink& sink);

/// XNOR gate p_{i*d} <-> (p_i <-> p_d). Four ternary clauses for i != d,
/// two for the square case i == d.
void encode_mult_gate(std::size_t i, std::size_t d, const VarMap& vm, ClauseSink& sink);

void streamliner_clauses(const StreamlinerSpec& spec, std::size_t n, const VarMap& vm,
                         ClauseSink& sink);

/// Streaming encoders; the returned VarMap describes the variable layout.
VarMap encode_edp1(const EncodingConfig& cfg, ClauseSink& sink);
VarMap encode_edp2(const EncodingConfig& cfg, ClauseSink& sink);

/// Convenience wrappers that materialize the instance.
std::pair<CnfInstance, VarMap> encode_edp1(const EncodingConfig& cfg);
std::pair<CnfInstance, VarMap> encode_edp2(const EncodingConfig& cfg);
std::pair<CnfInstance, VarMap> encode(const EncodingConfig& cfg);

void write_dimacs(const CnfInstance& instance, std::ostream& out);
std::string write_dimacs(const CnfInstance& instance);

/// Streams one DIMACS clause line per add(); the header must be written
/// by the caller (clause count from a ClauseCounter pass).
class DimacsClauseWriter final : public ClauseSink {
public:
    explicit DimacsClauseWriter(std::ostream& out) : out_(out) {}
    void add(std::span<const int> lits) override;

private:
    std::ostream& out_;
};

void write_varmap(const VarMap& vm, std::ostream& out);
std::string write_varmap(const VarMap& vm);

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a model as raw signed integers and/or DIMACS "v" lines; comment
/// ('c') and status ('s') lines are skipped, terminating 0s dropped.
std::vector<int> parse_model(std::string_view text);

/// Recovers the sequence from the p_i assignments; state variables are
/// ignored. Every p_i must be assigned exactly once.
Sequence decode_model(const std::vector<int>& model, std::size_t n);

/// Sequence length recorded in a varmap file (largest i of the "p" lines).
std::size_t varmap_sequence_length(std::string_view text);

/// Differences whose automaton is instantiated: floor(n/d) > C. Shorter
/// HAPs cannot leave the band.
std::vector<std::size_t> tracked_differences(std::size_t n, int C);

} // namespace edp
