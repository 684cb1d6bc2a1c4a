#include "edp/encoder.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <set>
#include <sstream>

namespace edp {

namespace {

int bits_for(int C) {
    int states = 2 * C + 1;
    int b = 0;
    while ((1 << b) < states) ++b;
    return b;
}

void emit(ClauseSink& sink, std::initializer_list<int> lits) {
    sink.add(std::span<const int>(lits.begin(), lits.size()));
}

} // namespace

std::vector<std::size_t> tracked_differences(std::size_t n, int C) {
    std::vector<std::size_t> out;
    for (std::size_t d = 1; d <= n; ++d)
        if (n / d > static_cast<std::size_t>(C)) out.push_back(d);
    return out;
}

VarMap::VarMap(std::size_t n, int C, StateMode mode, std::vector<std::size_t> tracked)
    : n_(n), C_(C), mode_(mode), bits_(bits_for(C)), tracked_(std::move(tracked)) {
    if (n < 1 || C < 1) throw std::invalid_argument("need n >= 1 and C >= 1");
    std::size_t width = mode_ == StateMode::OneHot ? static_cast<std::size_t>(2 * C + 1)
                                                   : static_cast<std::size_t>(bits_);
    std::size_t next = n_ + 2; // after p_1..p_n and s_B
    base_.reserve(tracked_.size());
    for (std::size_t d : tracked_) {
        base_.push_back(next);
        next += layers(d) * width;
    }
    num_vars_ = static_cast<int>(next - 1);
}

std::size_t VarMap::track_base(std::size_t d) const {
    auto it = std::lower_bound(tracked_.begin(), tracked_.end(), d);
    if (it == tracked_.end() || *it != d)
        throw std::invalid_argument("difference not tracked: " + std::to_string(d));
    return base_[static_cast<std::size_t>(it - tracked_.begin())];
}

int VarMap::state(std::size_t d, std::size_t m, int j) const {
    assert(mode_ == StateMode::OneHot);
    assert(m >= 1 && m <= layers(d) && j >= -C_ && j <= C_);
    return static_cast<int>(track_base(d) + (m - 1) * (2 * C_ + 1)) + (j + C_);
}

int VarMap::state_bit(std::size_t d, std::size_t m, int bit) const {
    assert(mode_ == StateMode::Binary);
    assert(m >= 1 && m <= layers(d) && bit >= 0 && bit < bits_);
    return static_cast<int>(track_base(d) + (m - 1) * bits_) + bit;
}

namespace {

// literal asserting that bit `k` of layer (d,m) matches bit `k` of `code`
int code_lit(const VarMap& vm, std::size_t d, std::size_t m, int k, int code) {
    int v = vm.state_bit(d, m, k);
    return (code >> k) & 1 ? v : -v;
}

void track_onehot(std::size_t n, int C, std::size_t d, const VarMap& vm, ClauseSink& sink) {
    emit(sink, {vm.state(d, 1, 0)});
    const std::size_t M = n / d;
    for (std::size_t m = 1; m <= M; ++m) {
        const int P = vm.p(m * d);
        for (int j = -C; j < C; ++j)
            emit(sink, {-vm.state(d, m, j), -P, vm.state(d, m + 1, j + 1)});
        for (int j = -C + 1; j <= C; ++j)
            emit(sink, {-vm.state(d, m, j), P, vm.state(d, m + 1, j - 1)});
        emit(sink, {-vm.state(d, m, C), -P, vm.bad()});
        emit(sink, {-vm.state(d, m, -C), P, vm.bad()});
    }
}

void track_binary(std::size_t n, int C, std::size_t d, const VarMap& vm, ClauseSink& sink) {
    const int bits = vm.bits_per_layer();
    for (int k = 0; k < bits; ++k) emit(sink, {code_lit(vm, d, 1, k, C)}); // state 0 is code C
    const std::size_t M = n / d;
    Clause cl;
    for (std::size_t m = 1; m <= M; ++m) {
        const int P = vm.p(m * d);
        for (int j = -C; j <= C; ++j) {
            cl.clear();
            for (int k = 0; k < bits; ++k) cl.push_back(-code_lit(vm, d, m, k, j + C));
            const std::size_t a = cl.size();
            if (j < C) {
                for (int k = 0; k < bits; ++k) {
                    cl.resize(a);
                    cl.push_back(-P);
                    cl.push_back(code_lit(vm, d, m + 1, k, j + 1 + C));
                    sink.add(cl);
                }
            } else {
                cl.resize(a);
                cl.push_back(-P);
                cl.push_back(vm.bad());
                sink.add(cl);
            }
            if (j > -C) {
                for (int k = 0; k < bits; ++k) {
                    cl.resize(a);
                    cl.push_back(P);
                    cl.push_back(code_lit(vm, d, m + 1, k, j - 1 + C));
                    sink.add(cl);
                }
            } else {
                cl.resize(a);
                cl.push_back(P);
                cl.push_back(vm.bad());
                sink.add(cl);
            }
        }
    }
}

} // namespace

void encode_track(std::size_t n, int C, std::size_t d, const VarMap& vm, ClauseSink& sink) {
    if (d < 1 || d > n) throw std::invalid_argument("difference out of range");
    if (vm.mode() == StateMode::OneHot)
        track_onehot(n, C, d, vm, sink);
    else
        track_binary(n, C, d, vm, sink);
}

void encode_uniqueness(std::size_t n, int C, std::size_t d, const VarMap& vm, ClauseSink& sink) {
    const std::size_t L = vm.layers(d);
    if (vm.mode() == StateMode::OneHot) {
        Clause alo;
        for (std::size_t m = 1; m <= L; ++m) {
            alo.clear();
            for (int j = -C; j <= C; ++j) alo.push_back(vm.state(d, m, j));
            sink.add(alo);
            for (int j1 = -C; j1 <= C; ++j1)
                for (int j2 = j1 + 1; j2 <= C; ++j2)
                    emit(sink, {-vm.state(d, m, j1), -vm.state(d, m, j2)});
        }
    } else {
        const int bits = vm.bits_per_layer();
        Clause cl;
        for (std::size_t m = 1; m <= L; ++m) {
            for (int code = 2 * C + 1; code < (1 << bits); ++code) {
                cl.clear();
                for (int k = 0; k < bits; ++k) cl.push_back(-code_lit(vm, d, m, k, code));
                sink.add(cl);
            }
        }
    }
    (void)n;
}

void encode_mult_gate(std::size_t i, std::size_t d, const VarMap& vm, ClauseSink& sink) {
    if (i < 2 || d < 2 || i * d > vm.n())
        throw std::invalid_argument("mult gate indices out of range");
    const int pi = vm.p(i), pd = vm.p(d), pid = vm.p(i * d);
    if (i == d) {
        // p_{d^2} <-> (p_d <-> p_d): the two non-tautological clauses
        emit(sink, {pi, pid});
        emit(sink, {-pi, pid});
        return;
    }
    emit(sink, {pi, pd, pid});
    emit(sink, {-pi, -pd, pid});
    emit(sink, {pi, -pd, -pid});
    emit(sink, {-pi, pd, -pid});
}

void streamliner_clauses(const StreamlinerSpec& spec, std::size_t n, const VarMap& vm,
                         ClauseSink& sink) {
    using Kind = StreamlinerSpec::Kind;
    switch (spec.kind) {
    case Kind::Period: {
        const std::size_t p = spec.a, t = spec.b;
        if (p < 1 || t > n) throw std::invalid_argument("period streamliner out of range");
        for (std::size_t i = p + 1; i <= t; ++i) {
            if (i % p == 0) continue;
            emit(sink, {-vm.p(i), vm.p(i % p)});
            emit(sink, {vm.p(i), -vm.p(i % p)});
        }
        break;
    }
    case Kind::Walters: {
        const std::size_t w = spec.a;
        if (w > n) throw std::invalid_argument("walters streamliner out of range");
        for (std::size_t i = 1; i <= w; ++i)
            emit(sink, {walters_value(i) > 0 ? vm.p(i) : -vm.p(i)});
        break;
    }
    case Kind::Mult: {
        const std::size_t m = spec.a, l = spec.b;
        if (m > n || l > n) throw std::invalid_argument("mult streamliner out of range");
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (std::size_t d = 2; d <= m; ++d)
            for (std::size_t i = 2; i <= std::min(n / d, l); ++i) {
                auto key = std::minmax(i, d);
                if (!seen.insert(key).second) continue;
                encode_mult_gate(i, d, vm, sink);
            }
        break;
    }
    }
}

VarMap encode_edp1(const EncodingConfig& cfg, ClauseSink& sink) {
    VarMap vm(cfg.n, cfg.C, cfg.mode, tracked_differences(cfg.n, cfg.C));
    emit(sink, {-vm.bad()});
    for (std::size_t d : vm.tracked()) {
        encode_track(cfg.n, cfg.C, d, vm, sink);
        encode_uniqueness(cfg.n, cfg.C, d, vm, sink);
    }
    for (const auto& s : cfg.streamliners) streamliner_clauses(s, cfg.n, vm, sink);
    return vm;
}

VarMap encode_edp2(const EncodingConfig& cfg, ClauseSink& sink) {
    std::vector<std::size_t> tracked;
    if (cfg.n > static_cast<std::size_t>(cfg.C)) tracked.push_back(1);
    VarMap vm(cfg.n, cfg.C, cfg.mode, std::move(tracked));
    emit(sink, {-vm.bad()});
    emit(sink, {vm.p(1)}); // x_1 = +1 for any completely multiplicative sequence
    for (std::size_t d : vm.tracked()) {
        encode_track(cfg.n, cfg.C, d, vm, sink);
        encode_uniqueness(cfg.n, cfg.C, d, vm, sink);
    }
    for (std::size_t d = 2; d <= cfg.n; ++d)
        for (std::size_t i = 2; i <= std::min(cfg.n / d, d); ++i)
            encode_mult_gate(i, d, vm, sink);
    for (const auto& s : cfg.streamliners) streamliner_clauses(s, cfg.n, vm, sink);
    return vm;
}

std::pair<CnfInstance, VarMap> encode_edp1(const EncodingConfig& cfg) {
    CnfBuilder b(0);
    VarMap vm = encode_edp1(cfg, b);
    CnfInstance cnf = b.take();
    cnf.num_vars = vm.num_vars();
    return {std::move(cnf), std::move(vm)};
}

std::pair<CnfInstance, VarMap> encode_edp2(const EncodingConfig& cfg) {
    CnfBuilder b(0);
    VarMap vm = encode_edp2(cfg, b);
    CnfInstance cnf = b.take();
    cnf.num_vars = vm.num_vars();
    return {std::move(cnf), std::move(vm)};
}

std::pair<CnfInstance, VarMap> encode(const EncodingConfig& cfg) {
    return cfg.problem == Problem::Edp1 ? encode_edp1(cfg) : encode_edp2(cfg);
}

void DimacsClauseWriter::add(std::span<const int> lits) {
    for (int l : lits) out_ << l << ' ';
    out_ << "0\n";
}

void write_dimacs(const CnfInstance& instance, std::ostream& out) {
    out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << '\n';
    DimacsClauseWriter w(out);
    for (const auto& c : instance.clauses) w.add(c);
}

std::string write_dimacs(const CnfInstance& instance) {
    std::ostringstream ss;
    write_dimacs(instance, ss);
    return ss.str();
}

void write_varmap(const VarMap& vm, std::ostream& out) {
    out << "# varmap n=" << vm.n() << " C=" << vm.C()
        << " mode=" << (vm.mode() == StateMode::OneHot ? "onehot" : "binary") << '\n';
    for (std::size_t i = 1; i <= vm.n(); ++i) out << "p " << i << ' ' << vm.p(i) << '\n';
    out << "B " << vm.bad() << '\n';
    for (std::size_t d : vm.tracked()) {
        const std::size_t L = vm.layers(d);
        for (std::size_t m = 1; m <= L; ++m) {
            if (vm.mode() == StateMode::OneHot) {
                for (int j = -vm.C(); j <= vm.C(); ++j)
                    out << "s " << d << ' ' << m << ' ' << j << ' ' << vm.state(d, m, j) << '\n';
            } else {
                for (int k = 0; k < vm.bits_per_layer(); ++k)
                    out << "s " << d << ' ' << m << ' ' << 0 << ' ' << k << ' '
                        << vm.state_bit(d, m, k) << '\n';
            }
        }
    }
}

std::string write_varmap(const VarMap& vm) {
    std::ostringstream ss;
    write_varmap(vm, ss);
    return ss.str();
}

std::vector<int> parse_model(std::string_view text) {
    std::vector<int> lits;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        bool first = true;
        while (ls >> tok) {
            if (first && (tok == "c" || tok == "s")) break;
            first = false;
            if (tok == "v") continue;
            int v;
            try {
                std::size_t pos;
                v = std::stoi(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw DecodeError("bad model token: " + tok);
            }
            if (v != 0) lits.push_back(v);
        }
    }
    return lits;
}

Sequence decode_model(const std::vector<int>& model, std::size_t n) {
    std::vector<int8_t> val(n + 1, 0);
    for (int l : model) {
        std::size_t v = static_cast<std::size_t>(l > 0 ? l : -l);
        if (v == 0) throw DecodeError("literal 0 in model");
        if (v > n) continue; // state variable
        int8_t s = l > 0 ? 1 : -1;
        if (val[v] != 0 && val[v] != s)
            throw DecodeError("contradictory assignment for p_" + std::to_string(v));
        val[v] = s;
    }
    Sequence x;
    for (std::size_t i = 1; i <= n; ++i) {
        if (val[i] == 0) throw DecodeError("p_" + std::to_string(i) + " unassigned");
        x.push_back(val[i]);
    }
    return x;
}

std::size_t varmap_sequence_length(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind != "p") continue;
        std::size_t i, var;
        if (ls >> i >> var) n = std::max(n, i);
    }
    return n;
}

} // namespace edp
