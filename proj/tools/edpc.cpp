// edpc: encode, search, verify and compose Erdos-discrepancy sequences.
//
// Exit codes: 0 ok / 1 negative answer / 2 usage or input error / 3 budget.

#include "edp/construction.hpp"
#include "edp/encoder.hpp"
#include "edp/sat.hpp"
#include "edp/search.hpp"
#include "edp/seqcore.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace edp;

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct BudgetFlags {
    std::uint64_t nodes = 1'000'000'000;
    double seconds = 3600.0;
    int threads = 1;
    bool deterministic = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--budget-nodes", nodes, "node limit");
        cmd->add_option("--budget-secs", seconds, "wall-clock limit in seconds");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_flag("--deterministic", deterministic, "force single-threaded search");
    }

    SearchBudget to_budget() const {
        SearchBudget b;
        b.max_nodes = nodes;
        b.max_seconds = seconds;
        b.threads = deterministic ? 1 : threads;
        return b;
    }
};

StreamlinerSpec parse_streamliner(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--streamline", "expected kind:params");
    std::string kind = text.substr(0, colon);
    std::string params = text.substr(colon + 1);
    for (auto& c : params)
        if (c == ':' || c == ',') c = ' ';
    std::istringstream ps(params);
    std::size_t a = 0, b = 0;
    if (kind == "walters") {
        if (!(ps >> a)) throw CLI::ValidationError("--streamline", "walters needs w");
        return StreamlinerSpec::walters(a);
    }
    if (kind == "period") {
        if (!(ps >> a >> b)) throw CLI::ValidationError("--streamline", "period needs p,t");
        return StreamlinerSpec::period(a, b);
    }
    if (kind == "mult") {
        if (!(ps >> a >> b)) throw CLI::ValidationError("--streamline", "mult needs m,l");
        return StreamlinerSpec::mult(a, b);
    }
    throw CLI::ValidationError("--streamline", "unknown kind " + kind);
}

const char* status_name(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Exhausted: return "exhausted";
    default: return "budget";
    }
}

int status_exit(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found: return kOk;
    case SearchStatus::Exhausted: return kNegative;
    default: return kBudget;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Erdos discrepancy toolkit"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "evaluate the discrepancy of a sequence file");
    std::string verify_file;
    long long bound = 0;
    verify->add_option("file", verify_file)->required();
    verify->add_option("--bound", bound, "succeed only if discrepancy <= bound");
    verify->callback([&] {
        Sequence x = parse_sequence(slurp(verify_file));
        auto rep = discrepancy(x);
        std::cout << "RESULT disc=" << rep.value << " d=" << rep.witness.d
                  << " m=" << rep.witness.m << " sum=" << rep.witness.sum << "\n";
        if (verify->count("--bound") && rep.value > bound) std::exit(kNegative);
    });

    // encode
    auto* enc = app.add_subcommand("encode", "emit a DIMACS instance and varmap");
    std::string enc_problem = "edp1", enc_mode = "onehot", enc_out, enc_map;
    std::size_t enc_n = 0;
    int enc_C = 0;
    std::vector<std::string> enc_streamliners;
    enc->add_option("--problem,problem", enc_problem)->check(CLI::IsMember({"edp1", "edp2"}));
    enc->add_option("-n", enc_n)->required();
    enc->add_option("-C", enc_C)->required();
    enc->add_option("--streamline", enc_streamliners, "kind:params, repeatable");
    enc->add_option("--mode", enc_mode)->check(CLI::IsMember({"onehot", "binary"}));
    enc->add_option("-o,--out", enc_out, "output CNF path")->required();
    enc->add_option("--map", enc_map, "output varmap path");
    enc->callback([&] {
        EncodingConfig cfg;
        cfg.n = enc_n;
        cfg.C = enc_C;
        cfg.problem = enc_problem == "edp1" ? Problem::Edp1 : Problem::Edp2;
        cfg.mode = enc_mode == "onehot" ? StateMode::OneHot : StateMode::Binary;
        for (const auto& s : enc_streamliners) cfg.streamliners.push_back(parse_streamliner(s));

        // pass 1: count clauses, pass 2: stream them; identical by construction
        ClauseCounter counter;
        VarMap vm = cfg.problem == Problem::Edp1 ? encode_edp1(cfg, counter)
                                                 : encode_edp2(cfg, counter);
        std::ofstream out(enc_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + enc_out);
        out << "p cnf " << vm.num_vars() << ' ' << counter.count() << '\n';
        DimacsClauseWriter writer(out);
        if (cfg.problem == Problem::Edp1)
            encode_edp1(cfg, writer);
        else
            encode_edp2(cfg, writer);
        if (!enc_map.empty()) {
            std::ofstream mapout(enc_map, std::ios::binary);
            if (!mapout) throw std::runtime_error("cannot write " + enc_map);
            write_varmap(vm, mapout);
        }
        std::cout << "RESULT vars=" << vm.num_vars() << " clauses=" << counter.count() << "\n";
    });

    // decode
    auto* dec = app.add_subcommand("decode", "decode a solver model into a sequence");
    std::string dec_model, dec_map, dec_out;
    dec->add_option("--model", dec_model)->required();
    dec->add_option("--map", dec_map)->required();
    dec->add_option("-o,--out", dec_out);
    dec->callback([&] {
        std::size_t n = varmap_sequence_length(slurp(dec_map));
        Sequence x = decode_model(parse_model(slurp(dec_model)), n);
        spill(dec_out, format_sequence(x));
        std::cout << "RESULT n=" << x.size() << " disc=" << discrepancy(x).value << "\n";
    });

    // walters
    auto* wal = app.add_subcommand("walters", "emit the improved Walters sequence");
    std::size_t wal_n = 0;
    std::string wal_out;
    wal->add_option("-n", wal_n)->required();
    wal->add_option("-o,--out", wal_out);
    wal->callback([&] {
        Sequence x = walters(wal_n);
        spill(wal_out, format_sequence(x));
        std::cout << "RESULT n=" << x.size() << " disc=" << discrepancy(x).value << "\n";
    });

    // extend
    auto* ext = app.add_subcommand("extend", "multiplicative extension of prime signs");
    std::string ext_primes, ext_out;
    std::size_t ext_n = 0;
    ext->add_option("--primes", ext_primes, "file of '<prime> <sign>' lines")->required();
    ext->add_option("-n", ext_n)->required();
    ext->add_option("-o,--out", ext_out);
    ext->callback([&] {
        PrimeAssignment pa;
        std::istringstream in(slurp(ext_primes));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::size_t p;
            std::string tok;
            if (!(ls >> p >> tok)) throw std::runtime_error("bad primes line: " + line);
            Sequence s = parse_sequence(tok);
            if (s.size() != 1) throw std::runtime_error("bad sign token: " + tok);
            pa[p] = s.at(1);
        }
        Sequence x = extend_multiplicative(pa, ext_n);
        spill(ext_out, format_sequence(x));
        std::cout << "RESULT n=" << x.size() << " disc=" << prefix_discrepancy(x) << "\n";
    });

    // search
    auto* srch = app.add_subcommand("search", "exact branch-and-prune search");
    std::string srch_problem = "edp1", srch_out;
    std::size_t srch_n = 0;
    int srch_C = 0;
    BudgetFlags srch_budget;
    srch->add_option("--problem,problem", srch_problem)->check(CLI::IsMember({"edp1", "edp2"}));
    srch->add_option("-n", srch_n)->required();
    srch->add_option("-C", srch_C)->required();
    srch->add_option("-o,--out", srch_out, "witness output path");
    srch_budget.attach(srch);
    srch->callback([&] {
        SearchOutcome r = srch_problem == "edp1"
                              ? search_edp1(srch_n, srch_C, srch_budget.to_budget())
                              : search_edp2(srch_n, srch_C, srch_budget.to_budget());
        if (r.witness && !srch_out.empty()) spill(srch_out, format_sequence(*r.witness));
        std::cout << "RESULT status=" << status_name(r.status) << " nodes=" << r.stats.nodes
                  << " depth=" << r.stats.max_depth << "\n";
        std::exit(status_exit(r.status));
    });

    // threshold
    auto* thr = app.add_subcommand("threshold", "exact E1/E2 value for a bound");
    std::string thr_problem = "edp1";
    int thr_C = 0;
    BudgetFlags thr_budget;
    thr->add_option("--problem,problem", thr_problem)->check(CLI::IsMember({"edp1", "edp2"}));
    thr->add_option("-C", thr_C)->required();
    thr_budget.attach(thr);
    thr->callback([&] {
        ThresholdReport r = threshold(thr_problem == "edp1" ? Problem::Edp1 : Problem::Edp2,
                                      thr_C, thr_budget.to_budget());
        if (r.value) {
            std::cout << "RESULT E=" << *r.value << " nodes=" << r.nodes << "\n";
        } else {
            std::cout << "RESULT longest_found=" << r.longest_found
                      << " smallest_unknown=" << *r.smallest_unknown << " nodes=" << r.nodes
                      << "\n";
            std::exit(kBudget);
        }
    });

    // modp
    auto* modp = app.add_subcommand("modp", "search for a discrepancy-mod-p witness");
    std::size_t modp_p = 0;
    int modp_C = 0;
    std::string modp_out, modp_cache;
    BudgetFlags modp_budget;
    modp->add_option("-p", modp_p)->required();
    modp->add_option("-C", modp_C)->required();
    modp->add_option("-o,--out", modp_out);
    modp->add_option("--cache", modp_cache, "witness cache directory");
    modp_budget.attach(modp);
    modp->callback([&] {
        std::optional<ModPWitness> w;
        if (!modp_cache.empty()) w = WitnessCache(modp_cache).load(modp_p, modp_C);
        SearchStatus status = SearchStatus::Found;
        std::uint64_t nodes = 0;
        if (!w) {
            ModPResult r = solve_disc_mod_p(modp_p, modp_C, modp_budget.to_budget());
            status = r.status;
            nodes = r.stats.nodes;
            w = r.witness;
            if (w && !modp_cache.empty()) WitnessCache(modp_cache).store(*w);
        }
        if (w && !modp_out.empty()) spill(modp_out, format_witness(*w));
        std::cout << "RESULT status=" << status_name(status) << " p=" << modp_p
                  << " cprime=" << modp_C << " nodes=" << nodes << "\n";
        std::exit(status_exit(status));
    });

    // compose
    auto* comp = app.add_subcommand("compose", "interleave a mod-p witness with a base sequence");
    std::string comp_seq, comp_witness, comp_out;
    comp->add_option("--seq", comp_seq)->required();
    comp->add_option("--witness", comp_witness)->required();
    comp->add_option("-o,--out", comp_out);
    comp->callback([&] {
        Sequence z = parse_sequence(slurp(comp_seq));
        ModPWitness w = parse_witness(slurp(comp_witness));
        Sequence x = compose(z, w);
        spill(comp_out, format_sequence(x));
        std::cout << "RESULT n=" << x.size() << " disc=" << discrepancy(x).value << "\n";
    });

    // amplify
    auto* amp = app.add_subcommand("amplify", "apply a composition plan and re-verify the bound");
    std::string amp_seq, amp_out, amp_cache;
    std::vector<std::string> amp_steps;
    BudgetFlags amp_budget;
    amp->add_option("--seq", amp_seq)->required();
    amp->add_option("--step", amp_steps, "p[:cprime], repeatable; cprime defaults to 1 for p<=9, else 2");
    amp->add_option("--cache", amp_cache, "witness cache directory");
    amp->add_option("-o,--out", amp_out);
    amp_budget.attach(amp);
    amp->callback([&] {
        Sequence z = parse_sequence(slurp(amp_seq));
        CompositionPlan plan;
        for (const auto& s : amp_steps) {
            std::size_t p;
            int cp = -1;
            auto colon = s.find(':');
            p = static_cast<std::size_t>(std::stoull(s.substr(0, colon)));
            if (colon != std::string::npos) cp = std::stoi(s.substr(colon + 1));
            if (cp < 0) cp = p <= 9 ? 1 : 2;
            std::optional<ModPWitness> w;
            if (!amp_cache.empty()) w = WitnessCache(amp_cache).load(p, cp);
            if (!w) {
                ModPResult r = solve_disc_mod_p(p, cp, amp_budget.to_budget());
                if (r.status != SearchStatus::Found) {
                    std::cout << "RESULT status=" << status_name(r.status) << " p=" << p
                              << " cprime=" << cp << "\n";
                    std::exit(status_exit(r.status));
                }
                w = r.witness;
                if (!amp_cache.empty()) WitnessCache(amp_cache).store(*w);
            }
            plan.steps.push_back(std::move(*w));
        }
        AmplifyResult r = amplify(z, plan);
        spill(amp_out, format_sequence(r.x));
        std::cout << "RESULT n=" << r.x.size() << " claimed=" << r.claimed
                  << " disc=" << r.actual << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError&) {
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
