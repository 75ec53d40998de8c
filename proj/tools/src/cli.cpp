#include "abreach/cli.hpp"

#include "abreach/acceleration.hpp"
#include "abreach/engine.hpp"
#include "abreach/errors.hpp"
#include "abreach/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace abreach::cli {

namespace {

struct RunConfig {
    std::string input;
    std::string abstraction = "runtime";
    std::string accelerate = "auto";
    std::string inst_set = "default";
    std::size_t max_iters = 200;
    std::size_t max_nodes = 20000;
    std::int64_t oracle_n = 6;
    std::string dump_frontier;
    std::string smt_dump;
    std::string trace = "on";
    std::int64_t n = 0;
    std::int64_t int_lo = 0;
    std::int64_t int_hi = 3;
};

const char* theory_name(Theory t) { return t == Theory::Simple ? "simple" : "diffarith"; }

std::string or_none(const std::string& s) { return s.empty() ? "none" : s; }

void print_run(std::ostream& out, const std::vector<RunStep>& run) {
    for (const auto& s : run) {
        out << "  " << (s.transition.empty() ? "init" : s.transition) << " " << to_string(s.state) << "\n";
    }
}

int do_check(const RunConfig& rc, std::ostream& out) {
    SafetyProblem p = load_problem(rc.input);
    EngineConfig cfg;
    cfg.max_iters = rc.max_iters;
    cfg.max_nodes = rc.max_nodes;
    cfg.max_oracle_n = rc.oracle_n;
    cfg.dump_frontier = rc.dump_frontier;
    cfg.smt_dump = rc.smt_dump;
    if (rc.abstraction == "off") {
        cfg.abstraction = AbstractionMode::Off;
    } else if (rc.abstraction == "transform") {
        cfg.abstraction = AbstractionMode::Transform;
    }
    const bool diff = p.theory == Theory::DiffArith;
    cfg.accelerate = rc.accelerate == "auto" ? diff : rc.accelerate == "on";
    cfg.inst_set = rc.inst_set == "all-vars" ? InstSet::AllVars : InstSet::Default;

    out << "command: check\n";
    out << "file: " << rc.input << "\n";
    out << "abstraction: " << rc.abstraction << "\n";
    out << "accelerate: " << (cfg.accelerate ? "on" : "off") << "\n";
    out << "inst-set: " << rc.inst_set << "\n";
    out << "max-iters: " << rc.max_iters << "\n";
    out << "max-nodes: " << rc.max_nodes << "\n";
    out << "oracle-n: " << rc.oracle_n << "\n";
    out << "dump-frontier: " << or_none(rc.dump_frontier) << "\n";
    out << "smt-dump: " << or_none(rc.smt_dump) << "\n";
    out << "trace: " << rc.trace << "\n";
    out << "--\n";
    out << "problem: " << p.name << "\n";
    out << "theory: " << theory_name(p.theory) << "\n";
    std::string acc;
    if (cfg.accelerate) {
        for (const auto& t : p.transitions) {
            if (match_loop_pattern(p, t).pattern) { acc += (acc.empty() ? "" : " ") + t.name; }
        }
    }
    out << "accelerated: " << or_none(acc) << "\n";

    BackwardResult r = backward_reach(p, cfg);
    out << "verdict: " << outcome_name(r.verdict) << "\n";
    if (!r.reason.empty()) { out << "reason: " << r.reason << "\n"; }
    out << "iterations: " << r.stats.iterations << "\n";
    out << "nodes: " << r.stats.nodes << "\n";
    out << "deleted: " << r.stats.deleted << "\n";
    out << "solver-calls: " << r.stats.solver_calls << "\n";
    if (r.verdict == Outcome::Safe) { return kSafe; }
    if (r.verdict != Outcome::Unsafe) { return kInconclusive; }

    if (r.trace && rc.trace == "on") {
        out << "trace:";
        for (const auto& s : r.trace->steps) { out << " " << s.transition; }
        out << "\n";
    }
    if (!r.concretization) { return kInconclusive; }
    const Concretization& c = *r.concretization;
    if (c.kind == Concretization::Kind::Confirmed) {
        out << "concretization: confirmed at N=" << c.n << "\n";
        if (rc.trace == "on") { print_run(out, c.run); }
        return kUnsafe;
    }
    out << "concretization: " << concretization_name(c.kind) << "\n";
    return kInconclusive;
}

int do_oracle(const RunConfig& rc, std::ostream& out) {
    SafetyProblem p = load_problem(rc.input);
    out << "command: oracle\n";
    out << "file: " << rc.input << "\n";
    out << "n: " << rc.n << "\n";
    out << "int-lo: " << rc.int_lo << "\n";
    out << "int-hi: " << rc.int_hi << "\n";
    out << "--\n";
    out << "problem: " << p.name << "\n";
    OracleResult r;
    try {
        r = forward_reach(instantiate(p, rc.n, {rc.int_lo, rc.int_hi}));
    } catch (const TooLarge& e) {
        out << "verdict: TOO-LARGE\n";
        out << "reason: " << e.what() << "\n";
        return kInconclusive;
    }
    out << "states: " << r.states << "\n";
    if (r.safe) {
        out << "verdict: SafeUpTo(" << rc.n << ")\n";
        return kSafe;
    }
    out << "verdict: UnsafeAt(" << rc.n << ")\n";
    out << "run:\n";
    print_run(out, r.counterexample);
    return kUnsafe;
}

int do_dump(const RunConfig& rc, std::ostream& out) {
    SafetyProblem p = load_problem(rc.input);
    out << print_problem(p);
    for (const auto& t : p.transitions) { out << "; " << t.name << ": " << shape_name(classify_transition(t)) << "\n"; }
    return kSafe;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    CLI::App app{"Backward reachability for array-based systems", "abreach"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "Run backward reachability");
    check->add_option("file", rc.input)->required();
    check->add_option("--abstraction", rc.abstraction)->check(CLI::IsMember({"off", "runtime", "transform"}));
    check->add_option("--accelerate", rc.accelerate, "default: on for diffarith")->check(CLI::IsMember({"on", "off"}));
    check->add_option("--inst-set", rc.inst_set)->check(CLI::IsMember({"default", "all-vars"}));
    check->add_option("--max-iters", rc.max_iters);
    check->add_option("--max-nodes", rc.max_nodes);
    check->add_option("--oracle-n", rc.oracle_n)->check(CLI::PositiveNumber);
    check->add_option("--dump-frontier", rc.dump_frontier, "JSON-lines node log");
    check->add_option("--smt-dump", rc.smt_dump, "directory for solver queries");
    check->add_option("--trace", rc.trace)->check(CLI::IsMember({"on", "off"}));

    auto* oracle = app.add_subcommand("oracle", "Explore a finite instance forward");
    oracle->add_option("file", rc.input)->required();
    oracle->add_option("--n", rc.n)->required()->check(CLI::PositiveNumber);
    oracle->add_option("--int-lo", rc.int_lo);
    oracle->add_option("--int-hi", rc.int_hi);

    auto* dump = app.add_subcommand("dump", "Print the parsed problem");
    dump->add_option("file", rc.input)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }
    try {
        if (check->parsed()) { return do_check(rc, out); }
        if (oracle->parsed()) { return do_oracle(rc, out); }
        return do_dump(rc, out);
    } catch (const ParseError& e) {
        err << rc.input << ":" << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kUsage;
}

} // namespace abreach::cli
