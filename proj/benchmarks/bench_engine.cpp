#include "abreach/engine.hpp"

#include <benchmark/benchmark.h>

using namespace abreach;

namespace {

SafetyProblem spec(const std::string& name) { return load_problem(std::string(ABREACH_SPECS) + "/" + name + ".abs"); }

void run_check(benchmark::State& state, const std::string& name, EngineConfig cfg) {
    SafetyProblem p = spec(name);
    cfg.concretize = false;
    BackwardResult r;
    for (auto _ : state) {
        r = backward_reach(p, cfg);
        benchmark::DoNotOptimize(r.verdict);
    }
    state.counters["depth"] = static_cast<double>(r.stats.iterations);
    state.counters["nodes"] = static_cast<double>(r.stats.nodes);
    state.counters["deleted"] = static_cast<double>(r.stats.deleted);
    state.counters["smt"] = static_cast<double>(r.stats.solver_calls);
}

EngineConfig diff_config() {
    EngineConfig c;
    c.accelerate = true;
    c.inst_set = InstSet::AllVars;
    return c;
}

void BM_Mutex(benchmark::State& s) { run_check(s, "mutex", {}); }
void BM_MutexTransform(benchmark::State& s) {
    EngineConfig c;
    c.abstraction = AbstractionMode::Transform;
    run_check(s, "mutex", c);
}
void BM_MutexBuggy(benchmark::State& s) { run_check(s, "mutex_buggy", {}); }
void BM_Bakery(benchmark::State& s) { run_check(s, "bakery", {}); }
void BM_InitTest(benchmark::State& s) { run_check(s, "init_test", diff_config()); }
void BM_InitTestBuggy(benchmark::State& s) { run_check(s, "init_test_buggy", diff_config()); }

void BM_OracleMutex(benchmark::State& s) {
    SafetyProblem p = spec("mutex");
    for (auto _ : s) {
        auto r = forward_reach(instantiate(p, s.range(0)));
        benchmark::DoNotOptimize(r.states);
    }
}

void BM_Entailment(benchmark::State& s) {
    SafetyProblem p = spec("bakery");
    Solver solver({p.theory});
    Formula pre = preimage(p, p.transitions.front(), p.unsafe);
    pre = abstract_formula(pre, default_instantiation_set(pre));
    for (auto _ : s) {
        auto r = solver.entails(p.unsafe, pre);
        benchmark::DoNotOptimize(r);
    }
}

} // namespace

BENCHMARK(BM_Mutex);
BENCHMARK(BM_MutexTransform);
BENCHMARK(BM_MutexBuggy);
BENCHMARK(BM_Bakery);
BENCHMARK(BM_InitTest);
BENCHMARK(BM_InitTestBuggy);
BENCHMARK(BM_OracleMutex)->DenseRange(2, 5);
BENCHMARK(BM_Entailment);

BENCHMARK_MAIN();
