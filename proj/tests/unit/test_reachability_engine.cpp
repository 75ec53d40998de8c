#include "fixture.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

using namespace abreach;
using namespace abreach::testing;

namespace {

std::set<std::string> literals_of(const Formula& f) {
    auto [vars, m] = split_exists(f);
    std::set<std::string> r;
    if (m->kind == FormulaKind::And) {
        for (const auto& c : m->children) { r.insert(c->key); }
    } else {
        r.insert(m->key);
    }
    return r;
}

std::set<std::string> predecessors(const SafetyProblem& p, const Transition& t, const Formula& K, std::int64_t n,
                                   IntBounds b = {}) {
    FiniteInstance inst = instantiate(p, n, b);
    std::set<std::string> r;
    for (const auto& s : models_of(top(), p, n, b)) {
        for (const auto& y : successors(inst, s, t)) {
            if (eval_formula(y, K)) {
                r.insert(state_key(s));
                break;
            }
        }
    }
    return r;
}

TEST(Preimage, CounterStepShiftsTheTest) {
    SafetyProblem p = spec("init_test");
    Formula K = parse_formula(p, "(and (= p 2) (distinct J L) (distinct (select a J) 0))");
    Solver solver({p.theory});
    auto cubes = split_cubes(solver, preimage(p, *p.find_transition("t3"), K));
    ASSERT_EQ(cubes.size(), 1u);
    std::set<std::string> want{"(= p 2)", "(distinct (+ J 1) L)", "(distinct (select a (+ J 1)) 0)",
                               "(= (select a J) 0)", "(distinct J L)"};
    EXPECT_EQ(literals_of(cubes[0]), want);
}

TEST(Preimage, MatchesConcretePredecessorsOfUnsafe) {
    SafetyProblem p = spec("mutex");
    const Transition& t4 = *p.find_transition("t4");
    Formula pre = preimage(p, t4, p.unsafe);
    for (std::int64_t n = 2; n <= 4; ++n) { EXPECT_EQ(model_keys(pre, p, n), predecessors(p, t4, p.unsafe, n)) << n; }
}

TEST(Preimage, GroundTransitionsOfInitTest) {
    SafetyProblem p = spec("init_test");
    Formula K = parse_formula(p, "(and (= p 2) (distinct J L) (distinct (select a J) 0))");
    for (const auto& t : p.transitions) {
        EXPECT_EQ(model_keys(preimage(p, t, K), p, 3, {0, 4}), predecessors(p, t, K, 3, {0, 4})) << t.name;
    }
}

TEST(Backward, MutexIsSafe) {
    SafetyProblem p = spec("mutex");
    BackwardResult r = backward_reach(p, {});
    EXPECT_EQ(r.verdict, Outcome::Safe);
    EXPECT_EQ(r.stats.iterations, 3u);
    EXPECT_EQ(r.stats.nodes, 16u);
    EXPECT_EQ(r.stats.deleted, 13u);
    EXPECT_TRUE(std::any_of(r.nodes.begin(), r.nodes.end(), [](const Node& n) { return n.via == "t5" && n.deleted; }));
}

TEST(Backward, SubsumptionIsWhatStopsTheSearch) {
    SafetyProblem p = spec("mutex");
    EngineConfig cfg;
    cfg.subsumption = false;
    cfg.max_iters = 8;
    EXPECT_EQ(backward_reach(p, cfg).verdict, Outcome::ResourceLimit);
}

TEST(Backward, MutexWithoutAbstractionIsUnknown) {
    SafetyProblem p = spec("mutex");
    EngineConfig cfg;
    cfg.abstraction = AbstractionMode::Off;
    BackwardResult r = backward_reach(p, cfg);
    EXPECT_EQ(r.verdict, Outcome::Unknown);
    EXPECT_EQ(r.reason, "universal guard without abstraction");
}

TEST(Backward, TransformModeAgrees) {
    SafetyProblem p = spec("mutex");
    EngineConfig cfg;
    cfg.abstraction = AbstractionMode::Transform;
    EXPECT_EQ(backward_reach(p, cfg).verdict, Outcome::Safe);
    EXPECT_EQ(backward_reach(spec("bakery"), cfg).verdict, Outcome::Safe);
}

TEST(Backward, InitTestDivergesWithoutAcceleration) {
    SafetyProblem p = spec("init_test");
    EngineConfig cfg;
    cfg.max_iters = 8;
    EXPECT_EQ(backward_reach(p, cfg).verdict, Outcome::ResourceLimit);
    cfg.max_iters = 200;
    cfg.max_nodes = 50;
    BackwardResult r = backward_reach(p, cfg);
    EXPECT_EQ(r.verdict, Outcome::ResourceLimit);
    EXPECT_EQ(r.reason, "node limit 50");
}

TEST(Backward, InitTestIsSafeWithAcceleration) {
    SafetyProblem p = spec("init_test");
    EngineConfig cfg;
    cfg.accelerate = true;
    for (InstSet x : {InstSet::Default, InstSet::AllVars}) {
        cfg.inst_set = x;
        BackwardResult r = backward_reach(p, cfg);
        EXPECT_EQ(r.verdict, Outcome::Safe);
        EXPECT_LE(r.stats.iterations, 25u);
        EXPECT_TRUE(std::any_of(r.nodes.begin(), r.nodes.end(), [](const Node& n) { return n.accelerated; }));
    }
}

TEST(Backward, BuggyMutexTraceIsConfirmed) {
    SafetyProblem p = spec("mutex_buggy");
    BackwardResult r = backward_reach(p, {});
    ASSERT_EQ(r.verdict, Outcome::Unsafe);
    ASSERT_TRUE(r.trace);
    std::vector<std::string> names;
    for (const auto& s : r.trace->steps) { names.push_back(s.transition); }
    EXPECT_EQ(names, (std::vector<std::string>{"t1", "t1", "t2", "t3", "t2", "t3"}));
    ASSERT_TRUE(r.concretization);
    EXPECT_EQ(r.concretization->kind, Concretization::Kind::Confirmed);
    EXPECT_EQ(r.concretization->n, 2);
    ASSERT_EQ(r.concretization->run.size(), 7u);
    EXPECT_TRUE(eval_formula(r.concretization->run.back().state, p.unsafe));
}

TEST(Backward, BuggyInitTestTraceIsConfirmed) {
    SafetyProblem p = spec("init_test_buggy");
    EngineConfig cfg;
    cfg.accelerate = true;
    cfg.inst_set = InstSet::AllVars;
    BackwardResult r = backward_reach(p, cfg);
    ASSERT_EQ(r.verdict, Outcome::Unsafe);
    ASSERT_TRUE(r.concretization);
    EXPECT_EQ(r.concretization->kind, Concretization::Kind::Confirmed);
}

TEST(Concretize, AbstractStepOnCorrectMutexIsNeverConfirmed) {
    SafetyProblem p = spec("mutex");
    Trace tr;
    tr.initial = p.init;
    tr.unsafe = p.unsafe;
    tr.steps = {{"t1", "t1", true, false}};
    EngineConfig cfg;
    cfg.max_oracle_n = 4;
    Concretization c = concretize_trace(tr, p, cfg);
    EXPECT_NE(c.kind, Concretization::Kind::Confirmed);
}

TEST(Backward, RunsAreReproducible) {
    SafetyProblem p = spec("mutex_buggy");
    BackwardResult a = backward_reach(p, {});
    BackwardResult b = backward_reach(p, {});
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) { EXPECT_EQ(a.nodes[i].formula->key, b.nodes[i].formula->key); }
}

TEST(Backward, FrontierDumpHasOneLinePerNode) {
    SafetyProblem p = spec("mutex");
    EngineConfig cfg;
    cfg.dump_frontier = ::testing::TempDir() + "frontier.jsonl";
    BackwardResult r = backward_reach(p, cfg);
    std::ifstream in(cfg.dump_frontier);
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) { lines += l.empty() ? 0 : 1; }
    EXPECT_EQ(lines, r.nodes.size());
}

} // namespace
