#include "fixture.hpp"

#include "abreach/acceleration.hpp"
#include "abreach/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace abreach;
using namespace abreach::testing;

namespace {

std::vector<std::string> names(const std::vector<Term>& ts) {
    std::vector<std::string> r;
    for (const auto& t : ts) { r.push_back(t->name); }
    return r;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

TEST(InstantiationSet, ExistentialPrefix) {
    Sig s = mutex_sig();
    Formula f = s("(exists (x) (and (= (select a x) W) (forall (y) (=> (< y x) (= (select a y) I)))))");
    EXPECT_EQ(names(default_instantiation_set(f)), std::vector<std::string>{"x"});
    Formula g = s("(exists (x) (and (= (select a x) W) (< x j) (forall (y) (=> (< y x) (= (select a y) I)))))");
    EXPECT_EQ(names(all_vars_instantiation_set(g)), (std::vector<std::string>{"x", "j"}));
    EXPECT_THROW(default_instantiation_set(s("(forall (y) (= (select a y) I))")), EmptyInstantiationSet);
}

TEST(InstantiationSet, AcceleratedPreimageKeepsCounter) {
    SafetyProblem p = with_accelerations(spec("init_test"));
    Formula K = parse_formula(p, "(and (= p 2) (distinct J L) (distinct (select a J) 0))");
    Formula pre = preimage(p, *p.find_transition("t3+"), K);
    auto x = names(default_instantiation_set(pre));
    EXPECT_NE(std::find(x.begin(), x.end(), "J"), x.end());
    EXPECT_NE(std::find(x.begin(), x.end(), "L"), x.end());
    EXPECT_EQ(x.front(), split_exists(pre).first.front()->name);
}

TEST(Abstract, ResultIsExistential) {
    SafetyProblem p = spec("mutex");
    Formula pre = preimage(p, *p.find_transition("t3"), p.unsafe);
    Formula a = abstract_formula(pre, default_instantiation_set(pre));
    auto [vars, m] = split_exists(a);
    EXPECT_FALSE(vars.empty());
    EXPECT_TRUE(is_quantifier_free(m));
}

// Enumeration on N <= 4: instantiation only adds models.
TEST(Abstract, OverApproximates) {
    Sig s = mutex_sig();
    const std::vector<std::string> bodies{
        "(=> (< y x) (= (select a y) I))",
        "(or (= y x) (= (select a y) I) (= (select a y) R))",
        "(or (< x y) (distinct (select a y) C))",
        "(or (= (select a y) (select a x)) (= (select a y) W))",
        "(=> (distinct y x) (< y x))",
    };
    for (const auto& b : bodies) {
        Formula f = s("(exists (x) (and (distinct (select a x) C) (forall (y) " + b + ")))");
        Formula g = abstract_formula(f, default_instantiation_set(f));
        for (std::int64_t n = 1; n <= 4; ++n) {
            EXPECT_TRUE(subset(model_keys(f, s.problem, n), model_keys(g, s.problem, n))) << b;
        }
    }
}

CrashInfo crash_of(const SafetyProblem& q) {
    const VarDecl* loc = q.find_var(q.location_array());
    return {loc->name, loc->sort.decl(), enum_const(loc->sort.decl(), loc->sort.decl()->constants.back())};
}

TEST(CrashTransform, EnteringMatchesRuntimeAbstraction) {
    SafetyProblem p = spec("mutex");
    SafetyProblem q = abstract_transition(p, "t3");
    CrashInfo c = crash_of(q);
    Formula pre = preimage(p, *p.find_transition("t3"), p.unsafe);
    Formula runtime = abstract_formula(pre, default_instantiation_set(pre));
    Formula transformed = preimage(q, *q.find_transition("t3"), q.unsafe);
    for (std::int64_t n = 1; n <= 4; ++n) {
        EXPECT_EQ(model_keys(runtime, p, n), model_keys(conj({transformed, crash_free(c)}), q, n)) << n;
    }
}

ConcreteState locations(std::vector<std::int64_t> cells) {
    ConcreteState s;
    s.domain_size = static_cast<std::int64_t>(cells.size());
    s.array_vals["a"] = std::move(cells);
    return s;
}

std::set<std::string> step(const SafetyProblem& q, const std::string& t, const ConcreteState& s) {
    std::set<std::string> r;
    for (const auto& y : successors(instantiate(q, s.domain_size), s, *q.find_transition(t))) { r.insert(state_key(y)); }
    return r;
}

// Values: I=0 R=1 W=2 C=3 crashed=4.
TEST(CrashTransform, RequestCrashesBusyProcesses) {
    SafetyProblem q = abstract_transition(spec("mutex"), "t1");
    EXPECT_FALSE(q.find_transition("t1")->has_universal());
    EXPECT_EQ(q.find_transition("t1")->abstracts, "t1");
    auto got = step(q, "t1", locations({0, 2, 1}));
    EXPECT_EQ(got, std::set<std::string>{state_key(locations({1, 4, 1}))});
}

TEST(CrashTransform, EnteringCrashesBusyLeftNeighbours) {
    SafetyProblem q = abstract_transition(spec("mutex"), "t3");
    auto got = step(q, "t3", locations({1, 0, 2}));
    EXPECT_EQ(got, std::set<std::string>{state_key(locations({4, 0, 3}))});
}

// Every original step is a transformed step without crashes, so every
// original run is a transformed run.
TEST(CrashTransform, OriginalStepsAreKept) {
    SafetyProblem p = spec("mutex");
    SafetyProblem q = abstract_all(p);
    for (std::int64_t n = 1; n <= 3; ++n) {
        FiniteInstance ip = instantiate(p, n);
        FiniteInstance iq = instantiate(q, n);
        for (const auto& s : models_of(top(), p, n)) {
            for (const auto& t : p.transitions) {
                std::set<std::string> orig, abs;
                for (const auto& y : successors(ip, s, t)) { orig.insert(state_key(y)); }
                for (const auto& y : successors(iq, s, *q.find_transition(t.name))) { abs.insert(state_key(y)); }
                EXPECT_TRUE(subset(orig, abs)) << t.name << " " << state_key(s);
            }
        }
    }
}

TEST(CrashTransform, NeedsLocationArray) { EXPECT_THROW(crash_info(spec("init_test")), ValidationError); }

TEST(CrashTransform, RelativizesUnsafe) {
    SafetyProblem q = abstract_all(spec("mutex"));
    EXPECT_NE(q.unsafe->key.find("crashed"), std::string::npos);
    EXPECT_NE(q.init->key.find("crashed"), std::string::npos);
}

} // namespace
