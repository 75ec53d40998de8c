#include "fixture.hpp"

#include "abreach/errors.hpp"

#include <gtest/gtest.h>

using namespace abreach;
using namespace abreach::testing;

namespace {

TEST(Ground, NegativeCycleIsUnsat) {
    Sig s = mutex_sig();
    Formula f = s("(and (< i j) (< j k) (< k i))");
    Solver solver;
    EXPECT_EQ(solver.check_sat_ground(f).verdict, Verdict::Unsat);
    EXPECT_TRUE(models_of(f, s.problem, 3).empty());
}

TEST(Ground, TwoCriticalProcesses) {
    Sig s = mutex_sig();
    Formula f = s("(and (= (select a i) C) (= (select a j) C) (< i j))");
    Solver solver;
    SatResult r = solver.check_sat_ground(f);
    ASSERT_EQ(r.verdict, Verdict::Sat);
    ASSERT_TRUE(r.model);
    EXPECT_TRUE(holds(f, *r.model));
    EXPECT_EQ(r.model->domain_size, 2);
    EXPECT_EQ(r.model->array_vals.at("a"), (std::vector<std::int64_t>{3, 3}));
}

TEST(Ground, StoreThenRead) {
    Sig s = mutex_sig();
    Solver solver;
    EXPECT_EQ(solver.check_sat_ground(s("(distinct (select (store a i R) i) R)")).verdict, Verdict::Unsat);
    EXPECT_EQ(solver.check_sat_ground(s("(and (distinct i j) (= (select (store a i R) j) C))")).verdict, Verdict::Sat);
}

TEST(ExistsForall, UnsafeMeetsInitial) {
    Sig s = mutex_sig();
    Solver solver;
    auto r = solver.check_sat_exists_forall(s("(exists (x y) (and (< x y) (= (select a x) C) (= (select a y) C)))"),
                                            s("(forall (z) (= (select a z) I))"));
    EXPECT_EQ(r.verdict, Verdict::Unsat);
}

TEST(ExistsForall, SingleRequester) {
    Sig s = mutex_sig();
    Solver solver;
    auto r = solver.check_sat_exists_forall(s("(exists (x) (= (select a x) R))"),
                                            s("(forall (z) (or (= (select a z) I) (= (select a z) R)))"));
    ASSERT_EQ(r.verdict, Verdict::Sat);
    EXPECT_EQ(r.model->domain_size, 1);
    EXPECT_EQ(r.model->array_vals.at("a"), (std::vector<std::int64_t>{1}));
}

TEST(Entails, CriticalPreimageIsSubsumed) {
    // A process leaving C leaves two others there: every cube is unsafe already.
    SafetyProblem p = spec("mutex");
    Solver solver;
    EXPECT_EQ(solver.entails(p.unsafe, p.unsafe), Entailment::Yes);
    auto cubes = split_cubes(solver, preimage(p, *p.find_transition("t4"), p.unsafe));
    ASSERT_FALSE(cubes.empty());
    for (const auto& k : cubes) { EXPECT_EQ(solver.entails(k, p.unsafe), Entailment::Yes) << k->key; }
}

TEST(Entails, EnteringPreimageIsNew) {
    SafetyProblem p = spec("mutex");
    Solver solver;
    Formula pre = preimage(p, *p.find_transition("t3"), p.unsafe);
    auto cubes = split_cubes(solver, abstract_formula(pre, default_instantiation_set(pre)));
    std::size_t fresh = 0;
    for (const auto& k : cubes) {
        if (solver.entails(k, p.unsafe) != Entailment::No) { continue; }
        ++fresh;
        // An N=2 counter-model: one process waiting, one critical.
        bool witness = false;
        for (const auto& m : models_of(k, p, 2)) { witness = witness || !eval_formula(m, p.unsafe); }
        EXPECT_TRUE(witness) << k->key;
    }
    EXPECT_GT(fresh, 0u);
}

TEST(Cubes, SplitsDisjunctionAndDropsInconsistent) {
    Sig s = mutex_sig();
    Solver solver;
    auto cs = solver.cubes(s("(and (or (= i j) (< i j)) (or (= (select a i) C) (< j i)))"));
    // (= i j) & (< j i) is inconsistent, so is (< i j) & (< j i).
    EXPECT_EQ(cs.size(), 2u);
}

TEST(Budget, SimpleTheoryRaises) {
    Sig s = mutex_sig();
    Solver solver({Theory::Simple, 1});
    EXPECT_THROW(solver.check_sat_ground(s("(and (or (= i j) (< i j)) (or (= (select a i) C) (< j i)))")), ResourceError);
}

TEST(SmtLib, RendersQuery) {
    Sig s = mutex_sig();
    std::string text = to_smtlib(s("(and (< i j) (= (select a i) C))"));
    EXPECT_NE(text.find("(check-sat)"), std::string::npos);
    EXPECT_NE(text.find("(declare-const a (Array Int loc))"), std::string::npos);
}

// Agreement with enumeration on a fixed schedule of ground formulas with
// offsets and integer cells. Enumeration bounds the domain, so only one
// direction of emptiness is exact; Sat models are checked directly.
TEST(Differential, DiffArithAgainstEnumeration) {
    Sig s("(var p int) (var I index) (var J index) (var L index) (array b index int)", "diffarith");
    const std::vector<std::string> pool{
        "(= p 2)",        "(< p 1)",        "(distinct I L)",        "(= (+ J 1) L)",         "(< I J)",
        "(<= J (+ I 1))", "(= (select b J) 0)", "(distinct (select b (+ J 1)) 0)", "(< (select b I) (select b J))",
        "(= (select (store b I 1) J) 0)", "(= (select b (+ I 2)) p)", "(<= (+ p 1) (select b L))",
    };
    Solver solver({Theory::DiffArith});
    std::size_t sat = 0;
    for (std::size_t n = 0; n < 120; ++n) {
        std::vector<Formula> lits;
        for (std::size_t k = 0; k < 3 + n % 3; ++k) {
            Formula l = s(pool[(n * (k + 2) + k * 5) % pool.size()]);
            lits.push_back(((n >> k) & 1) ? neg(l) : l);
        }
        Formula f = n % 4 == 0 ? disj({conj({lits[0], lits[1]}), conj({lits[2]})}) : conj(lits);
        SatResult r = solver.check_sat_ground(f);
        bool enumerated = !models_of(f, s.problem, 3, {0, 3}).empty();
        if (enumerated) { EXPECT_EQ(r.verdict, Verdict::Sat) << f->key; }
        if (r.verdict == Verdict::Sat) {
            ++sat;
            ASSERT_TRUE(r.model);
            EXPECT_TRUE(holds(f, *r.model)) << f->key;
        }
        EXPECT_NE(r.verdict, Verdict::Unknown) << f->key;
    }
    EXPECT_GT(sat, 10u);
}

} // namespace
