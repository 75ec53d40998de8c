#include "fixture.hpp"

#include "abreach/errors.hpp"

#include <gtest/gtest.h>

using namespace abreach;
using namespace abreach::testing;

namespace {

std::map<std::string, TransitionShape> shapes(const SafetyProblem& p) {
    std::map<std::string, TransitionShape> r;
    for (const auto& t : p.transitions) { r[t.name] = classify_transition(t); }
    return r;
}

TEST(Parse, MutexShapes) {
    SafetyProblem p = spec("mutex");
    ASSERT_EQ(p.transitions.size(), 5u);
    auto s = shapes(p);
    EXPECT_EQ(s["t1"], TransitionShape::UniversallyGuarded);
    EXPECT_EQ(s["t3"], TransitionShape::UniversallyGuarded);
    EXPECT_EQ(s["t2"], TransitionShape::Functional);
    EXPECT_EQ(s["t4"], TransitionShape::Functional);
    EXPECT_EQ(s["t5"], TransitionShape::Functional);
    EXPECT_EQ(p.location_array(), "a");
}

TEST(Parse, InitTestIsGround) {
    SafetyProblem p = spec("init_test");
    ASSERT_EQ(p.transitions.size(), 6u);
    for (const auto& t : p.transitions) { EXPECT_EQ(classify_transition(t), TransitionShape::Ground) << t.name; }
    EXPECT_EQ(p.theory, Theory::DiffArith);
}

TEST(Parse, BakeryIsDiffArith) {
    SafetyProblem p = spec("bakery");
    EXPECT_EQ(p.theory, Theory::DiffArith);
    EXPECT_EQ(p.location_array(), "a");
    EXPECT_EQ(classify_transition(*p.find_transition("enter")), TransitionShape::UniversallyGuarded);
}

TEST(Parse, UnassignedVariablesKeepTheirValue) {
    SafetyProblem p = spec("init_test");
    const Transition& t3 = *p.find_transition("t3");
    EXPECT_EQ(t3.update.at("a")->key, "a");
    EXPECT_EQ(t3.update.at("I")->key, "I");
    EXPECT_EQ(t3.update.at("J")->key, "(+ J 1)");
}

TEST(Print, RoundTripsEveryBundledSpec) {
    for (const std::string name : {"mutex", "mutex_buggy", "bakery", "init_test", "init_test_buggy"}) {
        SafetyProblem p = spec(name);
        std::string once = print_problem(p);
        std::string twice = print_problem(parse_problem(once));
        EXPECT_EQ(once, twice) << name;
    }
}

TEST(Errors, ReportsLineAndColumn) {
    try {
        parse_problem("(system x\n  (theory simple)\n  (var p int\n");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.col(), 1u);
    }
    try {
        parse_problem("");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.col(), 1u);
    }
}

TEST(Errors, UnknownDeclaration) {
    EXPECT_THROW(parse_problem("(system x (theory simple) (bogus) (init true) (unsafe false))"), ParseError);
}

TEST(Errors, ReservedIdentifier) {
    EXPECT_THROW(parse_problem("(system x (theory simple) (var _p index) (init true) (unsafe false))"), ParseError);
}

TEST(Errors, SortMismatch) {
    EXPECT_ANY_THROW(parse_problem(
        "(system x (theory simple) (enum-sort loc (I C)) (var p int) (init (= p I)) (unsafe false))"));
}

TEST(Errors, IndexArithmeticNeedsDiffArith) {
    const std::string body = "(var J index) (transition t (and (assign (J (+ J 1))))) (init true) (unsafe false))";
    EXPECT_THROW(parse_problem("(system x (theory simple) " + body), ValidationError);
    EXPECT_NO_THROW(parse_problem("(system x (theory diffarith) " + body));
}

TEST(Errors, UniversalInUnsafe) {
    EXPECT_THROW(parse_problem("(system x (theory simple) (enum-sort loc (I C)) (array a index loc) (init true)"
                               " (unsafe (forall (z) (= (select a z) C))))"),
                 ShapeError);
}

TEST(TransitionFormula, MentionsPrimedUpdate) {
    SafetyProblem p = spec("mutex");
    Formula f = transition_formula(p, *p.find_transition("t2"));
    EXPECT_EQ(f->kind, FormulaKind::Exists);
    EXPECT_NE(f->key.find("(select a' "), std::string::npos);
    EXPECT_NE(f->key.find("(store a i W)"), std::string::npos);
}

} // namespace
