#include "fixture.hpp"

#include "abreach/errors.hpp"

#include <gtest/gtest.h>

using namespace abreach;
using namespace abreach::testing;

namespace {

Sig prog() { return Sig("(var p int) (var I index) (var J index) (var L index) (var n index) (array a index int)", "diffarith"); }

TEST(Substitute, ReplacesArrayByWrite) {
    Sig s = mutex_sig();
    Formula f = s("(= (select a i) C)");
    Term upd = write(s.v("a"), s.v("i"), s("(= (select a i) R)")->rhs);
    EXPECT_EQ(substitute(f, {{"a", upd}})->key, s("(= (select (store a i R) i) C)")->key);
}

TEST(Substitute, LeavesBoundVariables) {
    Sig s = mutex_sig();
    Formula f = s("(exists (x) (= (select a x) C))");
    EXPECT_EQ(substitute(f, {{"i", s.v("j")}})->key, f->key);
}

TEST(Substitute, ShiftsCounter) {
    Sig s = prog();
    Formula f = s("(and (= p 2) (distinct J L))");
    EXPECT_EQ(substitute(f, {{"J", offset(s.v("J"), 1)}})->key, s("(and (= p 2) (distinct (+ J 1) L))")->key);
}

TEST(Substitute, RejectsSortChange) {
    Sig s = mutex_sig();
    EXPECT_THROW(substitute(s("(= (select a i) C)"), {{"i", s.v("a")}}), SortMismatch);
}

TEST(Nnf, DeMorgan) {
    Sig s = prog();
    EXPECT_EQ(to_nnf(s("(not (and (= I J) (< L n)))"))->key, s("(or (distinct I J) (<= n L))")->key);
}

TEST(Nnf, NegatedUniversal) {
    Sig s = mutex_sig();
    EXPECT_EQ(to_nnf(s("(not (forall (z) (= (select a z) I)))"))->key, s("(exists (z) (distinct (select a z) I))")->key);
}

TEST(Nnf, DoubleNegation) {
    Sig s = prog();
    EXPECT_EQ(to_nnf(s("(not (not (= p 2)))"))->key, s("(= p 2)")->key);
}

TEST(ReadOverWrite, PointWrite) {
    Sig s = mutex_sig();
    Formula f = s("(= (select (store a i R) j) C)");
    Formula r = reduce_read_over_write(f);
    Formula want = s("(or (and (= i j) (= R C)) (and (distinct i j) (= (select a j) C)))");
    for (std::int64_t n = 1; n <= 3; ++n) { EXPECT_EQ(model_keys(r, s.problem, n), model_keys(want, s.problem, n)); }
    EXPECT_TRUE(collect_terms(r, [](const Term& t) { return t->kind == TermKind::Write; }).empty());
}

TEST(ReadOverWrite, RangeWrite) {
    Sig s = prog();
    Formula f = s("(= (select (store-range a I (- n 1) 0) J) 0)");
    Formula r = reduce_read_over_write(f);
    Formula want = s("(or (and (<= I J) (<= J (- n 1))) (and (not (and (<= I J) (<= J (- n 1)))) (= (select a J) 0)))");
    EXPECT_EQ(model_keys(r, s.problem, 3, {0, 1}), model_keys(want, s.problem, 3, {0, 1}));
}

TEST(ReadOverWrite, NoWriteIsIdentity) {
    Sig s = mutex_sig();
    Formula f = s("(= (select a j) C)");
    EXPECT_EQ(reduce_read_over_write(f)->key, f->key);
}

TEST(Instantiate, LeftNeighbours) {
    Sig s = mutex_sig();
    Formula f = s("(exists (x) (and (= (select a x) W) (forall (y) (=> (< y x) (= (select a y) I)))))");
    Formula got = instantiate_universals(f, {index_var("x")});
    Formula want = s("(exists (x) (and (= (select a x) W) (=> (< x x) (= (select a x) I))))");
    EXPECT_EQ(got->key, want->key);
}

TEST(Instantiate, ConjunctionOfInstances) {
    Sig s = mutex_sig();
    Formula got = instantiate_universals(s("(forall (z) (= (select a z) I))"), {s.v("i"), s.v("j")});
    EXPECT_EQ(got->key, s("(and (= (select a i) I) (= (select a j) I))")->key);
}

TEST(Instantiate, EmptySetThrows) {
    Sig s = mutex_sig();
    EXPECT_THROW(instantiate_universals(s("(forall (z) (= (select a z) I))"), {}), EmptyInstantiationSet);
}

TEST(FreeIndexVars, Examples) {
    Sig s = mutex_sig();
    auto names = [](const std::vector<Term>& ts) {
        std::vector<std::string> r;
        for (const auto& t : ts) { r.push_back(t->name); }
        return r;
    };
    EXPECT_EQ(names(free_index_vars(s("(and (exists (x) (= (select a x) C)) (= (select a j) C))"))),
              std::vector<std::string>{"j"});
    EXPECT_TRUE(free_index_vars(s("(forall (z) (= (select a z) I))")).empty());
    Sig p = prog();
    EXPECT_EQ(names(free_index_vars(p("(and (distinct (select a (+ J 1)) 0) (= (select a J) 0))"))),
              std::vector<std::string>{"J"});
}

// Brute-force: instances of a universal never lose models.
TEST(Instantiate, OverApproximatesOnSmallDomains) {
    Sig s = mutex_sig();
    const std::vector<std::string> bodies{
        "(=> (< y x) (= (select a y) I))",
        "(or (= y x) (= (select a y) I) (= (select a y) R))",
        "(=> (distinct y x) (distinct (select a y) C))",
        "(or (< x y) (= (select a y) (select a x)))",
    };
    for (const auto& b : bodies) {
        Formula f = s("(exists (x) (and (= (select a x) W) (forall (y) " + b + ")))");
        Formula g = instantiate_universals(f, {index_var("x")});
        auto mf = model_keys(f, s.problem, 3);
        auto mg = model_keys(g, s.problem, 3);
        EXPECT_TRUE(std::includes(mg.begin(), mg.end(), mf.begin(), mf.end())) << b;
    }
}

// models_of is invariant under NNF and read-over-write reduction.
TEST(Eval, NormalFormsPreserveModels) {
    Sig s = mutex_sig();
    const std::vector<std::string> corpus{
        "(not (and (= (select a i) C) (< i j)))",
        "(= (select (store a i C) j) C)",
        "(not (forall (z) (or (= (select a z) I) (= (select (store a i R) z) R))))",
        "(exists (x) (and (< i x) (not (= (select (store (store a j W) k I) x) W))))",
        "(=> (= i j) (distinct (select (store a i C) j) (select a k)))",
    };
    for (const auto& text : corpus) {
        Formula f = s(text);
        auto m = model_keys(f, s.problem, 3);
        EXPECT_EQ(m, model_keys(to_nnf(f), s.problem, 3)) << text;
        EXPECT_EQ(m, model_keys(reduce_read_over_write(f), s.problem, 3)) << text;
        EXPECT_EQ(m, model_keys(simplify(to_nnf(reduce_read_over_write(f))), s.problem, 3)) << text;
    }
}

TEST(Eval, UndefinedIndexMakesLiteralFalse) {
    Sig s = prog();
    Formula f = s("(= (select a (+ J 1)) 0)");
    for (const auto& m : models_of(f, s.problem, 2, {0, 1})) { EXPECT_EQ(m.index_vals.at("J"), 0); }
}

} // namespace
