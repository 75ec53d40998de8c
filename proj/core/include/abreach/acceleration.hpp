#pragma once

#include "abreach/oracle.hpp"
#include "abreach/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abreach {

/// A ground self-loop that advances one index counter by one, tests the
/// counter against invariant bounds and cells at the counter, and writes at
/// most one array cell at the counter with an invariant value.
struct LoopPattern {
    std::string base;
    Term counter;
    std::vector<Formula> invariant; // guard literals not mentioning the counter
    std::vector<Formula> per_step;  // guard literals mentioning the counter
    std::string written;            // array written at the counter, or ""
    Term value;                     // the value written
};

struct LoopMatch {
    std::optional<LoopPattern> pattern;
    std::string reason; // why not acceleratable
};

LoopMatch match_loop_pattern(const SafetyProblem& p, const Transition& t);

/// n iterations in one step: counter c moves to a parameter m > c, every
/// intermediate position satisfies the per-step guard, and the written
/// array gets the value on [c, m-1].
Transition accelerate(const SafetyProblem& p, const LoopPattern& pat);

/// Accelerated versions of every matching transition, each placed right
/// before its base.
SafetyProblem with_accelerations(const SafetyProblem& p);

struct CompareResult {
    bool equal = true;
    std::string witness; // a state whose successor sets differ
};

/// Compares the n-fold composition of t with t_acc restricted to m = c + n,
/// on every state of the finite instance.
CompareResult compose_check(const FiniteInstance& inst, const Transition& t, int n, const Transition& t_acc);
/// compose_check for n = 1..max_n in one pass over the states.
std::vector<CompareResult> compose_check_upto(const FiniteInstance& inst, const Transition& t, int max_n,
                                              const Transition& t_acc);

} // namespace abreach
