#pragma once

#include "abreach/eval.hpp"
#include "abreach/problem.hpp"
#include "abreach/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abreach {

/// Range of every Int-sorted value (scalars and array cells).
struct IntBounds {
    std::int64_t lo = 0;
    std::int64_t hi = 3;
};

using ConcreteState = Model;

/// The system restricted to index domain {0..N-1} and bounded integers.
struct FiniteInstance {
    const SafetyProblem* problem = nullptr;
    std::int64_t n = 1;
    IntBounds bounds;
};

/// Throws TooLarge when the state space exceeds 10^7 states.
FiniteInstance instantiate(const SafetyProblem& p, std::int64_t n, IntBounds bounds = {});

struct RunStep {
    std::string transition; // empty for the initial state
    ConcreteState state;
};

struct OracleResult {
    bool safe = true;
    std::vector<RunStep> counterexample; // shortest, when unsafe
    std::size_t states = 0;
};

OracleResult forward_reach(const FiniteInstance& inst);

bool eval_formula(const ConcreteState& s, const Formula& f);

/// All states over `signature` at domain size n satisfying f, in
/// lexicographic order of the signature.
std::vector<ConcreteState> models_of(const Formula& f, const std::vector<VarDecl>& signature, std::int64_t n,
                                     IntBounds bounds = {});
/// models_of over the problem's state variables.
std::vector<ConcreteState> models_of(const Formula& f, const SafetyProblem& p, std::int64_t n, IntBounds bounds = {});

/// Successors of s under t; steps leaving the index domain or the integer
/// bounds are not steps.
std::vector<ConcreteState> successors(const FiniteInstance& inst, const ConcreteState& s, const Transition& t);

/// A concrete run from an initial state through the trace's base transitions
/// (accelerated steps unrolled one or more times) ending in an unsafe state.
std::optional<std::vector<RunStep>> replay_trace(const FiniteInstance& inst, const Trace& tr);

/// Canonical text of a state, usable as a set key.
std::string state_key(const ConcreteState& s);

} // namespace abreach
