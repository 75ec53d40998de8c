#pragma once

#include "abreach/problem.hpp"

#include <string>
#include <vector>

namespace abreach {

enum class InstSet { Default, AllVars };

/// Existential prefix variables of f, in order, then free index variables
/// occurring under a universal, then offsets of those terms found in the
/// matrix. Throws EmptyInstantiationSet when f has no existential prefix.
std::vector<Term> default_instantiation_set(const Formula& f);
/// The default set followed by the free index variables of f.
std::vector<Term> all_vars_instantiation_set(const Formula& f);
std::vector<Term> instantiation_set(const Formula& f, InstSet kind);

/// Over-approximates an exists-forall formula by replacing each universal
/// with its instances over X. The result is existential.
Formula abstract_formula(const Formula& f, const std::vector<Term>& X);

/// What the crash transform adds to a problem.
struct CrashInfo {
    std::string location; // location array
    EnumRef sort;         // location sort extended with the crashed value
    Term crashed;

    Term loc() const;
    /// loc[x] != crashed
    Formula alive(const Term& x) const;
};

/// Prepares the crash sort for p. Throws ValidationError when p has no
/// location array.
CrashInfo crash_info(const SafetyProblem& p);

/// Restricts existentials to live indexes and universals to live indexes.
/// The formula must already use the extended sort.
Formula relativize(const Formula& f, const CrashInfo& c);

/// Rewrites the universally guarded transition `name` into a functional
/// one that crashes every index violating the universal guard; all other
/// transitions, the initial and the unsafe formula are retyped and
/// relativized to live indexes.
SafetyProblem abstract_transition(const SafetyProblem& p, const std::string& name);
/// Same, for every universally guarded transition that is not accelerated.
SafetyProblem abstract_all(const SafetyProblem& p);

/// Formula over the extended sort stating no index is crashed (for
/// comparing crash-free models).
Formula crash_free(const CrashInfo& c);

} // namespace abreach
