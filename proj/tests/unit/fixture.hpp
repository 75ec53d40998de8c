#pragma once

#include "abreach/engine.hpp"
#include "abreach/transforms.hpp"

#include <set>
#include <string>

namespace abreach::testing {

inline std::string spec_path(const std::string& name) { return std::string(ABREACH_SPECS) + "/" + name + ".abs"; }
inline SafetyProblem spec(const std::string& name) { return load_problem(spec_path(name)); }

/// Declarations shared by the formula-level tests.
struct Sig {
    std::string decls;
    SafetyProblem problem;

    explicit Sig(std::string d, const std::string& theory = "simple") : decls("(theory " + theory + ") " + std::move(d)) {
        problem = parse_problem("(system sig " + decls + " (init true) (unsafe false))");
    }

    /// A formula over the declared symbols, free variables allowed.
    Formula operator()(const std::string& text) const {
        return parse_formula(problem, text);
    }

    Term v(const std::string& name) const { return var(name, problem.find_var(name)->sort); }
};

/// The mutex signature: one location array and three index scalars.
inline Sig mutex_sig() { return Sig("(enum-sort loc (I R W C)) (var i index) (var j index) (var k index) (array a index loc)"); }

inline std::set<std::string> model_keys(const Formula& f, const SafetyProblem& p, std::int64_t n, IntBounds b = {}) {
    std::set<std::string> r;
    for (const auto& m : models_of(f, p, n, b)) { r.insert(state_key(m)); }
    return r;
}

} // namespace abreach::testing
