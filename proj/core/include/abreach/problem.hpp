#pragma once

#include "abreach/solver.hpp"
#include "abreach/syntax.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace abreach {

struct VarDecl {
    std::string name;
    Sort sort;
};

enum class TransitionShape { Ground, Functional, UniversallyGuarded };

const char* shape_name(TransitionShape s);

/// exists params. guard && (forall universal_vars. universal_body) && x' = update(x)
struct Transition {
    std::string name;
    std::vector<Term> params;
    Formula guard = top();
    std::vector<Term> universal_vars;
    Formula universal_body = top();
    /// New value of every state variable; unassigned variables map to themselves.
    std::map<std::string, Term> update;

    /// Name of the transition this one accelerates, if any.
    std::string accelerates;
    /// Name of the transition this one was rewritten from by abstraction, if any.
    std::string abstracts;

    bool has_universal() const { return !universal_vars.empty(); }
    /// guard && forall-part, as one formula.
    Formula full_guard() const;
};

TransitionShape classify_transition(const Transition& t);

struct SafetyProblem {
    std::string name;
    Theory theory = Theory::Simple;
    std::vector<EnumRef> enums;
    std::vector<VarDecl> vars;
    std::string location; // location array, may be empty
    Formula init = top();
    std::vector<Transition> transitions;
    Formula unsafe = bot();

    const VarDecl* find_var(const std::string& name) const;
    const Transition* find_transition(const std::string& name) const;
    /// Declared location array, else the unique enum-valued array, else "".
    std::string location_array() const;
};

/// Throws ParseError (with line and column) on malformed input and
/// ValidationError/ShapeError when the system is ill-formed.
SafetyProblem parse_problem(const std::string& text);
SafetyProblem load_problem(const std::string& path);
/// A formula over sig's symbols; free index variables are allowed and
/// quantifier shapes are not restricted.
Formula parse_formula(const SafetyProblem& sig, const std::string& text);

/// Checks sorts, quantifier shapes and theory restrictions.
void validate(const SafetyProblem& p);

/// Source text accepted by parse_problem; parse(print(p)) prints identically.
std::string print_problem(const SafetyProblem& p);

/// The state formula a transition leads to from `phi`, as an existential
/// over the transition parameters (no abstraction applied).
Formula transition_formula(const SafetyProblem& p, const Transition& t);

} // namespace abreach
