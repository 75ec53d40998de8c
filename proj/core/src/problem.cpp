#include "abreach/problem.hpp"

#include "abreach/errors.hpp"
#include "abreach/transforms.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace abreach {

const char* shape_name(TransitionShape s) {
    switch (s) {
        case TransitionShape::Ground: return "ground";
        case TransitionShape::Functional: return "functional";
        case TransitionShape::UniversallyGuarded: return "universally-guarded";
    }
    return "?";
}

Formula Transition::full_guard() const {
    return conj({guard, forall(universal_vars, universal_body)});
}

TransitionShape classify_transition(const Transition& t) {
    if (t.has_universal()) { return TransitionShape::UniversallyGuarded; }
    if (t.params.empty()) { return TransitionShape::Ground; }
    return TransitionShape::Functional;
}

const VarDecl* SafetyProblem::find_var(const std::string& n) const {
    for (const auto& v : vars) {
        if (v.name == n) { return &v; }
    }
    return nullptr;
}

const Transition* SafetyProblem::find_transition(const std::string& n) const {
    for (const auto& t : transitions) {
        if (t.name == n) { return &t; }
    }
    return nullptr;
}

std::string SafetyProblem::location_array() const {
    if (!location.empty()) { return location; }
    std::string found;
    for (const auto& v : vars) {
        if (v.sort.is_array() && v.sort.element().is_enum()) {
            if (!found.empty()) { return ""; }
            found = v.name;
        }
    }
    return found;
}

Formula transition_formula(const SafetyProblem& p, const Transition& t) {
    std::vector<Formula> parts{t.full_guard()};
    for (const auto& v : p.vars) {
        Term primed = var(v.name + "'", v.sort);
        if (v.sort.is_array()) {
            Term k = index_var(fresh_name("k"));
            parts.push_back(forall({k}, eq(read(primed, k), read(t.update.at(v.name), k))));
        } else {
            parts.push_back(eq(primed, t.update.at(v.name)));
        }
    }
    return exists(t.params, conj(parts));
}

// ---- validation ----------------------------------------------------------

namespace {

bool has_quantifier(const Formula& f) { return !is_quantifier_free(f); }

void check_quantifier_prefix(const Formula& f, FormulaKind allowed, const std::string& what) {
    Formula g = to_nnf(f);
    std::function<void(const Formula&)> walk = [&](const Formula& h) {
        if (h->kind == FormulaKind::Exists || h->kind == FormulaKind::Forall) {
            if (h->kind != allowed) { throw ShapeError(what + " has a disallowed quantifier: " + f->key); }
            if (has_quantifier(h->children[0])) { throw ShapeError(what + " has nested quantifiers: " + f->key); }
            return;
        }
        for (const auto& c : h->children) { walk(c); }
    };
    walk(g);
}

void check_theory(const SafetyProblem& p, const Formula& f, const std::string& what) {
    if (p.theory == Theory::Simple && !order_only(f)) {
        throw ValidationError(what + " uses index arithmetic, which requires theory diffarith");
    }
}

void check_free(const Formula& f, const std::set<std::string>& allowed, const std::string& what) {
    for (const auto& v : free_vars(f)) {
        if (!allowed.count(v->name)) { throw ValidationError(what + " mentions unbound variable " + v->name); }
    }
}

} // namespace

void validate(const SafetyProblem& p) {
    std::set<std::string> state;
    for (const auto& v : p.vars) {
        if (!state.insert(v.name).second) { throw ValidationError("duplicate variable " + v.name); }
    }
    if (!p.location.empty()) {
        const VarDecl* a = p.find_var(p.location);
        if (!a || !a->sort.is_array() || !a->sort.element().is_enum()) {
            throw ValidationError("location " + p.location + " is not an enum-valued array");
        }
    }
    check_quantifier_prefix(p.init, FormulaKind::Forall, "init");
    check_quantifier_prefix(p.unsafe, FormulaKind::Exists, "unsafe");
    check_free(p.init, state, "init");
    check_free(p.unsafe, state, "unsafe");
    check_theory(p, p.init, "init");
    check_theory(p, p.unsafe, "unsafe");

    std::set<std::string> names;
    for (const auto& t : p.transitions) {
        const std::string what = "transition " + t.name;
        if (!names.insert(t.name).second) { throw ValidationError("duplicate transition " + t.name); }
        std::set<std::string> scope = state;
        for (const auto& x : t.params) {
            if (!x->sort.is_index() || x->kind != TermKind::Var) { throw ShapeError(what + ": parameters must be index variables"); }
            if (!scope.insert(x->name).second) { throw ShapeError(what + ": parameter " + x->name + " is not fresh"); }
        }
        if (has_quantifier(t.guard)) { throw ShapeError(what + ": guard must be quantifier-free"); }
        if (has_quantifier(t.universal_body)) { throw ShapeError(what + ": universal body must be quantifier-free"); }
        check_free(t.guard, scope, what + " guard");
        std::set<std::string> inner = scope;
        for (const auto& k : t.universal_vars) {
            if (!inner.insert(k->name).second) { throw ShapeError(what + ": universal variable " + k->name + " is not fresh"); }
        }
        check_free(t.universal_body, inner, what + " universal guard");
        check_theory(p, t.full_guard(), what);
        for (const auto& v : p.vars) {
            auto it = t.update.find(v.name);
            if (it == t.update.end()) { throw ShapeError(what + ": no update for " + v.name); }
            if (it->second->sort != v.sort) {
                throw SortMismatch(what + ": update of " + v.name + " has sort " + it->second->sort.name());
            }
            for (const auto& fv : free_vars(it->second)) {
                if (!scope.count(fv->name)) { throw ValidationError(what + ": update mentions unbound variable " + fv->name); }
            }
            if (p.theory == Theory::Simple && contains_index_arith(it->second)) {
                throw ValidationError(what + " uses index arithmetic, which requires theory diffarith");
            }
        }
        for (const auto& [name, _] : t.update) {
            if (!state.count(name)) { throw ValidationError(what + ": assignment to undeclared " + name); }
        }
    }
}

// ---- printing ------------------------------------------------------------

namespace {

std::string vars_list(const std::vector<Term>& vs) {
    std::string s;
    for (const auto& v : vs) { s += (s.empty() ? "" : " ") + v->name; }
    return s;
}

std::string sort_text(const Sort& s) {
    switch (s.kind()) {
        case SortKind::Index: return "index";
        case SortKind::Int: return "int";
        case SortKind::Enum: return s.decl()->name;
        case SortKind::Array: return sort_text(s.element());
    }
    return "?";
}

} // namespace

std::string print_problem(const SafetyProblem& p) {
    std::ostringstream os;
    os << "(system " << p.name << "\n";
    os << "  (theory " << (p.theory == Theory::Simple ? "simple" : "diffarith") << ")\n";
    for (const auto& e : p.enums) {
        os << "  (enum-sort " << e->name << " (";
        for (std::size_t i = 0; i < e->constants.size(); ++i) { os << (i ? " " : "") << e->constants[i]; }
        os << "))\n";
    }
    for (const auto& v : p.vars) {
        if (v.sort.is_array()) {
            os << "  (array " << v.name << " index " << sort_text(v.sort) << ")\n";
        } else {
            os << "  (var " << v.name << " " << sort_text(v.sort) << ")\n";
        }
    }
    if (!p.location.empty()) { os << "  (location " << p.location << ")\n"; }
    os << "  (init " << p.init->key << ")\n";
    for (const auto& t : p.transitions) {
        os << "  (transition " << t.name << "\n    ";
        if (!t.params.empty()) { os << "(exists (" << vars_list(t.params) << ")\n      "; }
        os << "(and";
        if (t.guard->kind == FormulaKind::And) {
            for (const auto& g : t.guard->children) { os << " " << g->key; }
        } else if (t.guard->kind != FormulaKind::True) {
            os << " " << t.guard->key;
        }
        if (t.has_universal()) { os << "\n        (forall (" << vars_list(t.universal_vars) << ") " << t.universal_body->key << ")"; }
        os << "\n        (assign";
        for (const auto& v : p.vars) {
            const Term& u = t.update.at(v.name);
            if (u->kind == TermKind::Var && u->name == v.name) { continue; }
            os << " (" << v.name << " " << u->key << ")";
        }
        os << "))" << (t.params.empty() ? "" : ")") << ")\n";
    }
    os << "  (unsafe " << p.unsafe->key << "))\n";
    return os.str();
}

} // namespace abreach
