#include "abreach/abstraction.hpp"

#include "abreach/errors.hpp"
#include "abreach/transforms.hpp"

#include <functional>
#include <set>

namespace abreach {

std::vector<Term> default_instantiation_set(const Formula& f) {
    auto [vars, matrix] = split_exists(f);
    if (vars.empty()) { throw EmptyInstantiationSet(); }
    std::vector<Term> out = vars;
    std::set<std::string> seen;
    for (const auto& v : vars) { seen.insert(v->name); }
    // Free index variables the universals compare against (counters of
    // accelerated loops), then offsets of anything already chosen.
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g->kind == FormulaKind::Forall) {
            for (const auto& v : free_index_vars(g)) {
                if (v->name == kTopIndex || v->name == kZeroIndex) { continue; }
                if (seen.insert(v->name).second) { out.push_back(v); }
            }
            return;
        }
        for (const auto& c : g->children) { walk(c); }
    };
    walk(matrix);
    std::set<std::string> roots = seen;
    for (const auto& t : collect_terms(matrix, [&](const Term& t) {
             return t->kind == TermKind::Offset && t->args[0]->kind == TermKind::Var && roots.count(t->args[0]->name);
         })) {
        if (seen.insert(t->key).second) { out.push_back(t); }
    }
    return out;
}

std::vector<Term> all_vars_instantiation_set(const Formula& f) {
    auto [vars, matrix] = split_exists(f);
    std::vector<Term> out = vars;
    std::set<std::string> seen;
    for (const auto& v : vars) { seen.insert(v->name); }
    for (const auto& v : free_index_vars(f)) {
        if (v->name == kTopIndex || v->name == kZeroIndex) { continue; }
        if (seen.insert(v->name).second) { out.push_back(v); }
    }
    if (out.empty()) { throw EmptyInstantiationSet(); }
    return out;
}

std::vector<Term> instantiation_set(const Formula& f, InstSet kind) {
    return kind == InstSet::Default ? default_instantiation_set(f) : all_vars_instantiation_set(f);
}

Formula abstract_formula(const Formula& f, const std::vector<Term>& X) {
    auto [vars, matrix] = split_exists(f);
    return exists(vars, simplify(instantiate_universals(matrix, X)));
}

// ---- crash transform -----------------------------------------------------

Term CrashInfo::loc() const { return var(location, Sort::array_of(Sort::enumeration(sort))); }

Formula CrashInfo::alive(const Term& x) const { return ne(read(loc(), x), crashed); }

CrashInfo crash_info(const SafetyProblem& p) {
    const std::string a = p.location_array();
    if (a.empty()) { throw ValidationError("the crash transform needs a location array in " + p.name); }
    const EnumRef& old = p.find_var(a)->sort.decl();
    auto decl = std::make_shared<EnumDecl>(*old);
    std::string name = "crashed";
    while (decl->index_of(name) >= 0) { name += "_"; }
    decl->constants.push_back(name);
    return {a, decl, enum_const(decl, name)};
}

Formula relativize(const Formula& f, const CrashInfo& c) {
    switch (f->kind) {
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& g : f->children) { cs.push_back(relativize(g, c)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Not: return neg(relativize(f->children[0], c));
        case FormulaKind::Exists: {
            std::vector<Formula> cs;
            for (const auto& x : f->vars) { cs.push_back(c.alive(x)); }
            cs.push_back(relativize(f->children[0], c));
            return exists(f->vars, conj(cs));
        }
        case FormulaKind::Forall: {
            std::vector<Formula> cs;
            for (const auto& x : f->vars) { cs.push_back(neg(c.alive(x))); }
            cs.push_back(relativize(f->children[0], c));
            return forall(f->vars, disj(cs));
        }
        default: return f;
    }
}

Formula crash_free(const CrashInfo& c) {
    Term k = index_var("k");
    return forall({k}, c.alive(k));
}

namespace {

Transition retype(const Transition& t, const EnumRef& d) {
    Transition r = t;
    r.guard = retype_enum(t.guard, d);
    r.universal_body = retype_enum(t.universal_body, d);
    for (auto& [name, u] : r.update) { u = retype_enum(u, d); }
    return r;
}

Transition relativize_transition(const Transition& t, const CrashInfo& c) {
    Transition r = t;
    std::vector<Formula> g{t.guard};
    for (const auto& x : t.params) { g.push_back(c.alive(x)); }
    r.guard = conj(g);
    if (t.has_universal()) {
        std::vector<Formula> b;
        for (const auto& k : t.universal_vars) { b.push_back(neg(c.alive(k))); }
        b.push_back(t.universal_body);
        r.universal_body = disj(b);
    }
    return r;
}

Transition crash_transition(const Transition& t, const CrashInfo& c) {
    if (t.universal_vars.size() != 1) { throw ShapeError(t.name + ": the crash transform needs one universal variable"); }
    const Term& k = t.universal_vars[0];
    std::vector<Formula> g{t.guard};
    for (const auto& x : t.params) {
        g.push_back(substitute(t.universal_body, {{k->name, x}}));
        g.push_back(c.alive(x));
    }
    Transition r = t;
    r.guard = simplify(conj(g));
    Term bound = index_var("_k");
    Formula violated = conj({c.alive(bound), neg(substitute(t.universal_body, {{k->name, bound}}))});
    Term crashed_loc = cond_write(c.loc(), bound, violated, c.crashed);
    for (auto& [name, u] : r.update) { u = substitute(u, {{c.location, crashed_loc}}); }
    r.universal_vars.clear();
    r.universal_body = top();
    r.abstracts = t.name;
    return r;
}

SafetyProblem crash_problem(const SafetyProblem& p, const std::function<bool(const Transition&)>& pick) {
    CrashInfo c = crash_info(p);
    const EnumRef old = p.find_var(c.location)->sort.decl();
    SafetyProblem q = p;
    for (auto& e : q.enums) {
        if (e->name == old->name) { e = c.sort; }
    }
    for (auto& v : q.vars) {
        if (v.sort.decl() && v.sort.decl()->name == old->name) {
            v.sort = v.sort.is_array() ? Sort::array_of(Sort::enumeration(c.sort)) : Sort::enumeration(c.sort);
        }
    }
    q.init = relativize(retype_enum(p.init, c.sort), c);
    q.unsafe = relativize(retype_enum(p.unsafe, c.sort), c);
    for (auto& t : q.transitions) {
        Transition r = retype(t, c.sort);
        t = (pick(t) && t.has_universal()) ? crash_transition(r, c) : relativize_transition(r, c);
    }
    return q;
}

} // namespace

SafetyProblem abstract_transition(const SafetyProblem& p, const std::string& name) {
    const Transition* t = p.find_transition(name);
    if (!t) { throw std::invalid_argument("no transition " + name); }
    if (!t->has_universal()) { throw ShapeError(name + " is not universally guarded"); }
    return crash_problem(p, [&](const Transition& x) { return x.name == name; });
}

SafetyProblem abstract_all(const SafetyProblem& p) {
    // Accelerated transitions keep their universal (relativized); callers
    // abstract their preimages at run time.
    return crash_problem(p, [](const Transition& t) { return t.accelerates.empty(); });
}

} // namespace abreach
