#include "abreach/acceleration.hpp"

#include "abreach/transforms.hpp"

#include <algorithm>
#include <set>

namespace abreach {

namespace {

bool mentions(const Term& t, const std::string& name) {
    for (const auto& v : free_vars(t)) {
        if (v->name == name) { return true; }
    }
    return false;
}

bool mentions(const Formula& f, const std::string& name) {
    for (const auto& v : free_vars(f)) {
        if (v->name == name) { return true; }
    }
    return false;
}

std::vector<Formula> literals(const Formula& g) {
    if (g->kind == FormulaKind::True) { return {}; }
    if (g->kind == FormulaKind::And) { return g->children; }
    return {g};
}

bool is_identity(const Term& u, const VarDecl& v) { return u->kind == TermKind::Var && u->name == v.name; }

// Reads in the literal touch the counter only as read(a, c).
bool reads_only_at(const Term& t, const std::string& c) {
    if (t->kind == TermKind::Read) { return t->args[1]->kind == TermKind::Var && t->args[1]->name == c; }
    if (t->kind == TermKind::Offset) { return reads_only_at(t->args[0], c); }
    return true;
}

} // namespace

LoopMatch match_loop_pattern(const SafetyProblem& p, const Transition& t) {
    auto no = [](std::string why) { return LoopMatch{std::nullopt, std::move(why)}; };
    if (classify_transition(t) != TransitionShape::Ground) { return no("not a ground transition"); }
    LoopPattern pat;
    pat.base = t.name;
    std::set<std::string> changed;
    for (const auto& v : p.vars) {
        const Term& u = t.update.at(v.name);
        if (is_identity(u, v)) { continue; }
        if (v.sort.is_index() && u->kind == TermKind::Offset && u->value == 1 && u->args[0]->kind == TermKind::Var &&
            u->args[0]->name == v.name) {
            if (pat.counter) { return no("more than one counter"); }
            pat.counter = var(v.name, v.sort);
            continue;
        }
        if (v.sort.is_array() && u->kind == TermKind::Write && is_identity(u->args[0], v)) {
            if (!pat.written.empty()) { return no("more than one array write"); }
            pat.written = v.name;
            pat.value = u->args[2];
            continue;
        }
        // A constant assignment repeating a guard equality is a frame.
        if (u->kind == TermKind::IntConst || u->kind == TermKind::EnumConst) {
            bool pinned = false;
            for (const auto& l : literals(t.guard)) {
                pinned = pinned || (l->kind == FormulaKind::Atom && l->rel == Rel::Eq &&
                                    ((l->lhs->key == v.name && l->rhs->key == u->key) ||
                                     (l->rhs->key == v.name && l->lhs->key == u->key)));
            }
            if (pinned) { continue; }
        }
        return no("update of " + v.name + " is neither a frame, the counter step nor a write at the counter");
    }
    if (!pat.counter) { return no("no index counter advanced by one"); }
    const std::string c = pat.counter->name;
    if (!pat.written.empty()) {
        const Term& w = t.update.at(pat.written);
        if (w->args[1]->key != c) { return no("write position is not the counter"); }
        if (mentions(pat.value, c) || mentions(pat.value, pat.written)) { return no("written value is not invariant"); }
    }
    bool bounded = false;
    for (const auto& l : literals(t.guard)) {
        if (l->kind != FormulaKind::Atom) { return no("guard is not a conjunction of literals"); }
        if (!mentions(l, c)) {
            if (!pat.written.empty() && mentions(l, pat.written)) { return no("guard reads the written array"); }
            pat.invariant.push_back(l);
            continue;
        }
        if (!reads_only_at(l->lhs, c) || !reads_only_at(l->rhs, c)) { return no("guard reads away from the counter"); }
        if (l->rel == Rel::Ne && ((l->lhs->key == c && !mentions(l->rhs, c)) || (l->rhs->key == c && !mentions(l->lhs, c)))) {
            bounded = true;
        }
        pat.per_step.push_back(l);
    }
    if (!bounded) { return no("no bound literal on the counter"); }
    for (const auto& l : pat.per_step) {
        for (const auto& v : free_vars(l)) {
            if (v->name == c) { continue; }
            const VarDecl* d = p.find_var(v->name);
            if (d && !is_identity(t.update.at(v->name), *d) && v->name != pat.written) {
                bool pinned = false;
                for (const auto& g : pat.invariant) { pinned = pinned || mentions(g, v->name); }
                if (!pinned) { return no("per-step guard depends on updated " + v->name); }
            }
        }
    }
    return {pat, ""};
}

Transition accelerate(const SafetyProblem& p, const LoopPattern& pat) {
    const Transition* base = p.find_transition(pat.base);
    if (!base) { throw std::invalid_argument("no transition " + pat.base); }
    Term m = index_var("_m");
    Term k = index_var("_k");
    Transition r;
    r.name = pat.base + "+";
    r.accelerates = pat.base;
    r.params = {m};
    std::vector<Formula> g = pat.invariant;
    g.push_back(lt(pat.counter, m));
    r.guard = conj(g);
    std::vector<Formula> step;
    for (const auto& l : pat.per_step) { step.push_back(substitute(l, {{pat.counter->name, k}})); }
    r.universal_vars = {k};
    r.universal_body = disj({lt(k, pat.counter), le(m, k), conj(step)});
    r.update = base->update;
    r.update[pat.counter->name] = m;
    if (!pat.written.empty()) {
        const VarDecl* a = p.find_var(pat.written);
        r.update[pat.written] = interval_write(var(a->name, a->sort), pat.counter, offset(m, -1), pat.value);
    }
    return r;
}

SafetyProblem with_accelerations(const SafetyProblem& p) {
    SafetyProblem q = p;
    q.transitions.clear();
    for (const auto& t : p.transitions) {
        LoopMatch mt = match_loop_pattern(p, t);
        if (mt.pattern) { q.transitions.push_back(accelerate(p, *mt.pattern)); }
        q.transitions.push_back(t);
    }
    return q;
}

std::vector<CompareResult> compose_check_upto(const FiniteInstance& inst, const Transition& t, int max_n,
                                              const Transition& t_acc) {
    const SafetyProblem& p = *inst.problem;
    auto pat = match_loop_pattern(p, t);
    if (!pat.pattern) { throw std::invalid_argument(t.name + " is not acceleratable: " + pat.reason); }
    const std::string c = pat.pattern->counter->name;
    std::vector<CompareResult> r(static_cast<std::size_t>(std::max(max_n, 0)));
    for (const auto& s : models_of(top(), p, inst.n, inst.bounds)) {
        // Accelerated successors grouped by how far the counter moved.
        std::vector<std::set<std::string>> accelerated(r.size() + 1);
        for (const auto& y : successors(inst, s, t_acc)) {
            std::int64_t d = y.index_vals.at(c) - s.index_vals.at(c);
            if (d >= 1 && d <= max_n) { accelerated[d].insert(state_key(y)); }
        }
        std::vector<ConcreteState> layer{s};
        for (int n = 1; n <= max_n; ++n) {
            std::vector<ConcreteState> next;
            std::set<std::string> iterated;
            for (const auto& x : layer) {
                for (auto& y : successors(inst, x, t)) {
                    iterated.insert(state_key(y));
                    next.push_back(std::move(y));
                }
            }
            layer = std::move(next);
            CompareResult& cr = r[n - 1];
            if (cr.equal && iterated != accelerated[n]) { cr = {false, state_key(s)}; }
        }
    }
    return r;
}

CompareResult compose_check(const FiniteInstance& inst, const Transition& t, int n, const Transition& t_acc) {
    if (n < 1) { throw std::invalid_argument("compose_check needs n >= 1"); }
    return compose_check_upto(inst, t, n, t_acc).back();
}

} // namespace abreach
