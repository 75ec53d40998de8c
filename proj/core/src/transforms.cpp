#include "abreach/transforms.hpp"

#include "abreach/errors.hpp"

#include <set>
#include <unordered_set>

namespace abreach {

namespace {

Term rebuild(const Term& t, const std::vector<Term>& args, const Formula& cond, const std::string& binder) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::EnumConst:
        case TermKind::IntConst: return t;
        case TermKind::Offset: return offset(args[0], t->value);
        case TermKind::Read: return read(args[0], args[1]);
        case TermKind::Write: return write(args[0], args[1], args[2]);
        case TermKind::IntervalWrite: return interval_write(args[0], args[1], args[2], args[3]);
        case TermKind::CondWrite: return cond_write(args[0], index_var(binder), cond, args[1]);
    }
    return t;
}

bool same_args(const Term& t, const std::vector<Term>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != t->args[i]) { return false; }
    }
    return true;
}

void term_free_vars(const Term& t, std::set<std::string>& bound, std::vector<Term>& out,
                    std::unordered_set<std::string>& seen);
void formula_free_vars(const Formula& f, std::set<std::string>& bound, std::vector<Term>& out,
                       std::unordered_set<std::string>& seen);

void term_free_vars(const Term& t, std::set<std::string>& bound, std::vector<Term>& out,
                    std::unordered_set<std::string>& seen) {
    if (t->kind == TermKind::Var) {
        if (!bound.count(t->name) && seen.insert(t->name).second) { out.push_back(t); }
        return;
    }
    for (const auto& a : t->args) { term_free_vars(a, bound, out, seen); }
    if (t->kind == TermKind::CondWrite) {
        bool added = bound.insert(t->name).second;
        formula_free_vars(t->cond, bound, out, seen);
        if (added) { bound.erase(t->name); }
    }
}

void formula_free_vars(const Formula& f, std::set<std::string>& bound, std::vector<Term>& out,
                       std::unordered_set<std::string>& seen) {
    switch (f->kind) {
        case FormulaKind::Atom:
            term_free_vars(f->lhs, bound, out, seen);
            term_free_vars(f->rhs, bound, out, seen);
            return;
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            std::vector<std::string> added;
            for (const auto& v : f->vars) {
                if (bound.insert(v->name).second) { added.push_back(v->name); }
            }
            formula_free_vars(f->children[0], bound, out, seen);
            for (const auto& n : added) { bound.erase(n); }
            return;
        }
        default:
            for (const auto& c : f->children) { formula_free_vars(c, bound, out, seen); }
    }
}

std::set<std::string> range_vars(const Substitution& s) {
    std::set<std::string> names;
    for (const auto& [_, t] : s) {
        for (const auto& v : free_vars(t)) { names.insert(v->name); }
    }
    return names;
}

/// Drops `names` from the substitution and renames those that would capture.
std::pair<Substitution, std::vector<Term>> enter_binder(const Substitution& s, const std::vector<Term>& vars) {
    Substitution inner = s;
    for (const auto& v : vars) { inner.erase(v->name); }
    auto captured = range_vars(inner);
    std::vector<Term> renamed;
    for (const auto& v : vars) {
        if (captured.count(v->name)) {
            auto fresh = var(fresh_name("r"), v->sort);
            inner[v->name] = fresh;
            renamed.push_back(fresh);
        } else {
            renamed.push_back(v);
        }
    }
    return {inner, renamed};
}

} // namespace

Term substitute(const Term& t, const Substitution& s) {
    if (s.empty()) { return t; }
    if (t->kind == TermKind::Var) {
        auto it = s.find(t->name);
        if (it == s.end()) { return t; }
        if (it->second->sort != t->sort) {
            throw SortMismatch("substituting " + it->second->key + " for " + t->name);
        }
        return it->second;
    }
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) { args.push_back(substitute(a, s)); }
    if (t->kind == TermKind::CondWrite) {
        auto [inner, renamed] = enter_binder(s, {index_var(t->name)});
        auto cond = substitute(t->cond, inner);
        if (same_args(t, args) && cond == t->cond && renamed[0]->name == t->name) { return t; }
        return rebuild(t, args, cond, renamed[0]->name);
    }
    if (same_args(t, args)) { return t; }
    return rebuild(t, args, nullptr, "");
}

Formula substitute(const Formula& f, const Substitution& s) {
    if (s.empty()) { return f; }
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False: return f;
        case FormulaKind::Atom: {
            auto l = substitute(f->lhs, s);
            auto r = substitute(f->rhs, s);
            if (l == f->lhs && r == f->rhs) { return f; }
            return atom(f->rel, l, r);
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(substitute(c, s)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Not: return neg(substitute(f->children[0], s));
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            auto [inner, renamed] = enter_binder(s, f->vars);
            auto body = substitute(f->children[0], inner);
            return f->kind == FormulaKind::Exists ? exists(renamed, body) : forall(renamed, body);
        }
    }
    return f;
}

Formula to_nnf(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atom: return f;
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(to_nnf(c)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Exists: return exists(f->vars, to_nnf(f->children[0]));
        case FormulaKind::Forall: return forall(f->vars, to_nnf(f->children[0]));
        case FormulaKind::Not: break;
    }
    const auto& g = f->children[0];
    switch (g->kind) {
        case FormulaKind::True: return bot();
        case FormulaKind::False: return top();
        case FormulaKind::Atom:
            switch (g->rel) {
                case Rel::Eq: return ne(g->lhs, g->rhs);
                case Rel::Ne: return eq(g->lhs, g->rhs);
                case Rel::Lt: return le(g->rhs, g->lhs);
                case Rel::Le: return lt(g->rhs, g->lhs);
            }
            break;
        case FormulaKind::Not: return to_nnf(g->children[0]);
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : g->children) { cs.push_back(to_nnf(neg(c))); }
            return g->kind == FormulaKind::And ? disj(cs) : conj(cs);
        }
        case FormulaKind::Exists: return forall(g->vars, to_nnf(neg(g->children[0])));
        case FormulaKind::Forall: return exists(g->vars, to_nnf(neg(g->children[0])));
    }
    return f;
}

// ---- read over write -----------------------------------------------------

namespace {

/// First read (pre-order) whose array argument is not a plain variable.
Term find_reducible_read(const Term& t) {
    if (t->kind == TermKind::Read && t->args[0]->kind != TermKind::Var) { return t; }
    for (const auto& a : t->args) {
        if (auto r = find_reducible_read(a)) { return r; }
    }
    return nullptr;
}

Term replace_subterm(const Term& t, const std::string& key, const Term& by) {
    if (t->key == key) { return by; }
    if (t->args.empty()) { return t; }
    std::vector<Term> args;
    for (const auto& a : t->args) { args.push_back(replace_subterm(a, key, by)); }
    if (same_args(t, args)) { return t; }
    return rebuild(t, args, t->cond, t->name);
}

Formula expand_atom(const Formula& a) {
    Term r = find_reducible_read(a->lhs);
    if (!r) { r = find_reducible_read(a->rhs); }
    if (!r) { return simplify_atom(a); }

    const Term& arr = r->args[0];
    const Term& j = r->args[1];
    auto with = [&](const Term& by) {
        return expand_atom(atom(a->rel, replace_subterm(a->lhs, r->key, by), replace_subterm(a->rhs, r->key, by)));
    };
    const Term plain = read(arr->args[0], j);

    switch (arr->kind) {
        case TermKind::Write: {
            const Term& i = arr->args[1];
            return simplify(disj({conj({eq(i, j), with(arr->args[2])}), conj({ne(i, j), with(plain)})}));
        }
        case TermKind::IntervalWrite: {
            auto inside = conj({le(arr->args[1], j), le(j, arr->args[2])});
            return simplify(disj({conj({inside, with(arr->args[3])}), conj({neg(inside), with(plain)})}));
        }
        case TermKind::CondWrite: {
            auto c = reduce_read_over_write(substitute(arr->cond, {{arr->name, j}}));
            return simplify(disj({conj({c, with(arr->args[1])}), conj({neg(c), with(plain)})}));
        }
        default: throw UnsupportedTerm("read over " + arr->key);
    }
}

} // namespace

Formula reduce_read_over_write(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False: return f;
        case FormulaKind::Atom: return expand_atom(f);
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(reduce_read_over_write(c)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Not: return neg(reduce_read_over_write(f->children[0]));
        case FormulaKind::Exists: return exists(f->vars, reduce_read_over_write(f->children[0]));
        case FormulaKind::Forall: return forall(f->vars, reduce_read_over_write(f->children[0]));
    }
    return f;
}

// ---- instantiation -------------------------------------------------------

namespace {

void tuples(const std::vector<Term>& vars, const std::vector<Term>& pool, std::size_t pos, Substitution& cur,
            const Formula& body, std::vector<Formula>& out) {
    if (pos == vars.size()) {
        out.push_back(substitute(body, cur));
        return;
    }
    for (const auto& t : pool) {
        cur[vars[pos]->name] = t;
        tuples(vars, pool, pos + 1, cur, body, out);
    }
    cur.erase(vars[pos]->name);
}

} // namespace

Formula instantiate_universals(const Formula& f, const std::vector<Term>& instances) {
    if (instances.empty()) { throw EmptyInstantiationSet(); }
    switch (f->kind) {
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(instantiate_universals(c, instances)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Not: return neg(instantiate_universals(f->children[0], instances));
        case FormulaKind::Exists: return exists(f->vars, instantiate_universals(f->children[0], instances));
        case FormulaKind::Forall: {
            auto body = instantiate_universals(f->children[0], instances);
            std::vector<Formula> parts;
            Substitution cur;
            tuples(f->vars, instances, 0, cur, body, parts);
            return conj(parts);
        }
        default: return f;
    }
}

// ---- simplification ------------------------------------------------------

namespace {

struct Linear {
    std::string base; // empty for numerals
    std::int64_t k = 0;
};

bool as_linear(const Term& t, Linear& out) {
    switch (t->kind) {
        case TermKind::IntConst: out = {"", t->value}; return true;
        case TermKind::Offset: out = {t->args[0]->key, t->value}; return true;
        case TermKind::Var:
        case TermKind::Read: out = {t->key, 0}; return true;
        default: return false;
    }
}

bool relation_holds(Rel r, std::int64_t a, std::int64_t b) {
    switch (r) {
        case Rel::Eq: return a == b;
        case Rel::Ne: return a != b;
        case Rel::Lt: return a < b;
        case Rel::Le: return a <= b;
    }
    return false;
}

} // namespace

bool contains_index_arith(const Term& t) {
    if (t->sort.is_index() && t->kind == TermKind::Offset) { return true; }
    if (t->sort.is_index() && t->kind == TermKind::IntConst && t->value != 0) { return true; }
    for (const auto& a : t->args) {
        if (contains_index_arith(a)) { return true; }
    }
    return false;
}

Formula simplify_atom(const Formula& a) {
    if (a->kind != FormulaKind::Atom) { return a; }
    const Term& l = a->lhs;
    const Term& r = a->rhs;
    // An atom mentioning an undefined index term is false, so a fold to true
    // is only allowed when no index arithmetic occurs.
    const bool may_be_undefined = contains_index_arith(l) || contains_index_arith(r);
    auto fold = [&](bool holds) -> Formula {
        if (!holds) { return bot(); }
        return may_be_undefined ? a : top();
    };
    if (l->kind == TermKind::EnumConst && r->kind == TermKind::EnumConst) {
        return fold(relation_holds(a->rel, l->value, r->value));
    }
    Linear x, y;
    if (as_linear(l, x) && as_linear(r, y) && x.base == y.base) {
        return fold(relation_holds(a->rel, x.k, y.k));
    }
    if (l->key == r->key) { return fold(a->rel == Rel::Eq || a->rel == Rel::Le); }
    return a;
}

Formula simplify(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Atom: return simplify_atom(f);
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(simplify(c)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Not: return neg(simplify(f->children[0]));
        case FormulaKind::Exists: return exists(f->vars, simplify(f->children[0]));
        case FormulaKind::Forall: return forall(f->vars, simplify(f->children[0]));
        default: return f;
    }
}

// ---- queries -------------------------------------------------------------

std::vector<Term> free_vars(const Formula& f) {
    std::set<std::string> bound;
    std::vector<Term> out;
    std::unordered_set<std::string> seen;
    formula_free_vars(f, bound, out, seen);
    return out;
}

std::vector<Term> free_vars(const Term& t) {
    std::set<std::string> bound;
    std::vector<Term> out;
    std::unordered_set<std::string> seen;
    term_free_vars(t, bound, out, seen);
    return out;
}

std::vector<Term> free_index_vars(const Formula& f) {
    std::vector<Term> out;
    for (const auto& v : free_vars(f)) {
        if (v->sort.is_index()) { out.push_back(v); }
    }
    return out;
}

namespace {

void walk_terms(const Term& t, const std::function<void(const Term&)>& visit) {
    visit(t);
    for (const auto& a : t->args) { walk_terms(a, visit); }
}

void walk_formula_terms(const Formula& f, const std::function<void(const Term&)>& visit) {
    if (f->kind == FormulaKind::Atom) {
        walk_terms(f->lhs, visit);
        walk_terms(f->rhs, visit);
        return;
    }
    for (const auto& c : f->children) { walk_formula_terms(c, visit); }
}

} // namespace

std::vector<Term> collect_terms(const Formula& f, const std::function<bool(const Term&)>& pred) {
    std::vector<Term> out;
    std::unordered_set<std::string> seen;
    std::function<void(const Term&)> visit = [&](const Term& t) {
        if (pred(t) && seen.insert(t->key).second) { out.push_back(t); }
        if (t->kind == TermKind::CondWrite) { walk_formula_terms(t->cond, visit); }
    };
    walk_formula_terms(f, visit);
    return out;
}

bool order_only(const Formula& f) {
    return collect_terms(f, [](const Term& t) { return is_index_arith(t); }).empty();
}

Term retype_enum(const Term& t, const EnumRef& decl) {
    auto matches = [&](const Sort& s) {
        return (s.is_enum() || (s.is_array() && s.decl())) && s.decl()->name == decl->name;
    };
    switch (t->kind) {
        case TermKind::Var:
            if (!matches(t->sort)) { return t; }
            return var(t->name, t->sort.is_array() ? Sort::array_of(Sort::enumeration(decl)) : Sort::enumeration(decl));
        case TermKind::EnumConst: return matches(t->sort) ? enum_const(decl, t->name) : t;
        case TermKind::IntConst: return t;
        default: {
            std::vector<Term> args;
            for (const auto& a : t->args) { args.push_back(retype_enum(a, decl)); }
            Formula cond = t->kind == TermKind::CondWrite ? retype_enum(t->cond, decl) : nullptr;
            return rebuild(t, args, cond, t->name);
        }
    }
}

Formula retype_enum(const Formula& f, const EnumRef& decl) {
    switch (f->kind) {
        case FormulaKind::Atom: return atom(f->rel, retype_enum(f->lhs, decl), retype_enum(f->rhs, decl));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(retype_enum(c, decl)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Not: return neg(retype_enum(f->children[0], decl));
        case FormulaKind::Exists: return exists(f->vars, retype_enum(f->children[0], decl));
        case FormulaKind::Forall: return forall(f->vars, retype_enum(f->children[0], decl));
        default: return f;
    }
}

std::pair<std::vector<Term>, Formula> split_exists(const Formula& f) {
    if (f->kind == FormulaKind::Exists) { return {f->vars, f->children[0]}; }
    return {{}, f};
}

} // namespace abreach
