#include "abreach/syntax.hpp"

#include "abreach/errors.hpp"

#include <atomic>
#include <unordered_set>

namespace abreach {

namespace {

std::shared_ptr<TermNode> make_term(TermKind kind, const Sort& sort) {
    return std::make_shared<TermNode>(kind, sort);
}

std::string join_keys(const std::vector<Term>& ts) {
    std::string out;
    for (const auto& t : ts) {
        if (!out.empty()) { out += ' '; }
        out += t->key;
    }
    return out;
}

void require_index(const Term& t, const char* what) {
    if (!t->sort.is_index()) { throw SortMismatch(std::string(what) + " must be index-sorted: " + t->key); }
}

} // namespace

Term var(const std::string& name, const Sort& sort) {
    auto t = make_term(TermKind::Var, sort);
    t->name = name;
    t->key = name;
    return t;
}

Term index_var(const std::string& name) { return var(name, Sort::index()); }

Term enum_const(const EnumRef& decl, const std::string& name) {
    int pos = decl->index_of(name);
    if (pos < 0) { throw SortMismatch(name + " is not a constant of " + decl->name); }
    auto t = make_term(TermKind::EnumConst, Sort::enumeration(decl));
    t->name = name;
    t->value = pos;
    t->key = name;
    return t;
}

Term int_const(std::int64_t value, const Sort& sort) {
    if (!sort.is_int() && !sort.is_index()) { throw SortMismatch("numeral of sort " + sort.name()); }
    auto t = make_term(TermKind::IntConst, sort);
    t->value = value;
    t->key = std::to_string(value);
    return t;
}

Term offset(const Term& base, std::int64_t k) {
    if (!base->sort.is_index() && !base->sort.is_int()) { throw SortMismatch("offset over " + base->sort.name()); }
    if (k == 0) { return base; }
    if (base->kind == TermKind::IntConst) { return int_const(base->value + k, base->sort); }
    if (base->kind == TermKind::Offset) { return offset(base->args[0], base->value + k); }
    if (base->kind != TermKind::Var && base->kind != TermKind::Read) {
        throw UnsupportedTerm("offset over " + base->key);
    }
    auto t = make_term(TermKind::Offset, base->sort);
    t->value = k;
    t->args = {base};
    t->key = "(+ " + base->key + " " + std::to_string(k) + ")";
    return t;
}

Term read(const Term& array, const Term& index) {
    if (!array->sort.is_array()) { throw SortMismatch("select from non-array " + array->key); }
    require_index(index, "array subscript");
    auto t = make_term(TermKind::Read, array->sort.element());
    t->args = {array, index};
    t->key = "(select " + array->key + " " + index->key + ")";
    return t;
}

Term write(const Term& array, const Term& index, const Term& element) {
    if (!array->sort.is_array()) { throw SortMismatch("store into non-array " + array->key); }
    require_index(index, "array subscript");
    if (array->sort.element() != element->sort) { throw SortMismatch("stored element " + element->key); }
    auto t = make_term(TermKind::Write, array->sort);
    t->args = {array, index, element};
    t->key = "(store " + join_keys(t->args) + ")";
    return t;
}

Term interval_write(const Term& array, const Term& lo, const Term& hi, const Term& element) {
    if (!array->sort.is_array()) { throw SortMismatch("store-range into non-array " + array->key); }
    require_index(lo, "interval bound");
    require_index(hi, "interval bound");
    if (array->sort.element() != element->sort) { throw SortMismatch("stored element " + element->key); }
    auto t = make_term(TermKind::IntervalWrite, array->sort);
    t->args = {array, lo, hi, element};
    t->key = "(store-range " + join_keys(t->args) + ")";
    return t;
}

Term cond_write(const Term& array, const Term& bound, const Formula& cond, const Term& element) {
    if (!array->sort.is_array()) { throw SortMismatch("cond-store into non-array " + array->key); }
    if (bound->kind != TermKind::Var) { throw SortMismatch("cond-store binder must be a variable"); }
    require_index(bound, "cond-store binder");
    if (array->sort.element() != element->sort) { throw SortMismatch("stored element " + element->key); }
    auto t = make_term(TermKind::CondWrite, array->sort);
    t->name = bound->name;
    t->args = {array, element};
    t->cond = cond;
    t->key = "(cond-store " + array->key + " (" + bound->name + ") " + cond->key + " " + element->key + ")";
    return t;
}

// ---- formulas ------------------------------------------------------------

namespace {

std::shared_ptr<FormulaNode> make_formula(FormulaKind kind) { return std::make_shared<FormulaNode>(kind); }

Formula make_constant(FormulaKind kind, const char* key) {
    auto f = make_formula(kind);
    f->key = key;
    return f;
}

Formula make_nary(FormulaKind kind, const std::vector<Formula>& fs) {
    const FormulaKind unit = kind == FormulaKind::And ? FormulaKind::True : FormulaKind::False;
    const FormulaKind zero = kind == FormulaKind::And ? FormulaKind::False : FormulaKind::True;
    std::vector<Formula> flat;
    std::unordered_set<std::string> seen;
    auto push = [&](const Formula& g) {
        if (seen.insert(g->key).second) { flat.push_back(g); }
    };
    for (const auto& f : fs) {
        if (f->kind == zero) { return zero == FormulaKind::True ? top() : bot(); }
        if (f->kind == unit) { continue; }
        if (f->kind == kind) {
            for (const auto& g : f->children) { push(g); }
        } else {
            push(f);
        }
    }
    if (flat.empty()) { return unit == FormulaKind::True ? top() : bot(); }
    if (flat.size() == 1) { return flat.front(); }
    auto out = make_formula(kind);
    out->children = std::move(flat);
    out->key = kind == FormulaKind::And ? "(and" : "(or";
    for (const auto& g : out->children) { out->key += " " + g->key; }
    out->key += ")";
    return out;
}

Formula make_quant(FormulaKind kind, const std::vector<Term>& vars, const Formula& body) {
    if (vars.empty() || body->kind == FormulaKind::True || body->kind == FormulaKind::False) { return body; }
    for (const auto& v : vars) {
        if (v->kind != TermKind::Var || !v->sort.is_index()) {
            throw SortMismatch("quantified variable must be an index variable: " + v->key);
        }
    }
    auto out = make_formula(kind);
    out->vars = vars;
    out->children = {body};
    out->key = std::string(kind == FormulaKind::Exists ? "(exists (" : "(forall (") + join_keys(vars) + ") " +
               body->key + ")";
    return out;
}

} // namespace

Formula top() {
    static const Formula t = make_constant(FormulaKind::True, "true");
    return t;
}

Formula bot() {
    static const Formula f = make_constant(FormulaKind::False, "false");
    return f;
}

bool mentions_reserved(const Term& t) {
    if (t->kind == TermKind::Var) { return t->name == kTopIndex || t->name == kZeroIndex; }
    for (const auto& a : t->args) {
        if (mentions_reserved(a)) { return true; }
    }
    return false;
}

const char* rel_symbol(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Ne: return "distinct";
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
    }
    return "?";
}

Formula atom(Rel rel, const Term& lhs, const Term& rhs) {
    if (lhs->sort != rhs->sort) {
        throw SortMismatch(std::string(rel_symbol(rel)) + " over " + lhs->key + " : " + lhs->sort.name() + " and " +
                           rhs->key + " : " + rhs->sort.name());
    }
    if (lhs->sort.is_array()) { throw SortMismatch("array-sorted atom " + lhs->key); }
    if ((rel == Rel::Lt || rel == Rel::Le) && !lhs->sort.is_index() && !lhs->sort.is_int()) {
        throw SortMismatch("order over " + lhs->sort.name());
    }
    auto f = make_formula(FormulaKind::Atom);
    f->rel = rel;
    f->lhs = lhs;
    f->rhs = rhs;
    f->key = std::string("(") + rel_symbol(rel) + " " + lhs->key + " " + rhs->key + ")";
    return f;
}

Formula conj(const std::vector<Formula>& fs) { return make_nary(FormulaKind::And, fs); }
Formula disj(const std::vector<Formula>& fs) { return make_nary(FormulaKind::Or, fs); }

Formula neg(const Formula& f) {
    if (f->kind == FormulaKind::True) { return bot(); }
    if (f->kind == FormulaKind::False) { return top(); }
    auto out = make_formula(FormulaKind::Not);
    out->children = {f};
    out->key = "(not " + f->key + ")";
    return out;
}

Formula implies(const Formula& a, const Formula& b) { return disj({neg(a), b}); }

Formula exists(const std::vector<Term>& vars, const Formula& body) { return make_quant(FormulaKind::Exists, vars, body); }
Formula forall(const std::vector<Term>& vars, const Formula& body) { return make_quant(FormulaKind::Forall, vars, body); }

std::string fresh_name(const std::string& prefix) {
    static std::atomic<std::uint64_t> counter{0};
    return "_" + prefix + std::to_string(++counter);
}

bool is_atom(const Formula& f) { return f->kind == FormulaKind::Atom; }

bool is_quantifier_free(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Exists:
        case FormulaKind::Forall: return false;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Not:
            for (const auto& c : f->children) {
                if (!is_quantifier_free(c)) { return false; }
            }
            return true;
        default: return true;
    }
}

bool is_index_arith(const Term& t) {
    return t->sort.is_index() && (t->kind == TermKind::Offset || t->kind == TermKind::IntConst);
}

} // namespace abreach
