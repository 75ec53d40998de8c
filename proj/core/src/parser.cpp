#include "abreach/errors.hpp"
#include "abreach/problem.hpp"
#include "abreach/transforms.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace abreach {

namespace {

struct Sexp {
    std::string atom; // empty for lists
    std::vector<Sexp> items;
    std::size_t line = 1;
    std::size_t col = 1;

    bool is_atom() const { return !atom.empty(); }
    bool is_list() const { return atom.empty(); }
    bool head_is(const char* s) const { return is_list() && !items.empty() && items[0].atom == s; }
};

class Reader {
public:
    explicit Reader(const std::string& text) : s_(text) {}

    Sexp read_top() {
        skip();
        if (pos_ >= s_.size()) { fail("an s-expression"); }
        Sexp e = read();
        skip();
        if (pos_ < s_.size()) { fail("end of input"); }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) const { throw ParseError(line_, col_, expected); }

    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                advance();
            } else if (s_[pos_] == ';') {
                while (pos_ < s_.size() && s_[pos_] != '\n') { advance(); }
            } else {
                return;
            }
        }
    }

    Sexp read() {
        Sexp e;
        e.line = line_;
        e.col = col_;
        if (s_[pos_] == ')') { fail("an atom or '('"); }
        if (s_[pos_] == '(') {
            advance();
            while (true) {
                skip();
                if (pos_ >= s_.size()) { fail("')'"); }
                if (s_[pos_] == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read());
            }
        }
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')' && s_[pos_] != ';') {
            e.atom += s_[pos_];
            advance();
        }
        return e;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

[[noreturn]] void fail_at(const Sexp& e, const std::string& expected) { throw ParseError(e.line, e.col, expected); }

bool is_integer(const std::string& s) {
    std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
    if (i == s.size()) { return false; }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) { return false; }
    }
    return true;
}

std::int64_t to_integer(const Sexp& e) {
    if (!e.is_atom() || !is_integer(e.atom)) { fail_at(e, "an integer"); }
    try {
        return std::stoll(e.atom);
    } catch (const std::out_of_range&) { fail_at(e, "an integer in range"); }
}

const std::string& identifier(const Sexp& e) {
    if (!e.is_atom() || is_integer(e.atom)) { fail_at(e, "an identifier"); }
    if (e.atom[0] == '_') { fail_at(e, "an identifier not starting with '_'"); }
    return e.atom;
}

class Elaborator {
public:
    SafetyProblem run(const Sexp& top) {
        if (!top.head_is("system") || top.items.size() < 2) { fail_at(top, "(system NAME ...)"); }
        p_.name = identifier(top.items[1]);
        for (std::size_t i = 2; i < top.items.size(); ++i) { declaration(top.items[i]); }
        if (!saw_init_) { fail_at(top, "an (init ...) declaration"); }
        if (!saw_unsafe_) { fail_at(top, "an (unsafe ...) declaration"); }
        validate(p_);
        return std::move(p_);
    }

    Formula standalone(const SafetyProblem& sig, const Sexp& e) {
        p_ = sig;
        for (const auto& decl : sig.enums) {
            for (const auto& c : decl->constants) { constants_[c] = decl; }
        }
        return formula(e);
    }

private:
    void declaration(const Sexp& d) {
        if (d.is_atom() || d.items.empty() || !d.items[0].is_atom()) { fail_at(d, "a declaration"); }
        const std::string& head = d.items[0].atom;
        if (head == "theory") {
            arity(d, 2);
            if (d.items[1].atom == "simple") {
                p_.theory = Theory::Simple;
            } else if (d.items[1].atom == "diffarith") {
                p_.theory = Theory::DiffArith;
            } else {
                fail_at(d.items[1], "simple or diffarith");
            }
        } else if (head == "enum-sort") {
            arity(d, 3);
            auto decl = std::make_shared<EnumDecl>();
            decl->name = identifier(d.items[1]);
            if (find_enum(decl->name) || decl->name == "index" || decl->name == "int") { fail_at(d.items[1], "a fresh sort name"); }
            if (d.items[2].is_atom() || d.items[2].items.empty()) { fail_at(d.items[2], "a non-empty constant list"); }
            for (const auto& c : d.items[2].items) {
                const std::string& n = identifier(c);
                if (constants_.count(n)) { fail_at(c, "a fresh constant name"); }
                decl->constants.push_back(n);
            }
            p_.enums.push_back(decl);
            for (const auto& c : decl->constants) { constants_[c] = decl; }
        } else if (head == "var") {
            arity(d, 3);
            add_var(d.items[1], scalar_sort(d.items[2], false));
        } else if (head == "array") {
            arity(d, 4);
            if (d.items[2].atom != "index") { fail_at(d.items[2], "index"); }
            add_var(d.items[1], Sort::array_of(scalar_sort(d.items[3], true)));
        } else if (head == "location") {
            arity(d, 2);
            p_.location = identifier(d.items[1]);
        } else if (head == "init") {
            arity(d, 2);
            p_.init = formula(d.items[1]);
            saw_init_ = true;
        } else if (head == "unsafe") {
            arity(d, 2);
            p_.unsafe = formula(d.items[1]);
            saw_unsafe_ = true;
        } else if (head == "transition") {
            transition(d);
        } else {
            fail_at(d.items[0], "theory, enum-sort, var, array, location, init, transition or unsafe");
        }
    }

    static void arity(const Sexp& d, std::size_t n) {
        if (d.items.size() != n) { fail_at(d, "(" + d.items[0].atom + " ...) with " + std::to_string(n - 1) + " argument(s)"); }
    }

    EnumRef find_enum(const std::string& n) const {
        for (const auto& e : p_.enums) {
            if (e->name == n) { return e; }
        }
        return nullptr;
    }

    Sort scalar_sort(const Sexp& e, bool element) {
        if (!e.is_atom()) { fail_at(e, "a sort"); }
        if (e.atom == "int") { return Sort::integer(); }
        if (e.atom == "index" && !element) { return Sort::index(); }
        if (auto d = find_enum(e.atom)) { return Sort::enumeration(d); }
        fail_at(e, element ? "int or an enum sort" : "index, int or an enum sort");
    }

    void add_var(const Sexp& n, const Sort& s) {
        const std::string& name = identifier(n);
        if (p_.find_var(name) || constants_.count(name)) { fail_at(n, "a fresh variable name"); }
        p_.vars.push_back({name, s});
    }

    void transition(const Sexp& d) {
        arity(d, 3);
        Transition t;
        t.name = identifier(d.items[1]);
        if (p_.find_transition(t.name)) { fail_at(d.items[1], "a fresh transition name"); }
        scope_.clear();
        const Sexp* body = &d.items[2];
        if (body->head_is("exists")) {
            if (body->items.size() != 3) { fail_at(*body, "(exists (VARS) (and ...))"); }
            t.params = binder_list(body->items[1]);
            body = &body->items[2];
        }
        std::vector<const Sexp*> items;
        if (body->head_is("and")) {
            for (std::size_t i = 1; i < body->items.size(); ++i) { items.push_back(&body->items[i]); }
        } else {
            items.push_back(body);
        }
        bool assigned = false;
        std::vector<Formula> guards;
        for (const Sexp* c : items) {
            if (c->head_is("assign")) {
                if (assigned) { fail_at(*c, "a single assign clause"); }
                assigned = true;
                for (std::size_t j = 1; j < c->items.size(); ++j) {
                    const Sexp& a = c->items[j];
                    if (a.is_atom() || a.items.size() != 2) { fail_at(a, "(VAR TERM)"); }
                    const std::string& n = identifier(a.items[0]);
                    const VarDecl* v = p_.find_var(n);
                    if (!v) { fail_at(a.items[0], "a declared state variable"); }
                    if (t.update.count(n)) { fail_at(a.items[0], "a variable assigned once"); }
                    t.update[n] = term(a.items[1], v->sort);
                }
            } else if (c->head_is("forall")) {
                arity(*c, 3);
                if (t.has_universal()) { fail_at(*c, "at most one universal guard"); }
                std::size_t mark = scope_.size();
                t.universal_vars = binder_list(c->items[1]);
                t.universal_body = formula(c->items[2]);
                scope_.resize(mark);
            } else {
                if (assigned || t.has_universal()) { fail_at(*c, "guards before the universal guard and assign"); }
                guards.push_back(formula(*c));
            }
        }
        t.guard = conj(guards);
        for (const auto& v : p_.vars) {
            if (!t.update.count(v.name)) { t.update[v.name] = var(v.name, v.sort); }
        }
        scope_.clear();
        p_.transitions.push_back(std::move(t));
    }

    Term bind(const Sexp& e) {
        const std::string& n = identifier(e);
        if (p_.find_var(n) || constants_.count(n)) { fail_at(e, "a bound name distinct from state variables and constants"); }
        Term v = index_var(n);
        scope_.push_back(v);
        return v;
    }

    std::vector<Term> binder_list(const Sexp& e) {
        if (e.is_atom() || e.items.empty()) { fail_at(e, "a non-empty variable list"); }
        std::vector<Term> out;
        for (const auto& x : e.items) { out.push_back(bind(x)); }
        return out;
    }

    // ---- formulas --------------------------------------------------------

    Formula formula(const Sexp& e) {
        if (e.is_atom()) {
            if (e.atom == "true") { return top(); }
            if (e.atom == "false") { return bot(); }
            fail_at(e, "a formula");
        }
        if (e.items.empty() || !e.items[0].is_atom()) { fail_at(e, "a formula"); }
        const std::string& h = e.items[0].atom;
        auto children = [&](std::size_t from) {
            std::vector<Formula> cs;
            for (std::size_t i = from; i < e.items.size(); ++i) { cs.push_back(formula(e.items[i])); }
            return cs;
        };
        if (h == "and") { return conj(children(1)); }
        if (h == "or") { return disj(children(1)); }
        if (h == "not") {
            arity(e, 2);
            return neg(formula(e.items[1]));
        }
        if (h == "=>") {
            arity(e, 3);
            return implies(formula(e.items[1]), formula(e.items[2]));
        }
        if (h == "exists" || h == "forall") {
            arity(e, 3);
            std::size_t mark = scope_.size();
            auto vs = binder_list(e.items[1]);
            Formula body = formula(e.items[2]);
            scope_.resize(mark);
            return h == "exists" ? exists(vs, body) : forall(vs, body);
        }
        static const std::map<std::string, std::pair<Rel, bool>> rels{
            {"=", {Rel::Eq, false}}, {"distinct", {Rel::Ne, false}}, {"<", {Rel::Lt, false}},
            {"<=", {Rel::Le, false}}, {">", {Rel::Lt, true}},       {">=", {Rel::Le, true}},
        };
        auto r = rels.find(h);
        if (r == rels.end()) { fail_at(e.items[0], "a connective or relation"); }
        arity(e, 3);
        const Sexp& l = e.items[1];
        const Sexp& rr = e.items[2];
        Term lt_, rt_;
        if (l.is_atom() && is_integer(l.atom)) {
            rt_ = term(rr, std::nullopt);
            lt_ = term(l, rt_->sort);
        } else {
            lt_ = term(l, std::nullopt);
            rt_ = term(rr, lt_->sort);
        }
        try {
            return r->second.second ? atom(r->second.first, rt_, lt_) : atom(r->second.first, lt_, rt_);
        } catch (const SortMismatch&) {
            fail_at(e, "operands of one comparable sort");
        }
    }

    // ---- terms -----------------------------------------------------------

    Term lookup(const Sexp& e) {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if ((*it)->name == e.atom) { return *it; }
        }
        if (const VarDecl* v = p_.find_var(e.atom)) { return var(v->name, v->sort); }
        auto c = constants_.find(e.atom);
        if (c != constants_.end()) { return enum_const(c->second, e.atom); }
        fail_at(e, "a declared symbol");
    }

    Term term(const Sexp& e, const std::optional<Sort>& hint) {
        Term t = term_unchecked(e, hint);
        if (hint && t->sort != *hint) { fail_at(e, "a term of sort " + hint->name()); }
        return t;
    }

    Term term_unchecked(const Sexp& e, const std::optional<Sort>& hint) {
        if (e.is_atom()) {
            if (is_integer(e.atom)) {
                Sort s = hint ? *hint : Sort::integer();
                if (!s.is_int() && !s.is_index()) { fail_at(e, "a term of sort " + s.name()); }
                return int_const(to_integer(e), s);
            }
            identifier(e);
            return lookup(e);
        }
        if (e.items.empty() || !e.items[0].is_atom()) { fail_at(e, "a term"); }
        const std::string& h = e.items[0].atom;
        try {
            if (h == "select") {
                arity(e, 3);
                Term a = array_term(e.items[1]);
                return read(a, term(e.items[2], Sort::index()));
            }
            if (h == "store") {
                arity(e, 4);
                Term a = array_term(e.items[1]);
                Term i = term(e.items[2], Sort::index());
                return write(a, i, term(e.items[3], a->sort.element()));
            }
            if (h == "store-range") {
                arity(e, 5);
                Term a = array_term(e.items[1]);
                Term lo = term(e.items[2], Sort::index());
                Term hi = term(e.items[3], Sort::index());
                return interval_write(a, lo, hi, term(e.items[4], a->sort.element()));
            }
            if (h == "cond-store") {
                arity(e, 5);
                Term a = array_term(e.items[1]);
                if (e.items[2].is_atom() || e.items[2].items.size() != 1) { fail_at(e.items[2], "a single bound variable"); }
                std::size_t mark = scope_.size();
                Term k = bind(e.items[2].items[0]);
                Formula c = formula(e.items[3]);
                Term v = term(e.items[4], a->sort.element());
                scope_.resize(mark);
                return cond_write(a, k, c, v);
            }
            if (h == "+" || h == "-") {
                arity(e, 3);
                Term base = term(e.items[1], hint);
                std::int64_t k = to_integer(e.items[2]);
                return offset(base, h == "+" ? k : -k);
            }
        } catch (const SortMismatch&) {
            fail_at(e, "a well-sorted term");
        } catch (const UnsupportedTerm&) {
            fail_at(e, "an offset of a variable or array read");
        }
        fail_at(e.items[0], "select, store, store-range, cond-store, + or -");
    }

    Term array_term(const Sexp& e) {
        Term a = term(e, std::nullopt);
        if (!a->sort.is_array()) { fail_at(e, "an array term"); }
        return a;
    }

    SafetyProblem p_;
    std::map<std::string, EnumRef> constants_;
    std::vector<Term> scope_;
    bool saw_init_ = false;
    bool saw_unsafe_ = false;
};

} // namespace

SafetyProblem parse_problem(const std::string& text) {
    Reader r(text);
    Sexp top = r.read_top();
    return Elaborator().run(top);
}

Formula parse_formula(const SafetyProblem& sig, const std::string& text) {
    Reader r(text);
    Sexp e = r.read_top();
    return Elaborator().standalone(sig, e);
}

SafetyProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) { throw std::runtime_error("cannot open " + path); }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

} // namespace abreach
