#include "abreach/solver.hpp"

#include "abreach/errors.hpp"
#include "abreach/transforms.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace abreach {

namespace {

bool mentions_reserved(const Formula& atom) {
    return mentions_reserved(atom->lhs) || mentions_reserved(atom->rhs);
}

class Budget {
public:
    explicit Budget(std::size_t limit) : limit_(limit) {}
    void spend(std::size_t n) {
        used_ += n;
        if (used_ > limit_) { throw ResourceError("solver literal budget exhausted"); }
    }

private:
    std::size_t limit_;
    std::size_t used_ = 0;
};

// Constraints x - y <= w, solved by Bellman-Ford from a virtual source.
class DiffGraph {
public:
    int node(const std::string& key) {
        auto [it, fresh] = ids_.emplace(key, static_cast<int>(names_.size()));
        if (fresh) { names_.push_back(key); }
        return it->second;
    }
    // x + a <= y + b
    void le(int x, std::int64_t a, int y, std::int64_t b) { edges_.push_back({y, x, b - a}); }
    void lt(int x, std::int64_t a, int y, std::int64_t b) { edges_.push_back({y, x, b - a - 1}); }

    bool solve() {
        const std::size_t n = names_.size();
        dist_.assign(n, 0);
        for (std::size_t round = 0; round <= n; ++round) {
            bool changed = false;
            for (const auto& e : edges_) {
                if (dist_[e.from] + e.w < dist_[e.to]) {
                    dist_[e.to] = dist_[e.from] + e.w;
                    changed = true;
                }
            }
            if (!changed) { return true; }
        }
        return false;
    }

    std::int64_t value(int v, int ref) const { return dist_[v] - dist_[ref]; }
    const std::vector<std::string>& names() const { return names_; }

private:
    struct Edge {
        int from;
        int to;
        std::int64_t w;
    };
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> dist_;
};

struct Assignment {
    std::int64_t top = 0;
    std::map<std::string, std::int64_t> index;
    std::map<std::string, std::int64_t> ints;
    std::map<std::string, std::int64_t> enums;
    std::map<std::string, std::map<std::int64_t, std::int64_t>> cells;
};

struct Outcome {
    enum Kind { Sat, Unsat, Split } kind = Unsat;
    Assignment assignment;
    std::vector<std::vector<Formula>> branches;
};

void collect_reads(const Term& t, std::vector<Term>& out) {
    if (t->kind == TermKind::Read) { out.push_back(t); }
    for (const auto& a : t->args) { collect_reads(a, out); }
}

// Decides conjunctions of atoms over plain-array reads. Theories are checked
// independently with reads as opaque atoms; read congruence is restored
// lazily by splitting on the subscripts.
class ConjunctionSolver {
public:
    explicit ConjunctionSolver(Budget& budget) : budget_(budget) {}

    std::optional<Assignment> solve(const std::vector<Formula>& lits) {
        budget_.spend(lits.size() + 1);
        Outcome o = check(lits);
        if (o.kind == Outcome::Sat) { return std::move(o.assignment); }
        if (o.kind == Outcome::Unsat) { return std::nullopt; }
        for (const auto& br : o.branches) {
            auto next = lits;
            next.insert(next.end(), br.begin(), br.end());
            if (auto r = solve(next)) { return r; }
        }
        return std::nullopt;
    }

private:
    Outcome check(const std::vector<Formula>& lits) {
        Outcome out;
        enum_reads_.clear();
        int_reads_.clear();
        read_pos_.clear();
        std::vector<Term> reads;
        for (const auto& l : lits) {
            collect_reads(l->lhs, reads);
            collect_reads(l->rhs, reads);
        }
        if (!check_enums(lits, out.assignment)) { return out; }
        if (!check_ints(lits, out)) { return out; }
        if (out.kind == Outcome::Split) { return out; }
        if (!check_indexes(lits, reads, out)) { return out; }
        if (out.kind == Outcome::Split) { return out; }
        return congruence(reads, out);
    }

    // ---- enums: union-find, then colouring of the classes ----------------

    bool check_enums(const std::vector<Formula>& lits, Assignment& asg) {
        std::unordered_map<std::string, int> ids;
        std::vector<int> parent;
        std::vector<Term> rep;
        auto id = [&](const Term& t) {
            auto [it, fresh] = ids.emplace(t->key, static_cast<int>(parent.size()));
            if (fresh) {
                parent.push_back(it->second);
                rep.push_back(t);
            }
            return it->second;
        };
        std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        std::vector<std::pair<int, int>> diseq;
        bool any = false;
        for (const auto& l : lits) {
            if (!l->lhs->sort.is_enum()) { continue; }
            any = true;
            int a = id(l->lhs);
            int b = id(l->rhs);
            if (l->rel == Rel::Eq) {
                parent[find(a)] = find(b);
            } else {
                diseq.emplace_back(a, b);
            }
        }
        if (!any) { return true; }
        const int n = static_cast<int>(parent.size());
        std::map<int, int> cls; // root -> class number
        std::vector<std::int64_t> fixed;
        std::vector<std::size_t> size;
        std::vector<int> cls_of(n);
        for (int x = 0; x < n; ++x) {
            int r = find(x);
            auto [it, fresh] = cls.emplace(r, static_cast<int>(fixed.size()));
            if (fresh) {
                fixed.push_back(-1);
                size.push_back(rep[x]->sort.decl()->constants.size());
            }
            cls_of[x] = it->second;
            if (rep[x]->kind == TermKind::EnumConst) {
                auto& f = fixed[it->second];
                if (f >= 0 && f != rep[x]->value) { return false; }
                f = rep[x]->value;
            }
        }
        const std::size_t m = fixed.size();
        std::vector<std::set<int>> adj(m);
        for (auto [a, b] : diseq) {
            int ca = cls_of[a];
            int cb = cls_of[b];
            if (ca == cb) { return false; }
            adj[ca].insert(cb);
            adj[cb].insert(ca);
        }
        std::vector<std::int64_t> colour = fixed;
        std::vector<int> order;
        for (std::size_t c = 0; c < m; ++c) {
            if (fixed[c] < 0) { order.push_back(static_cast<int>(c)); }
        }
        for (std::size_t c = 0; c < m; ++c) {
            for (int d : adj[c]) {
                if (fixed[c] >= 0 && fixed[c] == fixed[d]) { return false; }
            }
        }
        std::function<bool(std::size_t)> paint = [&](std::size_t pos) {
            if (pos == order.size()) { return true; }
            int c = order[pos];
            for (std::int64_t v = 0; v < static_cast<std::int64_t>(size[c]); ++v) {
                bool clash = false;
                for (int d : adj[c]) {
                    if (colour[d] == v) { clash = true; break; }
                }
                if (clash) { continue; }
                colour[c] = v;
                if (paint(pos + 1)) { return true; }
            }
            colour[c] = -1;
            return false;
        };
        budget_.spend(order.size());
        if (!paint(0)) { return false; }
        for (int x = 0; x < n; ++x) {
            const Term& t = rep[x];
            if (t->kind == TermKind::Var) { asg.enums[t->name] = colour[cls_of[x]]; }
            if (t->kind == TermKind::Read) { enum_reads_[t->key] = colour[cls_of[x]]; }
        }
        return true;
    }

    // ---- integers --------------------------------------------------------

    static std::pair<std::string, std::int64_t> int_linear(const Term& t) {
        switch (t->kind) {
            case TermKind::IntConst: return {"", t->value};
            case TermKind::Var:
            case TermKind::Read: return {t->key, 0};
            case TermKind::Offset: return {t->args[0]->key, t->value};
            default: throw UnsupportedTerm(t->key);
        }
    }

    bool check_ints(const std::vector<Formula>& lits, Outcome& out) {
        DiffGraph g;
        const int zero = g.node("");
        std::vector<Formula> diseq;
        bool any = false;
        for (const auto& l : lits) {
            if (!l->lhs->sort.is_int()) { continue; }
            any = true;
            auto [x, a] = int_linear(l->lhs);
            auto [y, b] = int_linear(l->rhs);
            int nx = g.node(x);
            int ny = g.node(y);
            switch (l->rel) {
                case Rel::Eq: g.le(nx, a, ny, b); g.le(ny, b, nx, a); break;
                case Rel::Le: g.le(nx, a, ny, b); break;
                case Rel::Lt: g.lt(nx, a, ny, b); break;
                case Rel::Ne: diseq.push_back(l); break;
            }
        }
        if (!any) { return true; }
        if (!g.solve()) { return false; }
        auto val = [&](const Term& t) {
            auto [x, a] = int_linear(t);
            return g.value(g.node(x), zero) + a;
        };
        for (const auto& d : diseq) {
            if (val(d->lhs) == val(d->rhs)) {
                out.kind = Outcome::Split;
                out.branches = {{lt(d->lhs, d->rhs)}, {lt(d->rhs, d->lhs)}};
                return true;
            }
        }
        for (std::size_t v = 1; v < g.names().size(); ++v) {
            const auto& key = g.names()[v];
            std::int64_t x = g.value(static_cast<int>(v), zero);
            if (key.front() == '(') {
                int_reads_[key] = x;
            } else {
                out.assignment.ints[key] = x;
            }
        }
        return true;
    }

    // ---- indexes ---------------------------------------------------------

    static std::pair<std::string, std::int64_t> index_linear(const Term& t) {
        switch (t->kind) {
            case TermKind::IntConst: return {kZeroIndex, t->value};
            case TermKind::Var: return {t->name, 0};
            case TermKind::Offset:
                if (t->args[0]->kind != TermKind::Var) { throw UnsupportedTerm(t->key); }
                return {t->args[0]->name, t->value};
            default: throw UnsupportedTerm(t->key);
        }
    }

    bool check_indexes(const std::vector<Formula>& lits, const std::vector<Term>& reads, Outcome& out) {
        DiffGraph g;
        const int zero = g.node(kZeroIndex);
        const int top = g.node(kTopIndex);
        g.le(zero, 0, top, 0);
        std::unordered_set<std::string> bounded{kZeroIndex, kTopIndex};
        std::function<void(const Term&)> bound = [&](const Term& t) {
            if (!bounded.insert(t->key).second) { return; }
            if (t->kind == TermKind::Offset) { bound(t->args[0]); }
            auto [x, a] = index_linear(t);
            int nx = g.node(x);
            g.le(zero, 0, nx, a);
            g.le(nx, a, top, 0);
        };
        std::vector<Formula> diseq;
        for (const auto& l : lits) {
            if (!l->lhs->sort.is_index()) { continue; }
            const bool exempt = mentions_reserved(l);
            for (const auto& side : {l->lhs, l->rhs}) {
                if (side->kind == TermKind::Var || !exempt) {
                    bound(side);
                } else if (side->kind == TermKind::Offset) {
                    bound(side->args[0]);
                }
            }
            auto [x, a] = index_linear(l->lhs);
            auto [y, b] = index_linear(l->rhs);
            int nx = g.node(x);
            int ny = g.node(y);
            switch (l->rel) {
                case Rel::Eq: g.le(nx, a, ny, b); g.le(ny, b, nx, a); break;
                case Rel::Le: g.le(nx, a, ny, b); break;
                case Rel::Lt: g.lt(nx, a, ny, b); break;
                case Rel::Ne: diseq.push_back(l); break;
            }
        }
        for (const auto& r : reads) { bound(r->args[1]); }
        if (!g.solve()) { return false; }
        auto val = [&](const Term& t) {
            auto [x, a] = index_linear(t);
            return g.value(g.node(x), zero) + a;
        };
        for (const auto& d : diseq) {
            if (val(d->lhs) == val(d->rhs)) {
                out.kind = Outcome::Split;
                out.branches = {{lt(d->lhs, d->rhs)}, {lt(d->rhs, d->lhs)}};
                return true;
            }
        }
        out.assignment.top = g.value(top, zero);
        for (std::size_t v = 0; v < g.names().size(); ++v) {
            const auto& name = g.names()[v];
            if (name == kZeroIndex || name == kTopIndex) { continue; }
            out.assignment.index[name] = g.value(static_cast<int>(v), zero);
        }
        for (const auto& r : reads) { read_pos_[r->key] = val(r->args[1]); }
        return true;
    }

    // ---- read congruence -------------------------------------------------

    Outcome congruence(const std::vector<Term>& reads, Outcome& out) {
        std::map<std::pair<std::string, std::int64_t>, Term> seen;
        for (const auto& r : reads) {
            const auto& table = r->sort.is_enum() ? enum_reads_ : int_reads_;
            auto it = table.find(r->key);
            if (it == table.end()) { continue; }
            std::int64_t pos = read_pos_.at(r->key);
            auto [at, fresh] = seen.emplace(std::make_pair(r->args[0]->name, pos), r);
            if (fresh) {
                out.assignment.cells[r->args[0]->name][pos] = it->second;
                continue;
            }
            const Term& other = at->second;
            if (table.at(other->key) == it->second) { continue; }
            const Term& i = other->args[1];
            const Term& j = r->args[1];
            Outcome split;
            split.kind = Outcome::Split;
            split.branches = {{eq(i, j), eq(other, r)}, {lt(i, j)}, {lt(j, i)}};
            return split;
        }
        out.kind = Outcome::Sat;
        return std::move(out);
    }

    Budget& budget_;
    std::unordered_map<std::string, std::int64_t> enum_reads_;
    std::unordered_map<std::string, std::int64_t> int_reads_;
    std::unordered_map<std::string, std::int64_t> read_pos_;
};

Model build_model(const Assignment& asg, const std::vector<Term>& symbols) {
    Model m;
    m.domain_size = asg.top + 1;
    for (const auto& v : symbols) {
        if (v->kind != TermKind::Var || v->name == kTopIndex || v->name == kZeroIndex) { continue; }
        auto lookup = [&](const std::map<std::string, std::int64_t>& t) {
            auto it = t.find(v->name);
            return it == t.end() ? 0 : it->second;
        };
        switch (v->sort.kind()) {
            case SortKind::Index: m.index_vals[v->name] = lookup(asg.index); break;
            case SortKind::Int: m.int_vals[v->name] = lookup(asg.ints); break;
            case SortKind::Enum: m.enum_vals[v->name] = lookup(asg.enums); break;
            case SortKind::Array: {
                auto& cells = m.array_vals[v->name];
                cells.assign(static_cast<std::size_t>(m.domain_size), 0);
                auto it = asg.cells.find(v->name);
                if (it == asg.cells.end()) { break; }
                for (auto [pos, val] : it->second) {
                    if (pos >= 0 && pos < m.domain_size) { cells[static_cast<std::size_t>(pos)] = val; }
                }
                break;
            }
        }
    }
    return m;
}

// Model-guided search over the disjunctions of an NNF quantifier-free
// formula: solve the literals seen so far, then branch only on a
// disjunction the candidate model falsifies.
class Search {
public:
    Search(Budget& budget, std::vector<Term> symbols) : budget_(budget), symbols_(std::move(symbols)) {}

    struct Node {
        std::vector<Formula> lits;
        std::unordered_set<std::string> keys;
        std::vector<Formula> ors;
    };

    static bool expand(const Formula& f, Node& n) {
        switch (f->kind) {
            case FormulaKind::True: return true;
            case FormulaKind::False: return false;
            case FormulaKind::Atom:
                if (n.keys.insert(f->key).second) { n.lits.push_back(f); }
                return true;
            case FormulaKind::And:
                for (const auto& c : f->children) {
                    if (!expand(c, n)) { return false; }
                }
                return true;
            case FormulaKind::Or: n.ors.push_back(f); return true;
            default: throw std::invalid_argument("expected a quantifier-free NNF formula: " + f->key);
        }
    }

    std::optional<Model> run(const Formula& f) {
        Node root;
        if (!expand(f, root)) { return std::nullopt; }
        return search(root);
    }

    void enumerate(const Node& n, std::vector<std::vector<Formula>>& out) {
        ConjunctionSolver cs(budget_);
        if (!cs.solve(n.lits)) { return; }
        if (n.ors.empty()) {
            out.push_back(n.lits);
            return;
        }
        for (const auto& c : n.ors.front()->children) {
            Node next = n;
            next.ors.erase(next.ors.begin());
            if (expand(c, next)) { enumerate(next, out); }
        }
    }

private:
    std::optional<Model> search(const Node& n) {
        ConjunctionSolver cs(budget_);
        auto asg = cs.solve(n.lits);
        if (!asg) { return std::nullopt; }
        Model m = build_model(*asg, symbols_);
        ModelValuation mv(m);
        std::size_t pick = n.ors.size();
        for (std::size_t i = 0; i < n.ors.size(); ++i) {
            if (evaluate(n.ors[i], mv) != Truth::True) {
                pick = i;
                break;
            }
        }
        if (pick == n.ors.size()) { return m; }
        for (const auto& c : n.ors[pick]->children) {
            Node next = n;
            next.ors.erase(next.ors.begin() + static_cast<std::ptrdiff_t>(pick));
            if (!expand(c, next)) { continue; }
            if (auto r = search(next)) { return r; }
        }
        return std::nullopt;
    }

    Budget& budget_;
    std::vector<Term> symbols_;
};

Formula skolemize(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(skolemize(c)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Exists: {
            Substitution s;
            for (const auto& v : f->vars) { s[v->name] = index_var(fresh_name("s")); }
            return skolemize(substitute(f->children[0], s));
        }
        case FormulaKind::Forall:
        case FormulaKind::Not: throw std::invalid_argument("existential part is not existential: " + f->key);
        default: return f;
    }
}

bool has_kind(const Formula& f, FormulaKind k) {
    if (f->kind == k) { return true; }
    return std::any_of(f->children.begin(), f->children.end(), [&](const Formula& c) { return has_kind(c, k); });
}

void guards_for(const Term& t, std::vector<Formula>& out) {
    if (!contains_index_arith(t)) { return; }
    std::int64_t k = t->value;
    if (t->kind == TermKind::IntConst || k > 0) { out.push_back(lt(index_var(kTopIndex), t)); }
    if (k < 0) { out.push_back(lt(t, index_var(kZeroIndex))); }
}

// Universal instantiation where an instance term that may leave the index
// domain is guarded: the instance is only required when the term is defined.
Formula instantiate_guarded(const Formula& f, const std::vector<Term>& pool) {
    switch (f->kind) {
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) { cs.push_back(instantiate_guarded(c, pool)); }
            return f->kind == FormulaKind::And ? conj(cs) : disj(cs);
        }
        case FormulaKind::Forall: {
            Formula body = instantiate_guarded(f->children[0], pool);
            std::vector<Formula> parts;
            std::vector<std::size_t> idx(f->vars.size(), 0);
            while (true) {
                Substitution s;
                std::vector<Formula> alts;
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    s[f->vars[i]->name] = pool[idx[i]];
                    guards_for(pool[idx[i]], alts);
                }
                alts.push_back(substitute(body, s));
                parts.push_back(disj(alts));
                std::size_t i = 0;
                while (i < idx.size() && ++idx[i] == pool.size()) { idx[i++] = 0; }
                if (i == idx.size()) { break; }
            }
            return conj(parts);
        }
        case FormulaKind::Exists:
        case FormulaKind::Not: throw std::invalid_argument("universal part is not universal: " + f->key);
        default: return f;
    }
}

Formula ground_prepare(const Formula& f) { return simplify(to_nnf(reduce_read_over_write(f))); }

std::vector<Term> query_symbols(const Formula& f) { return free_vars(f); }

// ---- SMT-LIB rendering ---------------------------------------------------

std::string smt_sort(const Sort& s) {
    switch (s.kind()) {
        case SortKind::Index:
        case SortKind::Int: return "Int";
        case SortKind::Enum: return s.decl()->name;
        case SortKind::Array: return "(Array Int " + smt_sort(s.element()) + ")";
    }
    return "Int";
}

std::string smt_num(std::int64_t v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

std::string smt_formula(const Formula& f);

std::string smt_term(const Term& t) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::EnumConst: return t->name == kZeroIndex ? "0" : t->name;
        case TermKind::IntConst: return smt_num(t->value);
        case TermKind::Offset: return "(+ " + smt_term(t->args[0]) + " " + smt_num(t->value) + ")";
        case TermKind::Read: return "(select " + smt_term(t->args[0]) + " " + smt_term(t->args[1]) + ")";
        case TermKind::Write:
            return "(store " + smt_term(t->args[0]) + " " + smt_term(t->args[1]) + " " + smt_term(t->args[2]) + ")";
        case TermKind::IntervalWrite:
        case TermKind::CondWrite: return t->key;
    }
    return t->key;
}

std::string smt_formula(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::True: return "true";
        case FormulaKind::False: return "false";
        case FormulaKind::Atom: {
            std::string body = "(" + std::string(rel_symbol(f->rel)) + " " + smt_term(f->lhs) + " " + smt_term(f->rhs) + ")";
            return body;
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::string s = f->kind == FormulaKind::And ? "(and" : "(or";
            for (const auto& c : f->children) { s += " " + smt_formula(c); }
            return s + ")";
        }
        case FormulaKind::Not: return "(not " + smt_formula(f->children[0]) + ")";
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            std::string s = f->kind == FormulaKind::Exists ? "(exists (" : "(forall (";
            std::string range;
            for (const auto& v : f->vars) {
                s += "(" + v->name + " Int)";
                range += " (<= 0 " + v->name + ") (<= " + v->name + " " + kTopIndex + ")";
            }
            std::string conn = f->kind == FormulaKind::Exists ? "(and" : "(=> (and";
            s += ") " + conn + range + (f->kind == FormulaKind::Exists ? " " : ") ") + smt_formula(f->children[0]) + "))";
            return s;
        }
    }
    return f->key;
}

void collect_enum_decls(const Formula& f, std::map<std::string, EnumRef>& out) {
    collect_terms(f, [&](const Term& t) {
        if (t->sort.decl()) { out.emplace(t->sort.decl()->name, t->sort.decl()); }
        return false;
    });
}

} // namespace

std::vector<Term> ground_index_terms(const Formula& f) {
    std::vector<Term> out;
    std::set<std::string> free;
    for (const auto& v : free_vars(f)) {
        if (v->name == kTopIndex || v->name == kZeroIndex) { continue; }
        free.insert(v->name);
        if (v->sort.is_index()) { out.push_back(v); }
    }
    auto arith = collect_terms(f, [&](const Term& t) {
        if (!is_index_arith(t) || mentions_reserved(t)) { return false; }
        for (const auto& v : free_vars(t)) {
            if (!free.count(v->name)) { return false; }
        }
        return true;
    });
    out.insert(out.end(), arith.begin(), arith.end());
    return out;
}

std::string to_smtlib(const Formula& query) {
    std::ostringstream os;
    os << "(set-logic ALL)\n";
    std::map<std::string, EnumRef> decls;
    collect_enum_decls(query, decls);
    for (const auto& [name, d] : decls) {
        os << "(declare-datatypes ((" << name << " 0)) ((";
        for (std::size_t i = 0; i < d->constants.size(); ++i) { os << (i ? " " : "") << "(" << d->constants[i] << ")"; }
        os << ")))\n";
    }
    os << "(declare-const " << kTopIndex << " Int)\n(assert (<= 0 " << kTopIndex << "))\n";
    for (const auto& v : free_vars(query)) {
        if (v->name == kTopIndex || v->name == kZeroIndex) { continue; }
        os << "(declare-const " << v->name << " " << smt_sort(v->sort) << ")\n";
        if (v->sort.is_index()) {
            os << "(assert (and (<= 0 " << v->name << ") (<= " << v->name << " " << kTopIndex << ")))\n";
        }
    }
    os << "(assert " << smt_formula(query) << ")\n(check-sat)\n";
    return os.str();
}

Solver::Solver(SolverOptions opts) : opts_(std::move(opts)) {}

void Solver::dump(const std::string& kind, const Formula& query) {
    if (opts_.dump_dir.empty()) { return; }
    std::filesystem::create_directories(opts_.dump_dir);
    std::ofstream out(std::filesystem::path(opts_.dump_dir) / ("q" + std::to_string(++dumped_) + ".smt2"));
    out << "; " << kind << "\n" << to_smtlib(query);
}

SatResult Solver::check_sat_ground(const Formula& f) {
    ++calls_;
    if (!is_quantifier_free(f)) { throw std::invalid_argument("ground query has quantifiers: " + f->key); }
    Formula g = ground_prepare(f);
    dump("ground", g);
    Budget budget(opts_.literal_budget);
    try {
        Search s(budget, query_symbols(g));
        auto m = s.run(g);
        if (!m) { return {Verdict::Unsat, std::nullopt, ""}; }
        return {Verdict::Sat, std::move(m), ""};
    } catch (const ResourceError& e) {
        if (opts_.theory == Theory::Simple) { throw; }
        return {Verdict::Unknown, std::nullopt, e.what()};
    }
}

SatResult Solver::check_sat_exists_forall(const Formula& ex, const Formula& univ) {
    ++calls_;
    Formula e = skolemize(to_nnf(ex));
    Formula u = to_nnf(univ);
    if (has_kind(u, FormulaKind::Exists)) { throw std::invalid_argument("universal part is not universal: " + univ->key); }
    const bool quantified = has_kind(u, FormulaKind::Forall);
    Formula both = conj({e, u});
    std::vector<Term> pool = ground_index_terms(both);
    if (pool.empty()) { pool.push_back(index_var(fresh_name("s"))); }

    Budget budget(opts_.literal_budget);
    auto run = [&](const Formula& q) {
        Formula g = ground_prepare(q);
        dump("exists-forall", g);
        Search s(budget, query_symbols(g));
        return s.run(g);
    };
    try {
        auto m = run(conj({e, instantiate_guarded(u, pool)}));
        if (!m) { return {Verdict::Unsat, std::nullopt, ""}; }
        if (opts_.theory == Theory::Simple || !quantified || order_only(both)) {
            return {Verdict::Sat, std::move(m), ""};
        }
        // Index arithmetic may need instances the pool lacks; retry with every
        // position of the candidate's domain named.
        const std::int64_t bound = m->domain_size - 1;
        std::vector<Term> full = pool;
        for (std::int64_t c = 0; c <= bound; ++c) { full.push_back(int_const(c, Sort::index())); }
        auto m2 = run(conj({e, instantiate_guarded(u, full), le(index_var(kTopIndex), int_const(bound, Sort::index()))}));
        if (m2) { return {Verdict::Sat, std::move(m2), ""}; }
        return {Verdict::Unknown, std::nullopt, "model not confirmed over its full domain"};
    } catch (const ResourceError& err) {
        if (opts_.theory == Theory::Simple) { throw; }
        return {Verdict::Unknown, std::nullopt, err.what()};
    }
}

Entailment Solver::entails(const Formula& f, const Formula& g) {
    SatResult r = check_sat_exists_forall(f, neg(g));
    switch (r.verdict) {
        case Verdict::Sat: return Entailment::No;
        case Verdict::Unsat: return Entailment::Yes;
        default: return Entailment::Unknown;
    }
}

bool Solver::consistent(const std::vector<Formula>& literals) {
    ++calls_;
    Budget budget(opts_.literal_budget);
    std::vector<Formula> lits;
    for (const auto& l : literals) {
        Formula s = simplify_atom(l);
        if (s->kind == FormulaKind::False) { return false; }
        if (s->kind == FormulaKind::Atom) { lits.push_back(s); }
    }
    ConjunctionSolver cs(budget);
    return cs.solve(lits).has_value();
}

std::vector<std::vector<Formula>> Solver::cubes(const Formula& f) {
    ++calls_;
    Formula g = ground_prepare(f);
    Budget budget(opts_.literal_budget);
    Search s(budget, query_symbols(g));
    Search::Node root;
    std::vector<std::vector<Formula>> out;
    if (!Search::expand(g, root)) { return out; }
    s.enumerate(root, out);
    return out;
}

} // namespace abreach
