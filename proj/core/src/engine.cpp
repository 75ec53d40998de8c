#include "abreach/engine.hpp"

#include "abreach/acceleration.hpp"
#include "abreach/errors.hpp"
#include "abreach/transforms.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

namespace abreach {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Safe: return "SAFE";
        case Outcome::Unsafe: return "UNSAFE";
        case Outcome::Unknown: return "UNKNOWN";
        case Outcome::ResourceLimit: return "RESOURCE-LIMIT";
    }
    return "?";
}

const char* concretization_name(Concretization::Kind k) {
    switch (k) {
        case Concretization::Kind::Confirmed: return "confirmed";
        case Concretization::Kind::Spurious: return "spurious";
        case Concretization::Kind::Unknown: return "unknown";
    }
    return "?";
}

// ---- preimage ------------------------------------------------------------

Formula preimage(const SafetyProblem& p, const Transition& t, const Formula& K) {
    auto [kvars, matrix] = split_exists(K);
    Substitution rename;
    std::vector<Term> bound;
    for (const auto& x : t.params) {
        Term y = index_var(fresh_name("i"));
        rename[x->name] = y;
        bound.push_back(y);
    }
    Substitution to_pre;
    for (const auto& v : p.vars) { to_pre[v.name] = substitute(t.update.at(v.name), rename); }
    Substitution krename;
    for (const auto& x : kvars) {
        Term y = index_var(fresh_name("y"));
        krename[x->name] = y;
        bound.push_back(y);
    }
    std::vector<Formula> parts{substitute(t.full_guard(), rename)};
    // A step whose index update leaves the domain is no step.
    for (const auto& v : p.vars) {
        const Term& u = to_pre.at(v.name);
        if (v.sort.is_index() && contains_index_arith(u)) { parts.push_back(eq(u, u)); }
    }
    parts.push_back(substitute(substitute(matrix, krename), to_pre));
    return exists(bound, simplify(reduce_read_over_write(conj(parts))));
}

// ---- cubes ---------------------------------------------------------------

namespace {

bool term_mentions(const Term& t, const std::string& key) {
    if (t->key == key) { return true; }
    return std::any_of(t->args.begin(), t->args.end(), [&](const Term& a) { return term_mentions(a, key); });
}

bool lit_mentions(const Formula& l, const std::string& key) {
    return term_mentions(l->lhs, key) || term_mentions(l->rhs, key);
}

bool is_definedness(const Formula& l) { return l->rel == Rel::Eq && l->lhs->key == l->rhs->key; }

std::optional<Formula> canonical(std::vector<Term> ex, std::vector<Formula> lits) {
    auto is_ex = [&](const Term& t) {
        return t->kind == TermKind::Var && std::any_of(ex.begin(), ex.end(), [&](const Term& x) { return x->name == t->name; });
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < lits.size() && !changed; ++i) {
            const Formula l = lits[i];
            if (l->rel != Rel::Eq || !l->lhs->sort.is_index() || is_definedness(l)) { continue; }
            for (const auto& [x, u] : {std::pair{l->lhs, l->rhs}, std::pair{l->rhs, l->lhs}}) {
                if (!is_ex(x) || term_mentions(u, x->key)) { continue; }
                lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(i));
                std::vector<Formula> next;
                for (const auto& m : lits) {
                    Formula s = simplify_atom(substitute(m, {{x->name, u}}));
                    if (s->kind == FormulaKind::False) { return std::nullopt; }
                    if (s->kind == FormulaKind::Atom) { next.push_back(s); }
                }
                if (contains_index_arith(u)) { next.push_back(eq(u, u)); }
                lits = std::move(next);
                ex.erase(std::remove_if(ex.begin(), ex.end(), [&](const Term& y) { return y->name == x->name; }), ex.end());
                changed = true;
                break;
            }
        }
    }
    std::vector<Formula> out;
    std::set<std::string> keys;
    for (const auto& l : lits) {
        if (!keys.insert(l->key).second) { continue; }
        if (is_definedness(l)) {
            bool elsewhere = std::any_of(lits.begin(), lits.end(), [&](const Formula& m) {
                return !is_definedness(m) && lit_mentions(m, l->lhs->key);
            });
            if (elsewhere) { continue; }
        }
        out.push_back(l);
    }
    // Rename the surviving bound variables in order of first occurrence.
    Formula body = conj(out);
    std::vector<Term> used;
    Substitution s;
    for (const auto& v : free_vars(body)) {
        if (!is_ex(v)) { continue; }
        Term y = index_var("_x" + std::to_string(used.size() + 1));
        s[v->name] = y;
        used.push_back(y);
    }
    return exists(used, substitute(body, s));
}

} // namespace

std::vector<Formula> split_cubes(Solver& s, const Formula& f) {
    auto [vars, matrix] = split_exists(f);
    std::vector<Formula> out;
    std::set<std::string> seen;
    for (auto& cube : s.cubes(matrix)) {
        auto c = canonical(vars, cube);
        if (c && seen.insert((*c)->key).second) { out.push_back(*c); }
    }
    return out;
}

// ---- fixpoint ------------------------------------------------------------

namespace {

std::vector<Formula> literals_of(const Formula& m) {
    if (m->kind == FormulaKind::True) { return {}; }
    if (m->kind == FormulaKind::And) { return m->children; }
    return {m};
}

// K entails B when B's literals map into K's under some renaming of B's
// bound variables onto index variables of K.
bool syntactic_cover(const Formula& K, const Formula& B) {
    auto [kv, km] = split_exists(K);
    auto [bv, bm] = split_exists(B);
    std::set<std::string> have;
    for (const auto& l : literals_of(km)) { have.insert(l->key); }
    const auto targets = free_index_vars(K->kind == FormulaKind::Exists ? km : K);
    const auto blits = literals_of(bm);
    Substitution s;
    std::function<bool(std::size_t)> go = [&](std::size_t i) {
        if (i == bv.size()) {
            for (const auto& l : blits) {
                if (!have.count(substitute(l, s)->key)) { return false; }
            }
            return true;
        }
        for (const auto& t : targets) {
            s[bv[i]->name] = t;
            if (go(i + 1)) { return true; }
        }
        s.erase(bv[i]->name);
        return false;
    };
    return go(0);
}

} // namespace

bool fixpoint_check(Solver& s, const Formula& K, const std::vector<Node>& br) {
    std::vector<Formula> relevant;
    auto [kv, km] = split_exists(K);
    for (const auto& n : br) {
        if (n.deleted) { continue; }
        if (syntactic_cover(K, n.formula)) { return true; }
        auto [bv, bm] = split_exists(n.formula);
        Substitution apart;
        std::vector<Term> fresh;
        for (const auto& x : bv) {
            Term y = index_var(fresh_name("b"));
            apart[x->name] = y;
            fresh.push_back(y);
        }
        SatResult r = s.check_sat_ground(conj({km, substitute(bm, apart)}));
        if (r.verdict != Verdict::Unsat) { relevant.push_back(n.formula); }
    }
    if (relevant.empty()) { return false; }
    return s.entails(K, disj(relevant)) == Entailment::Yes;
}

// ---- the search ----------------------------------------------------------

SafetyProblem prepare(const SafetyProblem& p, const EngineConfig& cfg) {
    SafetyProblem q = cfg.accelerate ? with_accelerations(p) : p;
    if (cfg.abstraction == AbstractionMode::Transform && !q.location_array().empty()) { q = abstract_all(q); }
    return q;
}

namespace {

class Search {
public:
    Search(const SafetyProblem& original, const EngineConfig& cfg, const Observer& observe)
        : original_(original), p_(prepare(original, cfg)), cfg_(cfg), observe_(observe),
          solver_(SolverOptions{original.theory, cfg.literal_budget, cfg.smt_dump}) {
        if (!cfg.dump_frontier.empty()) { dump_.open(cfg.dump_frontier); }
    }

    BackwardResult run() {
        try {
            body();
        } catch (const ResourceError& e) {
            finish(Outcome::ResourceLimit, e.what());
        }
        r_.stats.nodes = r_.nodes.size();
        r_.stats.solver_calls = solver_.calls();
        return std::move(r_);
    }

private:
    void body() {
        for (const auto& c : split_cubes(solver_, p_.unsafe)) {
            if (add(c, -1, nullptr, false)) { return; }
        }
        while (!queue_.empty()) {
            const int id = queue_.front();
            queue_.pop_front();
            const Node n = r_.nodes[id];
            if (n.depth + 1 > cfg_.max_iters) {
                finish(Outcome::ResourceLimit, "iteration limit " + std::to_string(cfg_.max_iters));
                return;
            }
            for (const auto& t : p_.transitions) {
                Formula pre = preimage(p_, t, n.formula);
                bool abstracted = !t.abstracts.empty();
                if (!is_quantifier_free(split_exists(pre).second)) {
                    if (cfg_.abstraction == AbstractionMode::Off) {
                        finish(Outcome::Unknown, "universal guard without abstraction");
                        return;
                    }
                    Formula abs = abstract_formula(pre, instantiation_set(pre, cfg_.inst_set));
                    if (observe_) { observe_({t.name, n.formula, pre, abs}); }
                    pre = abs;
                    abstracted = true;
                }
                for (const auto& c : split_cubes(solver_, pre)) {
                    if (add(c, id, &t, abstracted)) { return; }
                }
            }
        }
        finish(Outcome::Safe, "");
    }

    // Registers a node, runs the safety and fixpoint tests; true when the
    // search is over.
    bool add(const Formula& k, int parent, const Transition* via, bool abstracted) {
        if (r_.nodes.size() >= cfg_.max_nodes) {
            finish(Outcome::ResourceLimit, "node limit " + std::to_string(cfg_.max_nodes));
            return true;
        }
        Node n;
        n.id = static_cast<int>(r_.nodes.size());
        n.formula = k;
        n.parent = parent;
        n.depth = parent < 0 ? 0 : r_.nodes[parent].depth + 1;
        if (via) {
            n.via = via->name;
            n.abstracted = abstracted;
            n.accelerated = !via->accelerates.empty();
        }
        r_.stats.iterations = std::max(r_.stats.iterations, n.depth);
        r_.nodes.push_back(n);

        SatResult safety = solver_.check_sat_exists_forall(k, p_.init);
        if (safety.verdict == Verdict::Sat) {
            log(n, "sat", false);
            r_.trace = extract_trace(p_, r_.nodes, n.id);
            finish(Outcome::Unsafe, "");
            if (cfg_.concretize) { r_.concretization = concretize_trace(*r_.trace, original_, cfg_); }
            return true;
        }
        if (safety.verdict == Verdict::Unknown) {
            log(n, "unknown", false);
            finish(Outcome::Unknown, "safety test: " + safety.reason);
            return true;
        }
        std::vector<Node> earlier(r_.nodes.begin(), r_.nodes.end() - 1);
        const bool covered = cfg_.subsumption && fixpoint_check(solver_, k, earlier);
        if (covered) {
            r_.nodes.back().deleted = true;
            ++r_.stats.deleted;
        } else {
            queue_.push_back(n.id);
        }
        log(n, "unsat", covered);
        return false;
    }

    void finish(Outcome o, std::string reason) {
        r_.verdict = o;
        r_.reason = std::move(reason);
    }

    void log(const Node& n, const char* safety, bool covered) {
        if (!dump_.is_open()) { return; }
        nlohmann::json j{{"id", n.id},           {"depth", n.depth},     {"parent", n.parent},
                         {"via", n.via},         {"abstracted", n.abstracted},
                         {"accelerated", n.accelerated},               {"formula", n.formula->key},
                         {"safety", safety},     {"covered", covered}};
        dump_ << j.dump() << "\n";
    }

    const SafetyProblem& original_;
    SafetyProblem p_;
    EngineConfig cfg_;
    const Observer& observe_;
    Solver solver_;
    BackwardResult r_;
    std::deque<int> queue_;
    std::ofstream dump_;
};

void int_constants(const Term& t, std::vector<std::int64_t>& out) {
    if (t->kind == TermKind::IntConst && t->sort.is_int()) { out.push_back(t->value); }
    for (const auto& a : t->args) { int_constants(a, out); }
    if (t->cond) {
        for (const auto& c : collect_terms(t->cond, [](const Term& x) { return x->kind == TermKind::IntConst; })) {
            int_constants(c, out);
        }
    }
}

IntBounds replay_bounds(const SafetyProblem& p, std::size_t steps) {
    std::vector<std::int64_t> cs{0};
    auto scan = [&](const Formula& f) {
        for (const auto& t : collect_terms(f, [](const Term& x) { return x->kind == TermKind::IntConst; })) {
            int_constants(t, cs);
        }
    };
    scan(p.init);
    scan(p.unsafe);
    for (const auto& t : p.transitions) {
        scan(t.full_guard());
        for (const auto& [_, u] : t.update) { int_constants(u, cs); }
    }
    auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
    return {std::min<std::int64_t>(0, *lo), *hi + static_cast<std::int64_t>(steps) + 2};
}

} // namespace

BackwardResult backward_reach(const SafetyProblem& p, const EngineConfig& cfg, const Observer& observe) {
    return Search(p, cfg, observe).run();
}

Trace extract_trace(const SafetyProblem& explored, const std::vector<Node>& nodes, int id) {
    Trace tr;
    tr.initial = nodes[id].formula;
    int x = id;
    for (; nodes[x].parent >= 0; x = nodes[x].parent) {
        const Node& n = nodes[x];
        const Transition* t = explored.find_transition(n.via);
        TraceStep s{n.via, n.via, n.abstracted, n.accelerated};
        if (t && !t->accelerates.empty()) { s.base = t->accelerates; }
        if (t && !t->abstracts.empty()) { s.base = t->abstracts; }
        tr.steps.push_back(s);
    }
    tr.unsafe = nodes[x].formula;
    return tr;
}

Concretization concretize_trace(const Trace& tr, const SafetyProblem& p, const EngineConfig& cfg) {
    const IntBounds b = replay_bounds(p, tr.steps.size());
    for (std::int64_t n = 1; n <= cfg.max_oracle_n; ++n) {
        try {
            FiniteInstance inst = instantiate(p, n, b);
            if (auto run = replay_trace(inst, tr)) { return {Concretization::Kind::Confirmed, n, std::move(*run)}; }
        } catch (const TooLarge&) {
            break;
        }
    }
    if (!tr.exact()) {
        EngineConfig exact = cfg;
        exact.abstraction = AbstractionMode::Off;
        exact.accelerate = false;
        exact.concretize = false;
        exact.dump_frontier.clear();
        exact.smt_dump.clear();
        exact.max_iters = std::max<std::size_t>(tr.steps.size(), 1);
        if (backward_reach(p, exact).verdict != Outcome::Unsafe) { return {Concretization::Kind::Spurious, 0, {}}; }
    }
    return {Concretization::Kind::Unknown, 0, {}};
}

} // namespace abreach
