#include "abreach/oracle.hpp"

#include "abreach/errors.hpp"

#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace abreach {

namespace {

constexpr double kMaxStates = 1e7;

class PartialValuation : public Valuation {
public:
    explicit PartialValuation(std::int64_t n) : n_(n) {}
    std::int64_t domain_size() const override { return n_; }
    std::optional<std::int64_t> scalar(const std::string& name) const override {
        auto it = scalars_.find(name);
        if (it == scalars_.end()) { return std::nullopt; }
        return it->second;
    }
    std::optional<std::int64_t> cell(const std::string& array, std::int64_t pos) const override {
        auto it = cells_.find(array);
        if (it == cells_.end() || pos < 0 || pos >= n_) { return std::nullopt; }
        return it->second[static_cast<std::size_t>(pos)];
    }

    std::int64_t n_;
    std::map<std::string, std::int64_t> scalars_;
    std::map<std::string, std::vector<std::optional<std::int64_t>>> cells_;
};

struct Slot {
    const VarDecl* var;
    std::int64_t pos; // -1 for scalars
    std::int64_t lo;
    std::int64_t hi;
};

std::pair<std::int64_t, std::int64_t> value_range(const Sort& s, std::int64_t n, IntBounds b) {
    const Sort& e = s.is_array() ? s.element() : s;
    if (e.is_index()) { return {0, n - 1}; }
    if (e.is_int()) { return {b.lo, b.hi}; }
    return {0, static_cast<std::int64_t>(e.decl()->constants.size()) - 1};
}

std::vector<Slot> slots_for(const std::vector<VarDecl>& sig, std::int64_t n, IntBounds b) {
    std::vector<Slot> out;
    double count = 1;
    for (const auto& v : sig) {
        auto [lo, hi] = value_range(v.sort, n, b);
        if (v.sort.is_array()) {
            for (std::int64_t i = 0; i < n; ++i) {
                out.push_back({&v, i, lo, hi});
                count *= static_cast<double>(hi - lo + 1);
            }
        } else {
            out.push_back({&v, -1, lo, hi});
            count *= static_cast<double>(hi - lo + 1);
        }
    }
    if (count > kMaxStates) { throw TooLarge("state space of about " + std::to_string(count) + " states"); }
    return out;
}

Model to_model(const PartialValuation& pv, const std::vector<VarDecl>& sig) {
    Model m;
    m.domain_size = pv.n_;
    for (const auto& v : sig) {
        switch (v.sort.kind()) {
            case SortKind::Index: m.index_vals[v.name] = pv.scalars_.at(v.name); break;
            case SortKind::Int: m.int_vals[v.name] = pv.scalars_.at(v.name); break;
            case SortKind::Enum: m.enum_vals[v.name] = pv.scalars_.at(v.name); break;
            case SortKind::Array: {
                auto& out = m.array_vals[v.name];
                for (const auto& c : pv.cells_.at(v.name)) { out.push_back(*c); }
                break;
            }
        }
    }
    return m;
}

void enumerate(const Formula& f, const std::vector<VarDecl>& sig, std::int64_t n, IntBounds b,
               const std::function<void(Model)>& emit) {
    auto slots = slots_for(sig, n, b);
    PartialValuation pv(n);
    for (const auto& v : sig) {
        if (v.sort.is_array()) { pv.cells_[v.name].assign(static_cast<std::size_t>(n), std::nullopt); }
    }
    std::function<void(std::size_t)> go = [&](std::size_t k) {
        Truth t = evaluate(f, pv);
        if (t == Truth::False) { return; }
        if (k == slots.size()) {
            if (t == Truth::True) { emit(to_model(pv, sig)); }
            return;
        }
        const Slot& s = slots[k];
        for (std::int64_t x = s.lo; x <= s.hi; ++x) {
            if (s.pos < 0) {
                pv.scalars_[s.var->name] = x;
            } else {
                pv.cells_[s.var->name][static_cast<std::size_t>(s.pos)] = x;
            }
            go(k + 1);
        }
        if (s.pos < 0) {
            pv.scalars_.erase(s.var->name);
        } else {
            pv.cells_[s.var->name][static_cast<std::size_t>(s.pos)] = std::nullopt;
        }
    };
    go(0);
}

bool within(const Sort& s, std::int64_t v, std::int64_t n, IntBounds b) {
    auto [lo, hi] = value_range(s, n, b);
    return lo <= v && v <= hi;
}

struct RunGraph {
    struct Node {
        ConcreteState state;
        int parent;
        std::string via;
    };
    std::vector<Node> nodes;

    std::vector<RunStep> path(int id) const {
        std::vector<RunStep> out;
        for (int x = id; x >= 0; x = nodes[x].parent) { out.push_back({nodes[x].via, nodes[x].state}); }
        return {out.rbegin(), out.rend()};
    }
};

} // namespace

FiniteInstance instantiate(const SafetyProblem& p, std::int64_t n, IntBounds bounds) {
    if (n < 1) { throw std::invalid_argument("domain size must be positive"); }
    slots_for(p.vars, n, bounds);
    return {&p, n, bounds};
}

bool eval_formula(const ConcreteState& s, const Formula& f) { return holds(f, s); }

std::vector<ConcreteState> models_of(const Formula& f, const std::vector<VarDecl>& sig, std::int64_t n, IntBounds b) {
    std::vector<ConcreteState> out;
    enumerate(f, sig, n, b, [&](Model m) { out.push_back(std::move(m)); });
    return out;
}

std::vector<ConcreteState> models_of(const Formula& f, const SafetyProblem& p, std::int64_t n, IntBounds b) {
    return models_of(f, p.vars, n, b);
}

std::vector<ConcreteState> successors(const FiniteInstance& inst, const ConcreteState& s, const Transition& t) {
    const SafetyProblem& p = *inst.problem;
    const std::int64_t n = inst.n;
    std::vector<ConcreteState> out;
    std::vector<std::int64_t> idx(t.params.size(), 0);
    const Formula guard = t.full_guard();
    while (true) {
        Model ext = s;
        for (std::size_t i = 0; i < idx.size(); ++i) { ext.index_vals[t.params[i]->name] = idx[i]; }
        if (holds(guard, ext)) {
            ModelValuation mv(ext);
            Model next;
            next.domain_size = n;
            bool ok = true;
            for (const auto& v : p.vars) {
                const Term& u = t.update.at(v.name);
                if (v.sort.is_array()) {
                    auto& cells = next.array_vals[v.name];
                    for (std::int64_t pos = 0; ok && pos < n; ++pos) {
                        TermValue c = evaluate_cell(u, pos, mv);
                        ok = c.state == TermValue::State::Ok && within(v.sort, c.value, n, inst.bounds);
                        cells.push_back(c.value);
                    }
                } else {
                    TermValue c = evaluate_term(u, mv);
                    ok = c.state == TermValue::State::Ok && within(v.sort, c.value, n, inst.bounds);
                    switch (v.sort.kind()) {
                        case SortKind::Index: next.index_vals[v.name] = c.value; break;
                        case SortKind::Int: next.int_vals[v.name] = c.value; break;
                        default: next.enum_vals[v.name] = c.value; break;
                    }
                }
                if (!ok) { break; }
            }
            if (ok) { out.push_back(std::move(next)); }
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == n) { idx[i++] = 0; }
        if (i == idx.size()) { break; }
    }
    return out;
}

std::string state_key(const ConcreteState& s) { return to_string(s); }

OracleResult forward_reach(const FiniteInstance& inst) {
    const SafetyProblem& p = *inst.problem;
    RunGraph g;
    std::unordered_map<std::string, int> seen;
    std::deque<int> queue;
    OracleResult r;
    auto add = [&](ConcreteState s, int parent, const std::string& via) {
        auto [it, fresh] = seen.emplace(state_key(s), static_cast<int>(g.nodes.size()));
        if (!fresh) { return false; }
        g.nodes.push_back({std::move(s), parent, via});
        queue.push_back(it->second);
        if (holds(p.unsafe, g.nodes.back().state)) {
            r.safe = false;
            r.counterexample = g.path(it->second);
            return true;
        }
        return false;
    };
    for (auto& s : models_of(p.init, p, inst.n, inst.bounds)) {
        if (add(std::move(s), -1, "")) {
            r.states = g.nodes.size();
            return r;
        }
    }
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        for (const auto& t : p.transitions) {
            for (auto& s : successors(inst, g.nodes[id].state, t)) {
                if (add(std::move(s), id, t.name)) {
                    r.states = g.nodes.size();
                    return r;
                }
            }
        }
    }
    r.states = g.nodes.size();
    return r;
}

std::optional<std::vector<RunStep>> replay_trace(const FiniteInstance& inst, const Trace& tr) {
    const SafetyProblem& p = *inst.problem;
    RunGraph g;
    std::vector<int> frontier;
    {
        std::unordered_map<std::string, int> seen;
        for (auto& s : models_of(p.init, p, inst.n, inst.bounds)) {
            if (seen.emplace(state_key(s), static_cast<int>(g.nodes.size())).second) {
                frontier.push_back(static_cast<int>(g.nodes.size()));
                g.nodes.push_back({std::move(s), -1, ""});
            }
        }
    }
    for (const auto& step : tr.steps) {
        const Transition* t = p.find_transition(step.base);
        if (!t) { throw std::invalid_argument("trace step " + step.base + " is not a transition of " + p.name); }
        std::unordered_map<std::string, int> seen;
        auto post = [&](const std::vector<int>& from) {
            std::vector<int> out;
            for (int id : from) {
                for (auto& s : successors(inst, g.nodes[id].state, *t)) {
                    if (seen.emplace(state_key(s), static_cast<int>(g.nodes.size())).second) {
                        out.push_back(static_cast<int>(g.nodes.size()));
                        g.nodes.push_back({std::move(s), id, t->name});
                    }
                }
            }
            return out;
        };
        std::vector<int> next = post(frontier);
        if (step.accelerated) {
            for (std::vector<int> work = next; !work.empty();) {
                work = post(work);
                next.insert(next.end(), work.begin(), work.end());
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) { return std::nullopt; }
    }
    for (int id : frontier) {
        if (holds(p.unsafe, g.nodes[id].state)) { return g.path(id); }
    }
    return std::nullopt;
}

} // namespace abreach
