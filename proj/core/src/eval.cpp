#include "abreach/eval.hpp"

#include <sstream>

namespace abreach {

std::optional<std::int64_t> ModelValuation::scalar(const std::string& name) const {
    for (const auto* table : {&model_.index_vals, &model_.int_vals, &model_.enum_vals}) {
        auto it = table->find(name);
        if (it != table->end()) { return it->second; }
    }
    return std::nullopt;
}

std::optional<std::int64_t> ModelValuation::cell(const std::string& array, std::int64_t position) const {
    auto it = model_.array_vals.find(array);
    if (it == model_.array_vals.end() || position < 0 || position >= static_cast<std::int64_t>(it->second.size())) {
        return std::nullopt;
    }
    return it->second[static_cast<std::size_t>(position)];
}

namespace {

using State = TermValue::State;

class Evaluator {
public:
    explicit Evaluator(const Valuation& v) : val_(v), n_(v.domain_size()) {}

    TermValue term(const Term& t) {
        switch (t->kind) {
            case TermKind::Var: {
                for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
                    if (it->first == t->name) { return ok(it->second); }
                }
                if (t->name == kTopIndex) { return ok(n_ - 1); }
                if (t->name == kZeroIndex) { return ok(0); }
                auto v = val_.scalar(t->name);
                if (!v) { return {}; }
                return t->sort.is_index() ? index_value(*v) : ok(*v);
            }
            case TermKind::EnumConst: return ok(t->value);
            case TermKind::IntConst: return t->sort.is_index() ? index_value(t->value) : ok(t->value);
            case TermKind::Offset: {
                auto b = term(t->args[0]);
                if (b.state != State::Ok) { return b; }
                return t->sort.is_index() ? index_value(b.value + t->value) : ok(b.value + t->value);
            }
            case TermKind::Read: {
                auto i = term(t->args[1]);
                if (i.state != State::Ok) { return i; }
                return cell(t->args[0], i.value);
            }
            default: return {State::Undefined, 0};
        }
    }

    TermValue cell(const Term& a, std::int64_t pos) {
        switch (a->kind) {
            case TermKind::Var: {
                auto v = val_.cell(a->name, pos);
                if (!v) { return {}; }
                return ok(*v);
            }
            case TermKind::Write: {
                auto i = term(a->args[1]);
                if (i.state != State::Ok) { return i; }
                return i.value == pos ? term(a->args[2]) : cell(a->args[0], pos);
            }
            case TermKind::IntervalWrite: {
                auto lo = term(a->args[1]);
                if (lo.state != State::Ok) { return lo; }
                auto hi = term(a->args[2]);
                if (hi.state != State::Ok) { return hi; }
                return (lo.value <= pos && pos <= hi.value) ? term(a->args[3]) : cell(a->args[0], pos);
            }
            case TermKind::CondWrite: {
                env_.emplace_back(a->name, pos);
                Truth c = formula(a->cond, true);
                env_.pop_back();
                if (c == Truth::Unknown) { return {}; }
                return c == Truth::True ? term(a->args[1]) : cell(a->args[0], pos);
            }
            default: return {State::Undefined, 0};
        }
    }

    Truth formula(const Formula& f, bool positive) {
        switch (f->kind) {
            case FormulaKind::True: return positive ? Truth::True : Truth::False;
            case FormulaKind::False: return positive ? Truth::False : Truth::True;
            case FormulaKind::Not: return formula(f->children[0], !positive);
            case FormulaKind::Atom: return literal(f, positive);
            case FormulaKind::And:
            case FormulaKind::Or: {
                // Under negative polarity And behaves as Or and vice versa.
                const bool conjunctive = (f->kind == FormulaKind::And) == positive;
                return combine(f->children, conjunctive, [&](const Formula& c) { return formula(c, positive); });
            }
            case FormulaKind::Exists:
            case FormulaKind::Forall: {
                const bool universal = (f->kind == FormulaKind::Forall) == positive;
                return quantify(f->vars, 0, f->children[0], universal, positive);
            }
        }
        return Truth::Unknown;
    }

private:
    static TermValue ok(std::int64_t v) { return {State::Ok, v}; }

    TermValue index_value(std::int64_t v) const {
        if (!unchecked_ && (v < 0 || v >= n_)) { return {State::Undefined, v}; }
        return ok(v);
    }

    template <class Fn>
    static Truth combine(const std::vector<Formula>& cs, bool conjunctive, Fn&& eval_child) {
        bool unknown = false;
        for (const auto& c : cs) {
            Truth t = eval_child(c);
            if (t == Truth::Unknown) {
                unknown = true;
            } else if ((t == Truth::False) == conjunctive) {
                return t;
            }
        }
        if (unknown) { return Truth::Unknown; }
        return conjunctive ? Truth::True : Truth::False;
    }

    Truth quantify(const std::vector<Term>& vars, std::size_t pos, const Formula& body, bool universal, bool positive) {
        if (pos == vars.size()) { return formula(body, positive); }
        bool unknown = false;
        for (std::int64_t x = 0; x < n_; ++x) {
            env_.emplace_back(vars[pos]->name, x);
            Truth t = quantify(vars, pos + 1, body, universal, positive);
            env_.pop_back();
            if (t == Truth::Unknown) {
                unknown = true;
            } else if ((t == Truth::False) == universal) {
                return t;
            }
        }
        if (unknown) { return Truth::Unknown; }
        return universal ? Truth::True : Truth::False;
    }

    Truth literal(const Formula& f, bool positive) {
        // Literals over the reserved bounds compare raw positions.
        unchecked_ = mentions_reserved(f->lhs) || mentions_reserved(f->rhs);
        auto l = term(f->lhs);
        auto r = term(f->rhs);
        unchecked_ = false;
        if (l.state == State::Undefined || r.state == State::Undefined) { return Truth::False; }
        if (l.state == State::Unknown || r.state == State::Unknown) { return Truth::Unknown; }
        bool h = false;
        switch (f->rel) {
            case Rel::Eq: h = l.value == r.value; break;
            case Rel::Ne: h = l.value != r.value; break;
            case Rel::Lt: h = l.value < r.value; break;
            case Rel::Le: h = l.value <= r.value; break;
        }
        return (h == positive) ? Truth::True : Truth::False;
    }

    const Valuation& val_;
    std::int64_t n_;
    std::vector<std::pair<std::string, std::int64_t>> env_;
    bool unchecked_ = false;
};

} // namespace

Truth evaluate(const Formula& f, const Valuation& v) { return Evaluator(v).formula(f, true); }

bool holds(const Formula& f, const Model& m) { return holds(f, ModelValuation(m)); }

TermValue evaluate_term(const Term& t, const Valuation& v) { return Evaluator(v).term(t); }

TermValue evaluate_cell(const Term& array, std::int64_t position, const Valuation& v) {
    return Evaluator(v).cell(array, position);
}

std::string to_string(const Model& m) {
    std::ostringstream os;
    os << "N=" << m.domain_size;
    for (const auto* table : {&m.index_vals, &m.int_vals, &m.enum_vals}) {
        for (const auto& [k, v] : *table) { os << " " << k << "=" << v; }
    }
    for (const auto& [k, vs] : m.array_vals) {
        os << " " << k << "=[";
        for (std::size_t i = 0; i < vs.size(); ++i) { os << (i ? "," : "") << vs[i]; }
        os << "]";
    }
    return os.str();
}

} // namespace abreach
