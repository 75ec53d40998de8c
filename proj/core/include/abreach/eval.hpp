#pragma once

#include "abreach/syntax.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace abreach {

enum class Truth { False, True, Unknown };

/// Read access to an interpretation over the index domain {0..N-1}.
/// Missing symbols yield nullopt, which the evaluator reports as Unknown;
/// this is what lets partial states prune enumeration early.
class Valuation {
public:
    virtual ~Valuation() = default;
    virtual std::int64_t domain_size() const = 0;
    virtual std::optional<std::int64_t> scalar(const std::string& name) const = 0;
    virtual std::optional<std::int64_t> cell(const std::string& array, std::int64_t position) const = 0;
};

/// A finite structure: index values are naturals below domain_size, enum
/// values are constant positions, arrays are tables of domain_size entries.
struct Model {
    std::int64_t domain_size = 1;
    std::map<std::string, std::int64_t> index_vals;
    std::map<std::string, std::int64_t> int_vals;
    std::map<std::string, std::int64_t> enum_vals;
    std::map<std::string, std::vector<std::int64_t>> array_vals;
};

class ModelValuation : public Valuation {
public:
    explicit ModelValuation(const Model& m) : model_(m) {}
    std::int64_t domain_size() const override { return model_.domain_size; }
    std::optional<std::int64_t> scalar(const std::string& name) const override;
    std::optional<std::int64_t> cell(const std::string& array, std::int64_t position) const override;

private:
    const Model& model_;
};

/// Tarskian evaluation. Quantifiers range over {0..N-1}; the reserved
/// variable `_top` denotes N-1. A literal mentioning an index term outside the
/// domain is false under either polarity, so evaluation of `not f` agrees with
/// evaluation of to_nnf(not f).
Truth evaluate(const Formula& f, const Valuation& v);
inline bool holds(const Formula& f, const Valuation& v) { return evaluate(f, v) == Truth::True; }
bool holds(const Formula& f, const Model& m);

struct TermValue {
    enum class State { Ok, Undefined, Unknown };
    State state = State::Unknown;
    std::int64_t value = 0;
};

TermValue evaluate_term(const Term& t, const Valuation& v);
/// Value of array term `array` at `position` (writes are resolved).
TermValue evaluate_cell(const Term& array, std::int64_t position, const Valuation& v);

std::string to_string(const Model& m);

} // namespace abreach
