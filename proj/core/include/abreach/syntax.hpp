#pragma once

#include "abreach/sort.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace abreach {

struct TermNode;
struct FormulaNode;
using Term = std::shared_ptr<const TermNode>;
using Formula = std::shared_ptr<const FormulaNode>;

enum class TermKind {
    Var,
    EnumConst,
    IntConst,      // also index numerals when sort is Index
    Offset,        // base + k
    Read,          // (select a i)
    Write,         // (store a i e)
    IntervalWrite, // (store-range a lo hi e), lo..hi inclusive
    CondWrite,     // (cond-store a (k) cond e): lambda k. cond ? e : a[k]
};

/// Immutable term node. `key` is the canonical s-expression and doubles as
/// the structural identity used for hashing, equality and printing.
struct TermNode {
    TermKind kind;
    Sort sort;
    std::string name;      // Var name, enum constant name, CondWrite bound variable
    std::int64_t value = 0; // IntConst value, Offset amount, EnumConst position
    std::vector<Term> args;
    Formula cond;           // CondWrite only
    std::string key;

    TermNode(TermKind k, Sort s) : kind(k), sort(std::move(s)) {}
};

enum class FormulaKind { True, False, Atom, And, Or, Not, Exists, Forall };
enum class Rel { Eq, Ne, Lt, Le };

struct FormulaNode {
    FormulaKind kind;
    Rel rel = Rel::Eq;
    Term lhs;
    Term rhs;
    std::vector<Formula> children; // And/Or operands, Not/quantifier body in [0]
    std::vector<Term> vars;        // quantified variables (Index-sorted Var terms)
    std::string key;

    explicit FormulaNode(FormulaKind k) : kind(k) {}
};

// ---- term builders -------------------------------------------------------

Term var(const std::string& name, const Sort& sort);
Term index_var(const std::string& name);
Term enum_const(const EnumRef& decl, const std::string& name);
Term int_const(std::int64_t value, const Sort& sort = Sort::integer());
/// base + k; flattens nested offsets and folds constants; k == 0 returns base.
Term offset(const Term& base, std::int64_t k);
Term read(const Term& array, const Term& index);
Term write(const Term& array, const Term& index, const Term& element);
Term interval_write(const Term& array, const Term& lo, const Term& hi, const Term& element);
Term cond_write(const Term& array, const Term& bound, const Formula& cond, const Term& element);

// ---- formula builders ----------------------------------------------------

Formula top();
Formula bot();
Formula atom(Rel rel, const Term& lhs, const Term& rhs);
inline Formula eq(const Term& a, const Term& b) { return atom(Rel::Eq, a, b); }
inline Formula ne(const Term& a, const Term& b) { return atom(Rel::Ne, a, b); }
inline Formula lt(const Term& a, const Term& b) { return atom(Rel::Lt, a, b); }
inline Formula le(const Term& a, const Term& b) { return atom(Rel::Le, a, b); }
/// Flattening conjunction; drops True, absorbs False.
Formula conj(const std::vector<Formula>& fs);
Formula disj(const std::vector<Formula>& fs);
Formula neg(const Formula& f);
Formula implies(const Formula& a, const Formula& b);
Formula exists(const std::vector<Term>& vars, const Formula& body);
Formula forall(const std::vector<Term>& vars, const Formula& body);

/// Names produced here start with '_' and are never reused within a process.
std::string fresh_name(const std::string& prefix);

/// Reserved symbol standing for the largest index value (N-1).
inline constexpr const char* kTopIndex = "_top";
/// Reserved symbol for index 0 that never makes a literal undefined.
inline constexpr const char* kZeroIndex = "_zero";

/// True for `_top` and `_zero`. Literals mentioning them are never undefined.
bool mentions_reserved(const Term& t);

const char* rel_symbol(Rel r);
bool is_atom(const Formula& f);
bool is_quantifier_free(const Formula& f);

/// True when the term is an Index-sorted offset or numeral.
bool is_index_arith(const Term& t);

} // namespace abreach
