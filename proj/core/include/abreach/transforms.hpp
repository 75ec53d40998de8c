#pragma once

#include "abreach/syntax.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace abreach {

/// Variable name -> replacement term. Must be sort-preserving.
using Substitution = std::map<std::string, Term>;

/// Capture-avoiding simultaneous substitution of free variables.
/// Throws SortMismatch when a replacement changes the variable's sort.
Term substitute(const Term& t, const Substitution& s);
Formula substitute(const Formula& f, const Substitution& s);

/// Negation normal form: negation is pushed onto atoms and absorbed into the
/// relation (not = becomes distinct, not < becomes flipped <=, ...).
Formula to_nnf(const Formula& f);

/// Eliminates every write under a read by case splitting on the written
/// position. The result contains reads of plain array variables only.
Formula reduce_read_over_write(const Formula& f);

/// Replaces each universal block by the conjunction of its instances over X.
Formula instantiate_universals(const Formula& f, const std::vector<Term>& instances);

/// Folds atoms whose truth is fixed syntactically (x = x, C = R, 1 < 2, ...).
Formula simplify(const Formula& f);
Formula simplify_atom(const Formula& atom);

/// Free variables in first-occurrence order.
std::vector<Term> free_vars(const Formula& f);
std::vector<Term> free_vars(const Term& t);
/// Free Index-sorted variables in first-occurrence order.
std::vector<Term> free_index_vars(const Formula& f);

/// Distinct subterms (by key) satisfying `pred`, in first-occurrence order.
std::vector<Term> collect_terms(const Formula& f, const std::function<bool(const Term&)>& pred);

/// True when the formula has no index offsets and no index numerals.
bool order_only(const Formula& f);
/// True when the term contains an index offset or a nonzero index numeral,
/// i.e. when it may denote a position outside the index domain.
bool contains_index_arith(const Term& t);

/// Replaces the Enum sort named `decl->name` by `decl` everywhere (used when a
/// sort gains constants).
Formula retype_enum(const Formula& f, const EnumRef& decl);
Term retype_enum(const Term& t, const EnumRef& decl);

/// Splits a top-level Exists into (variables, matrix); non-quantified input
/// yields an empty prefix.
std::pair<std::vector<Term>, Formula> split_exists(const Formula& f);

} // namespace abreach
