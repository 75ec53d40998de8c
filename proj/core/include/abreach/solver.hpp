#pragma once

#include "abreach/eval.hpp"
#include "abreach/syntax.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abreach {

enum class Theory { Simple, DiffArith };

enum class Verdict { Sat, Unsat, Unknown };

struct SatResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<Model> model; // set iff verdict == Sat
    std::string reason;         // why Unknown
};

enum class Entailment { Yes, No, Unknown };

struct SolverOptions {
    Theory theory = Theory::Simple;
    /// Literals processed per query before giving up: Unknown under
    /// DiffArith, ResourceError under Simple.
    std::size_t literal_budget = 200000;
    /// When non-empty, every top-level query is written there as q<n>.smt2.
    std::string dump_dir;
};

/// Ground and exists-forall satisfiability over enumerated constants,
/// difference arithmetic on indexes and integers, and array reads.
///
/// Index values live in a finite prefix {0..N-1} of the naturals with N
/// chosen by the model. Ground queries are decided exactly. Exists-forall
/// queries are reduced to ground ones by instantiating the universals over
/// the index terms of the query; this is complete when the query only
/// compares indexes by order, and otherwise a Sat answer is re-checked once
/// over every position of the model before being trusted.
class Solver {
public:
    explicit Solver(SolverOptions opts = {});

    SatResult check_sat_ground(const Formula& f);
    SatResult check_sat_exists_forall(const Formula& ex, const Formula& univ);
    /// f |= g for existential f and g; Unknown must be read as "not entailed".
    Entailment entails(const Formula& f, const Formula& g);

    /// Consistency of a conjunction of quantifier-free literals (atoms).
    bool consistent(const std::vector<Formula>& literals);
    /// The consistent disjuncts of the DNF of a quantifier-free formula.
    std::vector<std::vector<Formula>> cubes(const Formula& f);

    std::uint64_t calls() const { return calls_; }
    const SolverOptions& options() const { return opts_; }

private:
    void dump(const std::string& kind, const Formula& query);

    SolverOptions opts_;
    std::uint64_t calls_ = 0;
    std::uint64_t dumped_ = 0;
};

/// Index terms a universal may be instantiated with: free index variables,
/// then ground index offsets and numerals, in first-occurrence order.
std::vector<Term> ground_index_terms(const Formula& f);

/// Renders a query in SMT-LIB 2 text (index sort as Int, enums as datatypes).
std::string to_smtlib(const Formula& query);

} // namespace abreach
