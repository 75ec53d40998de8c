#pragma once

#include "abreach/abstraction.hpp"
#include "abreach/oracle.hpp"
#include "abreach/problem.hpp"
#include "abreach/solver.hpp"
#include "abreach/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace abreach {

enum class AbstractionMode { Off, Runtime, Transform };

struct EngineConfig {
    std::size_t max_iters = 200;
    std::size_t max_nodes = 20000;
    AbstractionMode abstraction = AbstractionMode::Runtime;
    bool accelerate = false;
    InstSet inst_set = InstSet::Default;
    std::int64_t max_oracle_n = 6;
    bool subsumption = true;
    bool concretize = true;
    std::size_t literal_budget = 200000;
    std::string dump_frontier; // JSON-lines node log
    std::string smt_dump;      // directory for solver queries
};

struct Node {
    int id = 0;
    Formula formula; // existential, quantifier-free matrix
    int parent = -1;
    std::string via;
    bool abstracted = false;
    bool accelerated = false;
    std::size_t depth = 0;
    bool deleted = false; // covered by earlier nodes
};

enum class Outcome { Safe, Unsafe, Unknown, ResourceLimit };
const char* outcome_name(Outcome o);

struct Stats {
    std::size_t iterations = 0; // deepest node
    std::size_t nodes = 0;
    std::size_t deleted = 0;
    std::uint64_t solver_calls = 0;
};

struct Concretization {
    enum class Kind { Confirmed, Spurious, Unknown } kind = Kind::Unknown;
    std::int64_t n = 0;
    std::vector<RunStep> run;
};
const char* concretization_name(Concretization::Kind k);

struct BackwardResult {
    Outcome verdict = Outcome::Unknown;
    std::string reason;
    Stats stats;
    std::optional<Trace> trace;
    std::optional<Concretization> concretization;
    std::vector<Node> nodes;
};

/// Reported for each preimage that needed abstraction.
struct PreimageObservation {
    std::string transition;
    Formula target;     // K
    Formula exact;      // exists-forall preimage
    Formula abstracted; // its instantiation
};
using Observer = std::function<void(const PreimageObservation&)>;

/// exists params, K's variables. guard && forall-part && K[v := update],
/// reduced to reads of plain arrays. Universal guards are kept.
Formula preimage(const SafetyProblem& p, const Transition& t, const Formula& K);

/// DNF of an existential formula as canonical existential cubes: index
/// equalities on bound variables are eliminated and bound variables renamed
/// _x1, _x2, ... in order of occurrence. Inconsistent cubes are dropped.
std::vector<Formula> split_cubes(Solver& s, const Formula& f);

/// Covered iff K entails the disjunction of the live nodes.
bool fixpoint_check(Solver& s, const Formula& K, const std::vector<Node>& br);

/// The problem the engine explores under cfg (accelerations added,
/// crash transform applied).
SafetyProblem prepare(const SafetyProblem& p, const EngineConfig& cfg);

BackwardResult backward_reach(const SafetyProblem& p, const EngineConfig& cfg, const Observer& observe = {});

Trace extract_trace(const SafetyProblem& explored, const std::vector<Node>& nodes, int id);

/// Replays tr on the original problem for N = 1..cfg.max_oracle_n.
Concretization concretize_trace(const Trace& tr, const SafetyProblem& p, const EngineConfig& cfg);

} // namespace abreach
