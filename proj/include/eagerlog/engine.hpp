#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eagerlog/database.hpp"
#include "eagerlog/externs.hpp"
#include "eagerlog/metrics.hpp"
#include "eagerlog/plan.hpp"
#include "eagerlog/stratify.hpp"

namespace eagerlog {

enum class EngineKind { Naive, SemiNaive, Eager };

const char* engine_name(EngineKind k);
/// Accepts "naive", "seminaive", "eager"; throws UserError otherwise.
EngineKind parse_engine(const std::string& name);

struct EngineOptions {
    EngineKind kind = EngineKind::SemiNaive;
    std::size_t threads = 1;
    /// Semi-naive: evaluate the delta atom first instead of in written order.
    bool delta_first = false;
    /// Semi-naive: split the outermost atom's tuples across `threads` workers.
    bool parallel_outer = false;
    std::uint64_t seed = 0;
    OracleConfig oracle;
    /// Record novel facts in derivation order.
    bool trace = false;
};

struct DerivedFact {
    std::size_t pred;
    Tuple tuple;
};

struct RunResult {
    std::unique_ptr<Database> db;
    RunMetrics metrics;
    /// Per worker, the formulas passed to is_sat in call order (only with
    /// oracle.record_calls) and the misses each call was charged.
    std::vector<std::vector<ValueId>> oracle_calls;
    std::vector<std::vector<std::uint64_t>> oracle_misses;
    std::vector<DerivedFact> trace;
};

/// Validates, stratifies and evaluates `program` over `inputs` (predicate
/// name -> rows). Inputs may only target predicates no rule defines.
/// Throws UserError (including ParseError/StratificationError/EvalError)
/// for problems with the program or data, InternalError for engine bugs.
RunResult evaluate(const Program& program, const FunctorRegistry& functors, Interner& interner,
                   const std::map<std::string, std::vector<Tuple>>& inputs, const EngineOptions& options);

// ---------------------------------------------------------------------------
// Semi-naive rewriting

struct DeltaRule {
    RuleId rule = 0;
    /// Body position read from delta; none for a rule without recursive atoms.
    std::optional<std::size_t> delta;
    std::vector<std::size_t> order;
};

/// One DeltaRule per recursive body-atom occurrence, or a single unmarked
/// one when the rule has none.
std::vector<DeltaRule> rewrite_stratum(const Program& p, const Stratum& s, bool delta_first);

// ---------------------------------------------------------------------------
// Eager specialization

/// A body occurrence a novel fact of some predicate can be specialized to.
struct Occurrence {
    RuleId rule;
    std::size_t atom;
};

/// Positive body atoms over recursive predicates of `s`, grouped by
/// predicate declaration index, ascending (rule, atom).
std::vector<std::vector<Occurrence>> recursive_occurrences(const Program& p, const Stratum& s);

/// Unifies a body atom against a ground tuple. Constants must match and
/// repeated variables must agree; functor-call arguments are left for
/// evaluation to check. Nullopt when unification fails.
std::optional<Substitution> unify(const Atom& atom, const Tuple& fact);

/// The rule `r` specialized to `fact` at body position `atom`: substitution
/// applied everywhere, that atom moved to the front. Nullopt when the fact
/// does not unify.
std::optional<Rule> specialize(const Program& p, RuleId r, std::size_t atom, const Tuple& fact);

} // namespace eagerlog
