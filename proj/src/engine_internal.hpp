#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "eagerlog/engine.hpp"

namespace eagerlog::detail {

struct alignas(64) WorkerCounters {
    std::uint64_t work = 0;
    std::uint64_t derived = 0;
    std::uint64_t rederived = 0;
    std::uint64_t items = 0;
};

struct RunState {
    const Program& program;
    const FunctorRegistry& functors;
    Interner& interner;
    const EngineOptions& options;
    std::vector<Stratum> strata;
    std::unique_ptr<Database> db;
    std::vector<std::unique_ptr<OracleSession>> sessions;
    std::vector<WorkerCounters> counters;

    std::mutex trace_mu;
    std::vector<DerivedFact> trace;

    RunState(const Program& p, const FunctorRegistry& f, Interner& in, const EngineOptions& o)
        : program(p), functors(f), interner(in), options(o) {}

    void record(std::size_t pred, const ValueId* row, std::size_t arity) {
        if (!options.trace) return;
        std::lock_guard lock(trace_mu);
        trace.push_back({pred, Tuple(row, row + arity)});
    }

    CallContext context(std::size_t worker) { return CallContext{interner, sessions.at(worker).get()}; }

    bool is_recursive_atom(const Stratum& s, const Atom& a) const {
        return a.kind == AtomKind::Pos && s.is_recursive(a.pred);
    }
};

class Engine {
public:
    virtual ~Engine() = default;
    /// Every plan the engine will run, for index planning.
    virtual std::vector<const RulePlan*> plans() const = 0;
    virtual void run_stratum(const Stratum& s) = 0;
};

std::unique_ptr<Engine> make_naive(RunState& st);
std::unique_ptr<Engine> make_seminaive(RunState& st);
std::unique_ptr<Engine> make_eager(RunState& st);

/// Fresh relations for the predicates of `s` (null elsewhere), sharing the
/// masks of the corresponding full relations.
std::vector<std::unique_ptr<Relation>> stratum_relations(const RunState& st, const Stratum& s);
std::vector<Relation*> raw_pointers(const std::vector<std::unique_ptr<Relation>>& rels);

} // namespace eagerlog::detail
