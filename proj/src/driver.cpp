#include <chrono>

#include "engine_internal.hpp"
#include "eagerlog/validate.hpp"

namespace eagerlog {

const char* engine_name(EngineKind k) {
    switch (k) {
    case EngineKind::Naive: return "naive";
    case EngineKind::SemiNaive: return "seminaive";
    case EngineKind::Eager: return "eager";
    }
    return "?";
}

EngineKind parse_engine(const std::string& name) {
    if (name == "naive") return EngineKind::Naive;
    if (name == "seminaive") return EngineKind::SemiNaive;
    if (name == "eager") return EngineKind::Eager;
    throw UserError("unknown engine '" + name + "' (expected naive, seminaive or eager)");
}

RunResult evaluate(const Program& program, const FunctorRegistry& functors, Interner& interner,
                   const std::map<std::string, std::vector<Tuple>>& inputs, const EngineOptions& options) {
    auto diags = validate(program, functors.arities());
    if (!diags.empty()) {
        std::string msg;
        for (const auto& d : diags) {
            if (!msg.empty()) msg += '\n';
            msg += d.span.str() + ": " + d.message;
        }
        throw UserError(msg);
    }
    if (options.threads == 0) throw UserError("thread count must be at least 1");

    auto wall0 = std::chrono::steady_clock::now();
    double cpu0 = process_cpu_seconds();

    detail::RunState st(program, functors, interner, options);
    st.strata = stratify(program);

    std::size_t workers = 1;
    if (options.kind == EngineKind::Eager || (options.kind == EngineKind::SemiNaive && options.parallel_outer))
        workers = options.threads;
    for (std::size_t w = 0; w < workers; ++w)
        st.sessions.push_back(std::make_unique<OracleSession>(w, options.oracle, interner));
    st.counters.resize(workers);

    std::unique_ptr<detail::Engine> engine;
    switch (options.kind) {
    case EngineKind::Naive: engine = detail::make_naive(st); break;
    case EngineKind::SemiNaive: engine = detail::make_seminaive(st); break;
    case EngineKind::Eager: engine = detail::make_eager(st); break;
    }
    st.db = std::make_unique<Database>(program, plan_indexes(program, engine->plans()));

    std::vector<bool> defined(program.decls().size(), false);
    for (const auto& r : program.rules()) defined[program.index_of(r.head.pred)] = true;
    for (const auto& [pred, rows] : inputs) {
        const PredDecl* d = program.find(pred);
        if (d == nullptr) throw UserError("facts given for undeclared predicate " + pred);
        std::size_t idx = program.index_of(pred);
        if (defined[idx]) throw UserError("facts given for " + pred + ", which rules define");
        Relation& rel = st.db->relation(idx);
        for (const auto& t : rows) {
            if (t.size() != d->arity)
                throw UserError("fact for " + pred + " has " + std::to_string(t.size()) + " columns, expected " +
                                std::to_string(d->arity));
            rel.add_if_absent(t);
        }
    }

    for (const auto& s : st.strata) engine->run_stratum(s);

    RunResult out;
    RunMetrics& m = out.metrics;
    m.engine = engine_name(options.kind);
    m.threads = workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const auto& c = st.counters[w];
        const auto& sess = *st.sessions[w];
        m.work += c.work;
        m.derived += c.derived;
        m.rederived += c.rederived;
        m.oracle_calls += sess.calls();
        m.cache_misses += sess.cache_misses();
        m.per_worker.push_back({sess.calls(), sess.cache_misses(), c.items});
        out.oracle_calls.push_back(sess.call_log());
        out.oracle_misses.push_back(sess.misses_per_call());
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    m.cpu_seconds = process_cpu_seconds() - cpu0;
    out.trace = std::move(st.trace);
    st.sessions.clear();
    out.db = std::move(st.db);
    return out;
}

} // namespace eagerlog
