#include <exception>
#include <thread>

#include "engine_internal.hpp"

namespace eagerlog {

std::vector<DeltaRule> rewrite_stratum(const Program& p, const Stratum& s, bool delta_first) {
    std::vector<DeltaRule> out;
    for (RuleId id : s.rules) {
        const Rule& r = p.rules()[id];
        bool any = false;
        for (std::size_t k = 0; k < r.body.size(); ++k) {
            const Atom& a = r.body[k];
            if (a.kind != AtomKind::Pos || !s.is_recursive(a.pred)) continue;
            any = true;
            out.push_back({id, k, delta_first ? rotate_to_front(r, k) : written_order(r)});
        }
        if (!any) out.push_back({id, std::nullopt, written_order(r)});
    }
    return out;
}

namespace detail {

namespace {

struct CompiledDelta {
    DeltaRule rule;
    std::unique_ptr<RulePlan> plan;
    // Same order with the first atom fed row by row, for the parallel loop.
    std::unique_ptr<RulePlan> outer;
};

class SemiNaiveEngine : public Engine {
public:
    explicit SemiNaiveEngine(RunState& st) : st_(st), parallel_(st.options.parallel_outer && st.counters.size() > 1) {
        for (const auto& s : st.strata) {
            std::vector<CompiledDelta> rules;
            for (auto& dr : rewrite_stratum(st.program, s, st.options.delta_first)) {
                CompiledDelta c;
                PlanSpec spec{dr.rule, dr.order, dr.delta, false};
                c.plan = std::make_unique<RulePlan>(RulePlan::compile(st.program, st.functors, spec));
                const auto& steps = c.plan->steps();
                if (parallel_ && !steps.empty() && steps[0].kind == Step::Kind::Scan) {
                    spec.explicit_first = true;
                    c.outer = std::make_unique<RulePlan>(RulePlan::compile(st.program, st.functors, spec));
                }
                c.rule = std::move(dr);
                rules.push_back(std::move(c));
            }
            by_stratum_.push_back(std::move(rules));
        }
    }

    std::vector<const RulePlan*> plans() const override {
        std::vector<const RulePlan*> out;
        for (const auto& rules : by_stratum_)
            for (const auto& c : rules) {
                out.push_back(c.plan.get());
                if (c.outer) out.push_back(c.outer.get());
            }
        return out;
    }

    void run_stratum(const Stratum& s) override {
        const auto& rules = by_stratum_[s.index];
        const auto& full = st_.db->pointers();

        std::vector<const CompiledDelta*> first, recursive;
        for (const auto& c : rules) (c.rule.delta ? recursive : first).push_back(&c);

        std::vector<std::unique_ptr<Relation>> prev;
        std::vector<Relation*> prev_ptrs(full.size(), nullptr);
        std::vector<const CompiledDelta*>* round = &first;
        for (;;) {
            auto next = stratum_relations(st_, s);
            Sources src{full, prev_ptrs};
            evaluate_round(*round, src, next);

            // p^[i+1] = p^[i] ∪ δ^[i]; `next` only holds tuples absent from full.
            bool any = false;
            for (std::size_t p = 0; p < next.size(); ++p) {
                if (!next[p]) continue;
                auto rows = next[p]->scan();
                while (const ValueId* row = rows.next()) {
                    full[p]->add_if_absent(std::span<const ValueId>(row, full[p]->arity()));
                    st_.record(p, row, full[p]->arity());
                    ++st_.counters[0].derived;
                    any = true;
                }
            }
            if (!any || s.recursive_preds.empty() || recursive.empty()) return;
            prev = std::move(next);
            prev_ptrs = raw_pointers(prev);
            round = &recursive;
        }
    }

private:
    void emit(const std::vector<ValueId>& head, std::size_t pred, const Sources& src,
              std::vector<std::unique_ptr<Relation>>& next, WorkerCounters& c) {
        if (src.full[pred]->contains(head) || !next[pred]->add_if_absent(head)) ++c.rederived;
    }

    void evaluate_round(const std::vector<const CompiledDelta*>& rules, const Sources& src,
                        std::vector<std::unique_ptr<Relation>>& next) {
        std::vector<ValueId> head;
        for (const CompiledDelta* c : rules) {
            if (c->outer) {
                evaluate_parallel(*c, src, next);
                continue;
            }
            auto& counters = st_.counters[0];
            CallContext ctx = st_.context(0);
            JoinCursor cur(*c->plan, src);
            ++counters.items;
            while (cur.next(head, ctx, counters.work)) emit(head, c->plan->head_pred(), src, next, counters);
        }
    }

    // Rows of the outermost atom are enumerated (and counted) here, then
    // striped across workers; each worker joins its rows against the same
    // iteration-start relations.
    void evaluate_parallel(const CompiledDelta& c, const Sources& src, std::vector<std::unique_ptr<Relation>>& next) {
        const Step& s0 = c.plan->steps()[0];
        std::vector<ValueId> key;
        {
            CallContext ctx = st_.context(0);
            std::vector<ValueId> env;
            for (const auto& k : s0.keys) key.push_back(eval_expr(k, env, ctx));
        }
        const Relation* rel = s0.source == Source::Delta ? src.delta[s0.pred] : src.full[s0.pred];
        std::vector<const ValueId*> rows;
        auto cur = rel->query(s0.mask, key);
        while (const ValueId* row = cur.next()) rows.push_back(row);
        st_.counters[0].work += rows.size();

        const std::size_t n = st_.counters.size();
        std::vector<std::exception_ptr> errors(n);
        auto worker = [&](std::size_t w) {
            try {
                auto& counters = st_.counters[w];
                CallContext ctx = st_.context(w);
                std::vector<ValueId> head;
                for (std::size_t i = w; i < rows.size(); i += n) {
                    JoinCursor jc(*c.outer, src, rows[i], false);
                    ++counters.items;
                    while (jc.next(head, ctx, counters.work)) emit(head, c.outer->head_pred(), src, next, counters);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        };
        std::vector<std::thread> threads;
        for (std::size_t w = 1; w < n; ++w) threads.emplace_back(worker, w);
        worker(0);
        for (auto& t : threads) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    RunState& st_;
    bool parallel_;
    std::vector<std::vector<CompiledDelta>> by_stratum_;
};

} // namespace

std::unique_ptr<Engine> make_seminaive(RunState& st) { return std::make_unique<SemiNaiveEngine>(st); }

} // namespace detail
} // namespace eagerlog
