#include "engine_internal.hpp"

namespace eagerlog::detail {

std::vector<std::unique_ptr<Relation>> stratum_relations(const RunState& st, const Stratum& s) {
    std::vector<std::unique_ptr<Relation>> out(st.program.decls().size());
    for (const auto& pred : s.preds) {
        std::size_t i = st.program.index_of(pred);
        const Relation& full = st.db->relation(i);
        out[i] = std::make_unique<Relation>(full.name(), full.arity(), full.masks());
    }
    return out;
}

std::vector<Relation*> raw_pointers(const std::vector<std::unique_ptr<Relation>>& rels) {
    std::vector<Relation*> out;
    for (const auto& r : rels) out.push_back(r.get());
    return out;
}

namespace {

// Every rule against the full relations, once per round, until a round adds
// nothing. Slow on purpose; the other engines are checked against it.
class NaiveEngine : public Engine {
public:
    explicit NaiveEngine(RunState& st) : st_(st) {
        for (const auto& r : st.program.rules()) {
            PlanSpec spec;
            spec.rule = r.id;
            plans_.push_back(std::make_unique<RulePlan>(RulePlan::compile(st.program, st.functors, spec)));
        }
    }

    std::vector<const RulePlan*> plans() const override {
        std::vector<const RulePlan*> out;
        for (const auto& p : plans_) out.push_back(p.get());
        return out;
    }

    void run_stratum(const Stratum& s) override {
        auto& c = st_.counters[0];
        CallContext ctx = st_.context(0);
        const auto& full = st_.db->pointers();
        Sources src{full, full};
        std::vector<ValueId> head;
        for (;;) {
            auto pending = stratum_relations(st_, s);
            for (RuleId id : s.rules) {
                const RulePlan& plan = *plans_[id];
                JoinCursor cur(plan, src);
                ++c.items;
                while (cur.next(head, ctx, c.work)) {
                    if (full[plan.head_pred()]->contains(head) || !pending[plan.head_pred()]->add_if_absent(head))
                        ++c.rederived;
                }
            }
            std::uint64_t added = 0;
            for (std::size_t p = 0; p < pending.size(); ++p) {
                if (!pending[p]) continue;
                auto rows = pending[p]->scan();
                while (const ValueId* row = rows.next()) {
                    full[p]->add_if_absent(std::span<const ValueId>(row, full[p]->arity()));
                    st_.record(p, row, full[p]->arity());
                    ++added;
                }
            }
            c.derived += added;
            if (added == 0) return;
        }
    }

private:
    RunState& st_;
    std::vector<std::unique_ptr<RulePlan>> plans_;
};

} // namespace

std::unique_ptr<Engine> make_naive(RunState& st) { return std::make_unique<NaiveEngine>(st); }

} // namespace eagerlog::detail
