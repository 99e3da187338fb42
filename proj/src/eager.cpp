#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <random>
#include <thread>

#include "engine_internal.hpp"

namespace eagerlog {

std::vector<std::vector<Occurrence>> recursive_occurrences(const Program& p, const Stratum& s) {
    std::vector<std::vector<Occurrence>> out(p.decls().size());
    for (RuleId id : s.rules) {
        const Rule& r = p.rules()[id];
        for (std::size_t k = 0; k < r.body.size(); ++k) {
            const Atom& a = r.body[k];
            if (a.kind == AtomKind::Pos && s.is_recursive(a.pred)) out[p.index_of(a.pred)].push_back({id, k});
        }
    }
    return out;
}

std::optional<Substitution> unify(const Atom& atom, const Tuple& fact) {
    if (!atom.is_predicate() || atom.args.size() != fact.size()) return std::nullopt;
    Substitution s;
    for (std::size_t i = 0; i < fact.size(); ++i) {
        const Term& t = atom.args[i];
        if (const Var* v = t.as_var()) {
            auto bound = s.lookup(v->name);
            if (bound && *bound != fact[i]) return std::nullopt;
            s.bind(v->name, fact[i]);
        } else if (const Const* c = t.as_const()) {
            if (c->value != fact[i]) return std::nullopt;
        }
    }
    return s;
}

std::optional<Rule> specialize(const Program& p, RuleId r, std::size_t atom, const Tuple& fact) {
    const Rule& rule = p.rules().at(r);
    auto s = unify(rule.body.at(atom), fact);
    if (!s) return std::nullopt;
    Rule out = apply(*s, rule);
    std::vector<Atom> body;
    for (std::size_t i : rotate_to_front(rule, atom)) body.push_back(out.body[i]);
    // Functor-call columns were not unified; pin the atom to the fact itself.
    for (std::size_t i = 0; i < fact.size(); ++i) body[0].args[i] = Term::constant(fact[i]);
    out.body = std::move(body);
    return out;
}

namespace detail {

namespace {

constexpr ValueId kNoRow[1] = {};

// A rule evaluation, possibly suspended mid-join. Seeds have no fact;
// specialized items carry the fact their first atom is pinned to.
struct Task {
    const RulePlan* plan = nullptr;
    Tuple fact;
    std::optional<JoinCursor> cursor;
};
using TaskPtr = std::unique_ptr<Task>;

struct SpecializedPlan {
    Occurrence occ;
    std::unique_ptr<RulePlan> plan;
};

// Cheap pre-check equivalent to unify(): constant columns and repeated
// variables of the pinned atom.
bool admits(const RulePlan& plan, const ValueId* row) {
    const Step& s = plan.steps()[0];
    for (std::size_t i = 0; i < s.keys.size(); ++i)
        if (s.keys[i].kind == Expr::Kind::Const && row[s.key_cols[i]] != s.keys[i].value) return false;
    for (auto [c, slot] : s.checks)
        for (auto [bc, bslot] : s.binds)
            if (bslot == slot && row[bc] != row[c]) return false;
    return true;
}

class EagerEngine : public Engine {
public:
    explicit EagerEngine(RunState& st) : st_(st) {
        for (const auto& s : st.strata) {
            StratumPlans sp;
            sp.by_pred.resize(st.program.decls().size());
            auto occs = recursive_occurrences(st.program, s);
            for (RuleId id : s.rules) {
                const Rule& r = st.program.rules()[id];
                bool recursive = false;
                for (const auto& a : r.body) recursive |= st.is_recursive_atom(s, a);
                if (!recursive) {
                    PlanSpec spec;
                    spec.rule = id;
                    sp.seeds.push_back(std::make_unique<RulePlan>(RulePlan::compile(st.program, st.functors, spec)));
                }
            }
            for (std::size_t p = 0; p < occs.size(); ++p) {
                for (const Occurrence& o : occs[p]) {
                    PlanSpec spec{o.rule, rotate_to_front(st.program.rules()[o.rule], o.atom), o.atom, true};
                    sp.by_pred[p].push_back(
                        {o, std::make_unique<RulePlan>(RulePlan::compile(st.program, st.functors, spec))});
                }
            }
            strata_.push_back(std::move(sp));
        }
    }

    std::vector<const RulePlan*> plans() const override {
        std::vector<const RulePlan*> out;
        for (const auto& sp : strata_) {
            for (const auto& p : sp.seeds) out.push_back(p.get());
            for (const auto& v : sp.by_pred)
                for (const auto& p : v) out.push_back(p.plan.get());
        }
        return out;
    }

    void run_stratum(const Stratum& s) override {
        current_ = &strata_[s.index];
        const std::size_t n = st_.counters.size();
        deques_ = std::vector<Deque>(n);
        in_flight_.store(0);
        abort_.store(false);
        error_ = nullptr;

        // Owners pop from the back, so seed in reverse to run rules in order.
        const auto& seeds = current_->seeds;
        for (std::size_t i = seeds.size(); i-- > 0;) {
            auto t = std::make_unique<Task>();
            t->plan = seeds[i].get();
            push(i % n, std::move(t));
        }

        std::vector<std::thread> threads;
        for (std::size_t i = 1; i < n; ++i) threads.emplace_back([this, i] { worker(i); });
        worker(0);
        for (auto& t : threads) t.join();
        deques_.clear();
        if (error_) std::rethrow_exception(error_);
    }

private:
    struct StratumPlans {
        std::vector<std::unique_ptr<RulePlan>> seeds;
        std::vector<std::vector<SpecializedPlan>> by_pred;
    };

    struct Deque {
        std::mutex mu;
        std::deque<TaskPtr> items;
    };

    void push(std::size_t w, TaskPtr t) {
        in_flight_.fetch_add(1, std::memory_order_acq_rel);
        {
            std::lock_guard lock(deques_[w].mu);
            deques_[w].items.push_back(std::move(t));
        }
        if (sleepers_.load(std::memory_order_acquire) > 0) {
            std::lock_guard lock(park_mu_);
            park_cv_.notify_one();
        }
    }

    TaskPtr pop_own(std::size_t w) {
        std::lock_guard lock(deques_[w].mu);
        if (deques_[w].items.empty()) return nullptr;
        TaskPtr t = std::move(deques_[w].items.back());
        deques_[w].items.pop_back();
        return t;
    }

    TaskPtr steal(std::size_t w, std::mt19937_64& rng) {
        const std::size_t n = deques_.size();
        if (n < 2) return nullptr;
        std::uniform_int_distribution<std::size_t> pick(0, n - 2);
        for (std::size_t attempt = 0; attempt < 2 * (n - 1); ++attempt) {
            std::size_t v = pick(rng);
            if (v >= w) ++v;
            std::lock_guard lock(deques_[v].mu);
            if (deques_[v].items.empty()) continue;
            TaskPtr t = std::move(deques_[v].items.front());
            deques_[v].items.pop_front();
            return t;
        }
        return nullptr;
    }

    void worker(std::size_t w) {
        std::mt19937_64 rng(st_.options.seed * 0x9e3779b97f4a7c15ULL + w + 1);
        for (;;) {
            if (abort_.load(std::memory_order_acquire)) return;
            TaskPtr t = pop_own(w);
            if (!t) t = steal(w, rng);
            if (t) {
                try {
                    execute(w, std::move(t));
                } catch (...) {
                    fail(std::current_exception());
                    return;
                }
                if (in_flight_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
                    std::lock_guard lock(park_mu_);
                    park_cv_.notify_all();
                }
                continue;
            }
            if (in_flight_.load(std::memory_order_acquire) == 0) return;
            std::unique_lock lock(park_mu_);
            sleepers_.fetch_add(1, std::memory_order_acq_rel);
            park_cv_.wait_for(lock, std::chrono::microseconds(200), [&] {
                return in_flight_.load(std::memory_order_acquire) == 0 || abort_.load(std::memory_order_acquire);
            });
            sleepers_.fetch_sub(1, std::memory_order_acq_rel);
        }
    }

    void fail(std::exception_ptr e) {
        {
            std::lock_guard lock(park_mu_);
            if (!error_) error_ = e;
            abort_.store(true, std::memory_order_release);
        }
        park_cv_.notify_all();
    }

    // Runs `t` until it derives a novel fact that spawns work; then `t` is
    // suspended behind its children so they run first.
    void execute(std::size_t w, TaskPtr t) {
        auto& c = st_.counters[w];
        ++c.items;
        const auto& full = st_.db->pointers();
        if (!t->cursor) {
            const ValueId* row = t->plan->spec().explicit_first ? (t->fact.empty() ? kNoRow : t->fact.data()) : nullptr;
            t->cursor.emplace(*t->plan, Sources{full, full}, row);
        }
        CallContext ctx = st_.context(w);
        std::vector<ValueId> head;
        const std::size_t hp = t->plan->head_pred();
        while (t->cursor->next(head, ctx, c.work)) {
            if (!full[hp]->add_if_absent(head)) {
                ++c.rederived;
                continue;
            }
            ++c.derived;
            st_.record(hp, head.data(), head.size());
            std::vector<TaskPtr> children;
            for (const auto& sp : current_->by_pred[hp]) {
                if (!admits(*sp.plan, head.data())) continue;
                auto child = std::make_unique<Task>();
                child->plan = sp.plan.get();
                child->fact = head;
                children.push_back(std::move(child));
            }
            if (children.empty()) continue;
            push(w, std::move(t));
            for (auto& child : children) push(w, std::move(child));
            return;
        }
    }

    RunState& st_;
    std::vector<StratumPlans> strata_;
    const StratumPlans* current_ = nullptr;
    std::vector<Deque> deques_;
    std::atomic<std::size_t> in_flight_{0};
    std::atomic<std::size_t> sleepers_{0};
    std::atomic<bool> abort_{false};
    std::exception_ptr error_;
    std::mutex park_mu_;
    std::condition_variable park_cv_;
};

} // namespace

std::unique_ptr<Engine> make_eager(RunState& st) { return std::make_unique<EagerEngine>(st); }

} // namespace detail
} // namespace eagerlog
