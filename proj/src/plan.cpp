#include "eagerlog/plan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace eagerlog {

std::vector<std::size_t> written_order(const Rule& r) {
    std::vector<std::size_t> order(r.body.size());
    std::iota(order.begin(), order.end(), 0);
    return order;
}

std::vector<std::size_t> rotate_to_front(const Rule& r, std::size_t k) {
    std::vector<std::size_t> order{k};
    for (std::size_t i = 0; i < r.body.size(); ++i)
        if (i != k) order.push_back(i);
    return order;
}

namespace {

class Compiler {
public:
    Compiler(const Program& p, const FunctorRegistry& f, const Rule& r) : program_(p), functors_(f), rule_(r) {}

    bool ground(const Term& t) const {
        if (const Var* v = t.as_var()) return bound_.count(v->name) != 0;
        if (const FunctorCall* c = t.as_call())
            return std::all_of(c->args.begin(), c->args.end(), [&](const Term& a) { return ground(a); });
        return true;
    }

    Expr compile(const Term& t) const {
        Expr e;
        if (const Var* v = t.as_var()) {
            auto it = slots_.find(v->name);
            if (it == slots_.end() || bound_.count(v->name) == 0) fail("variable " + v->name + " is unbound");
            e.kind = Expr::Kind::Slot;
            e.slot = it->second;
        } else if (const Const* c = t.as_const()) {
            e.kind = Expr::Kind::Const;
            e.value = c->value;
        } else {
            const FunctorCall& call = *t.as_call();
            e.kind = Expr::Kind::Call;
            e.functor = functors_.find(call.functor);
            if (e.functor == nullptr) fail("unknown functor @" + call.functor);
            if (e.functor->arity != call.args.size()) fail("wrong arity for @" + call.functor);
            for (const auto& a : call.args) e.args.push_back(compile(a));
        }
        return e;
    }

    std::uint32_t slot_for(const std::string& var) {
        auto [it, fresh] = slots_.emplace(var, static_cast<std::uint32_t>(next_slot_));
        if (fresh) ++next_slot_;
        return it->second;
    }

    std::uint32_t hidden_slot() { return static_cast<std::uint32_t>(next_slot_++); }

    void flush_deferred(std::vector<Step>& steps) {
        for (auto it = deferred_.begin(); it != deferred_.end();) {
            if (!ground(it->second)) {
                ++it;
                continue;
            }
            Step s;
            s.kind = Step::Kind::Compare;
            s.lhs.kind = Expr::Kind::Slot;
            s.lhs.slot = it->first;
            s.rhs = compile(it->second);
            s.equal = true;
            steps.push_back(std::move(s));
            it = deferred_.erase(it);
        }
    }

    void scan(const Atom& a, bool delta, bool explicit_row, std::vector<Step>& steps) {
        Step s;
        s.kind = Step::Kind::Scan;
        s.pred = program_.index_of(a.pred);
        s.source = delta ? Source::Delta : Source::Full;
        s.explicit_row = explicit_row;
        std::set<std::string> local;
        for (std::size_t c = 0; c < a.args.size(); ++c) {
            const Term& t = a.args[c];
            if (const Var* v = t.as_var()) {
                if (bound_.count(v->name)) {
                    add_key(s, c, compile(t));
                } else if (local.count(v->name)) {
                    s.checks.push_back({c, slots_.at(v->name)});
                } else {
                    s.binds.push_back({c, slot_for(v->name)});
                    local.insert(v->name);
                }
            } else if (ground(t)) {
                add_key(s, c, compile(t));
            } else {
                std::uint32_t h = hidden_slot();
                s.binds.push_back({c, h});
                deferred_.push_back({h, t});
            }
        }
        bound_.insert(local.begin(), local.end());
        steps.push_back(std::move(s));
        flush_deferred(steps);
    }

    static void add_key(Step& s, std::size_t c, Expr e) {
        s.mask |= Mask{1} << c;
        s.key_cols.push_back(c);
        s.keys.push_back(std::move(e));
    }

    void negation(const Atom& a, std::vector<Step>& steps) {
        Step s;
        s.kind = Step::Kind::Neg;
        s.pred = program_.index_of(a.pred);
        for (std::size_t c = 0; c < a.args.size(); ++c) {
            if (!ground(a.args[c])) fail("negated atom !" + a.pred + " has unbound arguments");
            add_key(s, c, compile(a.args[c]));
        }
        steps.push_back(std::move(s));
    }

    void equality(const Atom& a, std::vector<Step>& steps) {
        const Term& l = a.lhs();
        const Term& r = a.rhs();
        bool lg = ground(l), rg = ground(r);
        Step s;
        if (lg && rg) {
            s.kind = Step::Kind::Compare;
            s.lhs = compile(l);
            s.rhs = compile(r);
            s.equal = a.kind == AtomKind::Eq;
        } else if (a.kind == AtomKind::Eq && !lg && rg && l.as_var()) {
            s.kind = Step::Kind::Assign;
            s.lhs = compile(r);
            s.target = slot_for(l.as_var()->name);
            bound_.insert(l.as_var()->name);
        } else if (a.kind == AtomKind::Eq && lg && !rg && r.as_var()) {
            s.kind = Step::Kind::Assign;
            s.lhs = compile(l);
            s.target = slot_for(r.as_var()->name);
            bound_.insert(r.as_var()->name);
        } else {
            fail("comparison with unbound operands");
        }
        steps.push_back(std::move(s));
        flush_deferred(steps);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw InternalError("cannot compile rule " + std::to_string(rule_.id) + " (" + rule_.head.pred + "): " + what);
    }

    std::size_t slots() const { return next_slot_; }
    bool pending() const { return !deferred_.empty(); }

private:
    const Program& program_;
    const FunctorRegistry& functors_;
    const Rule& rule_;
    std::map<std::string, std::uint32_t> slots_;
    std::set<std::string> bound_;
    std::vector<std::pair<std::uint32_t, Term>> deferred_;
    std::size_t next_slot_ = 0;
};

} // namespace

RulePlan RulePlan::compile(const Program& p, const FunctorRegistry& functors, const PlanSpec& spec) {
    if (spec.rule >= p.rules().size()) throw InternalError("plan for unknown rule " + std::to_string(spec.rule));
    const Rule& rule = p.rules()[spec.rule];
    RulePlan plan;
    plan.spec_ = spec;
    if (plan.spec_.order.empty()) plan.spec_.order = written_order(rule);
    const auto& order = plan.spec_.order;
    if (order.size() != rule.body.size()) throw InternalError("atom order does not cover the body");

    Compiler c(p, functors, rule);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Atom& a = rule.body.at(order[i]);
        bool first_explicit = spec.explicit_first && i == 0;
        if (first_explicit && a.kind != AtomKind::Pos) c.fail("explicit first atom must be positive");
        switch (a.kind) {
        case AtomKind::Pos: c.scan(a, spec.delta_atom == order[i], first_explicit, plan.steps_); break;
        case AtomKind::Neg: c.negation(a, plan.steps_); break;
        case AtomKind::Eq:
        case AtomKind::Neq: c.equality(a, plan.steps_); break;
        }
    }
    if (c.pending()) c.fail("functor argument never bound");
    for (const auto& t : rule.head.args) {
        if (!c.ground(t)) c.fail("head variable unbound");
        plan.head_.push_back(c.compile(t));
    }
    plan.head_pred_ = p.index_of(rule.head.pred);
    plan.slots_ = c.slots();
    return plan;
}

std::vector<Access> RulePlan::accesses() const {
    std::vector<Access> out;
    for (const auto& s : steps_) {
        if (s.kind == Step::Kind::Scan && !s.explicit_row) out.push_back({s.pred, s.source, s.mask});
        if (s.kind == Step::Kind::Neg) out.push_back({s.pred, Source::Full, s.mask});
    }
    return out;
}

ValueId eval_expr(const Expr& e, const std::vector<ValueId>& env, CallContext& ctx) {
    switch (e.kind) {
    case Expr::Kind::Slot: return env[e.slot];
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Call: {
        ValueId buf[8];
        std::vector<ValueId> heap;
        ValueId* args = buf;
        if (e.args.size() > 8) {
            heap.resize(e.args.size());
            args = heap.data();
        }
        for (std::size_t i = 0; i < e.args.size(); ++i) args[i] = eval_expr(e.args[i], env, ctx);
        return e.functor->fn(std::span<const ValueId>(args, e.args.size()), ctx);
    }
    }
    return {};
}

JoinCursor::JoinCursor(const RulePlan& plan, const Sources& sources, const ValueId* explicit_row, bool count_explicit)
    : plan_(plan),
      sources_(sources),
      explicit_row_(explicit_row),
      count_explicit_(count_explicit),
      env_(plan.slot_count()),
      cursors_(plan.steps().size()),
      fired_(plan.steps().size(), false) {
    if (plan.spec().explicit_first && explicit_row == nullptr)
        throw InternalError("explicit-first plan needs a row");
}

void JoinCursor::open(std::size_t level, CallContext& ctx) {
    const Step& s = plan_.steps()[level];
    fired_[level] = false;
    if (s.kind != Step::Kind::Scan || s.explicit_row) return;
    scratch_.clear();
    for (const auto& k : s.keys) scratch_.push_back(eval_expr(k, env_, ctx));
    const Relation* rel = s.source == Source::Delta ? sources_.delta[s.pred] : sources_.full[s.pred];
    cursors_[level] = rel->query(s.mask, scratch_);
}

bool JoinCursor::accept_row(const Step& s, const ValueId* row) {
    for (auto [c, slot] : s.binds) env_[slot] = row[c];
    for (auto [c, slot] : s.checks)
        if (row[c] != env_[slot]) return false;
    return true;
}

bool JoinCursor::step_next(std::size_t level, CallContext& ctx, std::uint64_t& work) {
    const Step& s = plan_.steps()[level];
    switch (s.kind) {
    case Step::Kind::Scan: {
        if (s.explicit_row) {
            if (fired_[level]) return false;
            fired_[level] = true;
            if (count_explicit_) ++work;
            for (std::size_t i = 0; i < s.keys.size(); ++i)
                if (explicit_row_[s.key_cols[i]] != eval_expr(s.keys[i], env_, ctx)) return false;
            return accept_row(s, explicit_row_);
        }
        while (const ValueId* row = cursors_[level].next()) {
            ++work;
            if (accept_row(s, row)) return true;
        }
        return false;
    }
    case Step::Kind::Neg: {
        if (fired_[level]) return false;
        fired_[level] = true;
        scratch_.clear();
        for (const auto& k : s.keys) scratch_.push_back(eval_expr(k, env_, ctx));
        return !sources_.full[s.pred]->contains(scratch_);
    }
    case Step::Kind::Assign:
        if (fired_[level]) return false;
        fired_[level] = true;
        env_[s.target] = eval_expr(s.lhs, env_, ctx);
        return true;
    case Step::Kind::Compare: {
        if (fired_[level]) return false;
        fired_[level] = true;
        bool same = eval_expr(s.lhs, env_, ctx) == eval_expr(s.rhs, env_, ctx);
        return same == s.equal;
    }
    }
    return false;
}

bool JoinCursor::next(std::vector<ValueId>& head, CallContext& ctx, std::uint64_t& work) {
    if (done_) return false;
    const std::size_t n = plan_.steps().size();
    std::ptrdiff_t level;
    if (!started_) {
        started_ = true;
        if (n == 0) {
            done_ = true;
            head.clear();
            for (const auto& e : plan_.head()) head.push_back(eval_expr(e, env_, ctx));
            return true;
        }
        open(0, ctx);
        level = 0;
    } else {
        level = static_cast<std::ptrdiff_t>(n) - 1;
    }
    while (level >= 0) {
        if (!step_next(static_cast<std::size_t>(level), ctx, work)) {
            --level;
            continue;
        }
        if (static_cast<std::size_t>(level) + 1 == n) {
            head.clear();
            for (const auto& e : plan_.head()) head.push_back(eval_expr(e, env_, ctx));
            return true;
        }
        ++level;
        open(static_cast<std::size_t>(level), ctx);
    }
    done_ = true;
    return false;
}

std::vector<std::vector<Mask>> plan_indexes(const Program& p, const std::vector<const RulePlan*>& plans) {
    std::vector<std::set<Mask>> sets(p.decls().size());
    for (const RulePlan* plan : plans)
        for (const Access& a : plan->accesses())
            if (a.mask != 0) sets[a.pred].insert(a.mask);
    std::vector<std::vector<Mask>> out;
    for (auto& s : sets) out.emplace_back(s.begin(), s.end());
    return out;
}

} // namespace eagerlog
