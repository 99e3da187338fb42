#include "eagerlog/externs.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "eagerlog/error.hpp"
#include "eagerlog/smtlib.hpp"

namespace eagerlog {

void FunctorRegistry::add(Functor f) {
    if (table_.contains(f.name)) throw UserError("functor @" + f.name + " is already registered");
    std::string name = f.name;
    table_.emplace(std::move(name), std::move(f));
}

const Functor* FunctorRegistry::find(const std::string& name) const {
    auto it = table_.find(name);
    return it == table_.end() ? nullptr : &it->second;
}

std::map<std::string, std::size_t> FunctorRegistry::arities() const {
    std::map<std::string, std::size_t> out;
    for (const auto& [name, f] : table_) out.emplace(name, f.arity);
    return out;
}

ValueId FunctorRegistry::call(const std::string& name, std::span<const ValueId> args, CallContext& ctx) const {
    const Functor* f = find(name);
    if (f == nullptr) throw EvalError("unknown functor @" + name);
    if (f->arity != args.size()) throw EvalError("functor @" + name + " called with wrong arity");
    return f->fn(args, ctx);
}

namespace {

std::int64_t int_arg(const Interner& in, ValueId v, const char* functor) {
    const std::int64_t* i = in.as_int(v);
    if (i == nullptr) throw EvalError(std::string("@") + functor + ": expected an integer, got " + in.render(v));
    return *i;
}

} // namespace

void register_builtins(FunctorRegistry& registry) {
    registry.add({"true", 0, [](std::span<const ValueId>, CallContext& ctx) { return make_true(ctx.interner); }});
    registry.add({"lit", 2, [](std::span<const ValueId> a, CallContext& ctx) {
                      std::int64_t sign = int_arg(ctx.interner, a[1], "lit");
                      if (sign != 0 && sign != 1) throw EvalError("@lit: sign must be 0 or 1");
                      return make_lit(ctx.interner, int_arg(ctx.interner, a[0], "lit"), sign == 1);
                  }});
    registry.add({"conj", 2, [](std::span<const ValueId> a, CallContext& ctx) {
                      return make_conj(ctx.interner, a[0], a[1]);
                  }});
    registry.add({"is_sat", 1, [](std::span<const ValueId> a, CallContext& ctx) {
                      if (ctx.session == nullptr) throw EvalError("@is_sat: no oracle session attached to this worker");
                      return ctx.interner.intern_int(ctx.session->is_sat(a[0]) ? 1 : 0);
                  }});
    registry.add({"add", 2, [](std::span<const ValueId> a, CallContext& ctx) {
                      return ctx.interner.intern_int(int_arg(ctx.interner, a[0], "add") + int_arg(ctx.interner, a[1], "add"));
                  }});
    registry.add({"sub", 2, [](std::span<const ValueId> a, CallContext& ctx) {
                      return ctx.interner.intern_int(int_arg(ctx.interner, a[0], "sub") - int_arg(ctx.interner, a[1], "sub"));
                  }});
}

ValueId make_true(Interner& in) { return in.intern_ctor("true", {}); }

ValueId make_lit(Interner& in, std::int64_t var, bool positive) {
    return in.intern_ctor("lit", {in.intern_int(var), in.intern_int(positive ? 1 : 0)});
}

ValueId make_conj(Interner& in, ValueId a, ValueId b) { return in.intern_ctor("conj", {a, b}); }

std::vector<ValueId> flatten(const Interner& in, ValueId formula) {
    std::vector<ValueId> out;
    std::vector<ValueId> stack{formula};
    while (!stack.empty()) {
        ValueId v = stack.back();
        stack.pop_back();
        const auto* c = std::get_if<Ctor>(&in.resolve(v));
        if (c == nullptr) throw EvalError("malformed formula: " + in.render(v));
        if (c->symbol == "true" && c->args.empty()) continue;
        if (c->symbol == "conj" && c->args.size() == 2) {
            stack.push_back(c->args[1]);
            stack.push_back(c->args[0]);
            continue;
        }
        if (c->symbol == "lit" && c->args.size() == 2) {
            decode_literal(in, v);
            out.push_back(v);
            continue;
        }
        throw EvalError("malformed formula: " + in.render(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Literal decode_literal(const Interner& in, ValueId lit) {
    const auto* c = std::get_if<Ctor>(&in.resolve(lit));
    if (c == nullptr || c->symbol != "lit" || c->args.size() != 2) throw EvalError("not a literal: " + in.render(lit));
    const std::int64_t* var = in.as_int(c->args[0]);
    const std::int64_t* sign = in.as_int(c->args[1]);
    if (var == nullptr || sign == nullptr || (*sign != 0 && *sign != 1))
        throw EvalError("malformed literal: " + in.render(lit));
    return {*var, *sign == 1};
}

bool mock_satisfiable(const Interner& in, std::span<const ValueId> literals) {
    std::unordered_map<std::int64_t, bool> polarity;
    for (ValueId l : literals) {
        Literal lit = decode_literal(in, l);
        auto [it, fresh] = polarity.emplace(lit.var, lit.positive);
        if (!fresh && it->second != lit.positive) return false;
    }
    return true;
}

OracleSession::OracleSession(std::size_t worker, OracleConfig config, Interner& interner)
    : worker_(worker), config_(std::move(config)), interner_(interner) {}

OracleSession::~OracleSession() = default;

std::uint64_t OracleSession::account(ValueId formula, const std::vector<ValueId>& literals) {
    std::uint64_t misses = 0;
    for (ValueId l : literals)
        if (!cache_.contains(l)) ++misses;
    ++calls_;
    misses_ += misses;
    if (config_.policy == CachePolicy::Replace) cache_.clear();
    cache_.insert(literals.begin(), literals.end());
    if (config_.record_calls) {
        log_.push_back(formula);
        per_call_misses_.push_back(misses);
    }
    return misses;
}

bool OracleSession::is_sat(ValueId formula) {
    if (config_.backend == OracleBackend::SmtLib) {
        switch (check_sat_smtlib(formula)) {
        case SatResult::Sat: return true;
        case SatResult::Unsat: return false;
        case SatResult::Unknown: throw EvalError("@is_sat: solver gave no answer: " + diagnostic_);
        }
    }
    std::vector<ValueId> lits = flatten(interner_, formula);
    std::uint64_t misses = account(formula, lits);
    if (config_.latency_us != 0 && misses != 0)
        std::this_thread::sleep_for(std::chrono::microseconds(config_.latency_us * misses));
    return mock_satisfiable(interner_, lits);
}

SatResult OracleSession::check_sat_smtlib(ValueId formula) {
    std::vector<ValueId> lits = flatten(interner_, formula);
    account(formula, lits);

    if (!solver_ || !solver_->alive()) {
        solver_ = std::make_unique<SmtLibProcess>(config_.solver_path, config_.solver_args, config_.solver_timeout);
        solver_->send("(set-logic QF_UF)");
    }
    SmtLibProcess& s = *solver_;

    // Asserted state must equal the query; start over when it has extras.
    bool subset = std::all_of(s.asserted.begin(), s.asserted.end(),
                              [&](ValueId a) { return std::binary_search(lits.begin(), lits.end(), a); });
    if (!subset) {
        s.send("(reset)");
        s.send("(set-logic QF_UF)");
        s.asserted.clear();
        s.declared.clear();
    }
    for (ValueId l : lits) {
        if (s.asserted.contains(l)) continue;
        Literal lit = decode_literal(interner_, l);
        if (s.declared.insert(lit.var).second) s.send("(declare-const " + smtlib_var_name(lit.var) + " Bool)");
        s.send("(assert " + smtlib_literal(lit) + ")");
        s.asserted.insert(l);
    }
    s.send("(check-sat)");
    auto answer = s.read_line();
    if (!answer) {
        diagnostic_ = "solver " + config_.solver_path + " crashed or timed out";
        solver_.reset();
        return SatResult::Unknown;
    }
    if (*answer == "sat") return SatResult::Sat;
    if (*answer == "unsat") return SatResult::Unsat;
    if (*answer == "unknown") {
        diagnostic_ = "solver answered unknown";
        return SatResult::Unknown;
    }
    solver_.reset();
    throw EvalError("solver protocol desync: unexpected reply '" + *answer + "'");
}

} // namespace eagerlog
