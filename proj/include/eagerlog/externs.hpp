#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eagerlog/value.hpp"

namespace eagerlog {

class OracleSession;

/// What a functor may touch while running: the shared interner and the
/// calling worker's private oracle session (null when none is attached).
struct CallContext {
    Interner& interner;
    OracleSession* session = nullptr;
};

using FunctorFn = std::function<ValueId(std::span<const ValueId>, CallContext&)>;

struct Functor {
    std::string name;
    std::size_t arity = 0;
    FunctorFn fn;
};

/// Name -> functor table. Written during setup, read-only during evaluation.
class FunctorRegistry {
public:
    /// Throws UserError on a duplicate name.
    void add(Functor f);
    const Functor* find(const std::string& name) const;
    std::map<std::string, std::size_t> arities() const;

    /// Invokes `name`, checking arity first.
    ValueId call(const std::string& name, std::span<const ValueId> args, CallContext& ctx) const;

private:
    std::unordered_map<std::string, Functor> table_;
};

/// Functors every program gets: the formula constructors `true/0`,
/// `lit/2`, `conj/2`, the oracle call `is_sat/1`, and integer `add/2`,
/// `sub/2`.
void register_builtins(FunctorRegistry& registry);

// ---------------------------------------------------------------------------
// Formulas: Ctor "true" [] | Ctor "lit" [IntLit var, IntLit sign] | Ctor "conj" [f, g]

ValueId make_true(Interner& in);
ValueId make_lit(Interner& in, std::int64_t var, bool positive);
ValueId make_conj(Interner& in, ValueId a, ValueId b);

/// Distinct literal ids of `formula`, sorted by id. Throws EvalError when the
/// value is not a well-formed formula.
std::vector<ValueId> flatten(const Interner& in, ValueId formula);

struct Literal {
    std::int64_t var = 0;
    bool positive = true;
};
Literal decode_literal(const Interner& in, ValueId lit);

/// Mock theory: satisfiable iff no variable occurs with both signs.
bool mock_satisfiable(const Interner& in, std::span<const ValueId> literals);

// ---------------------------------------------------------------------------
// Oracle sessions

enum class OracleBackend { Mock, SmtLib };
/// replace: cache := literals of the latest call. union: cache only grows.
enum class CachePolicy { Replace, Union };
enum class SatResult { Sat, Unsat, Unknown };

struct OracleConfig {
    OracleBackend backend = OracleBackend::Mock;
    CachePolicy policy = CachePolicy::Replace;
    /// Artificial solver latency per cache miss.
    std::uint32_t latency_us = 0;
    std::string solver_path = "z3";
    std::vector<std::string> solver_args = {"-in"};
    std::chrono::milliseconds solver_timeout{10000};
    /// Keep every formula passed to is_sat, in call order.
    bool record_calls = false;
};

class SmtLibProcess;

/// A worker's private, stateful view of the satisfiability oracle.
class OracleSession {
public:
    OracleSession(std::size_t worker, OracleConfig config, Interner& interner);
    ~OracleSession();
    OracleSession(const OracleSession&) = delete;
    OracleSession& operator=(const OracleSession&) = delete;

    /// Dispatches on the configured backend. Unknown from the SMT-LIB backend
    /// raises EvalError.
    bool is_sat(ValueId formula);

    /// Talks to the external solver directly (regardless of backend).
    /// Crashes and timeouts yield Unknown and set last_diagnostic().
    SatResult check_sat_smtlib(ValueId formula);

    std::size_t worker() const { return worker_; }
    std::uint64_t calls() const { return calls_; }
    std::uint64_t cache_misses() const { return misses_; }
    const std::vector<ValueId>& call_log() const { return log_; }
    const std::vector<std::uint64_t>& misses_per_call() const { return per_call_misses_; }
    const std::string& last_diagnostic() const { return diagnostic_; }
    const OracleConfig& config() const { return config_; }

private:
    /// Charges one call against the conjunct cache and returns its misses.
    std::uint64_t account(ValueId formula, const std::vector<ValueId>& literals);

    std::size_t worker_;
    OracleConfig config_;
    Interner& interner_;
    std::set<ValueId> cache_;
    std::uint64_t calls_ = 0;
    std::uint64_t misses_ = 0;
    std::vector<ValueId> log_;
    std::vector<std::uint64_t> per_call_misses_;
    std::string diagnostic_;
    std::unique_ptr<SmtLibProcess> solver_;
};

} // namespace eagerlog
