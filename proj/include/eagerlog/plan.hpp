#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eagerlog/externs.hpp"
#include "eagerlog/ir.hpp"
#include "eagerlog/relation.hpp"

namespace eagerlog {

/// Which copy of a predicate a body atom reads.
enum class Source { Full, Delta };

struct PlanSpec {
    RuleId rule = 0;
    /// Body positions in evaluation order; empty means as written.
    std::vector<std::size_t> order;
    /// Body position read from the delta relation, if any.
    std::optional<std::size_t> delta_atom;
    /// The first evaluated atom iterates a caller-supplied row instead of a
    /// relation (the singleton delta of a specialized rule, or one outer
    /// tuple handed to a worker).
    bool explicit_first = false;
};

/// Body in written order, or with position `k` moved to the front.
std::vector<std::size_t> written_order(const Rule& r);
std::vector<std::size_t> rotate_to_front(const Rule& r, std::size_t k);

/// A column of a compiled term: a variable slot, a constant, or a functor
/// applied to compiled arguments.
struct Expr {
    enum class Kind { Slot, Const, Call };
    Kind kind = Kind::Const;
    std::uint32_t slot = 0;
    ValueId value;
    const Functor* functor = nullptr;
    std::vector<Expr> args;
};

struct Step {
    enum class Kind { Scan, Neg, Assign, Compare };
    Kind kind = Kind::Scan;

    // Scan / Neg
    std::size_t pred = 0;  // declaration index
    Source source = Source::Full;
    bool explicit_row = false;
    Mask mask = 0;
    std::vector<Expr> keys;  // bound columns, ascending (Neg: every column)
    std::vector<std::size_t> key_cols;
    std::vector<std::pair<std::size_t, std::uint32_t>> binds;   // column -> slot
    std::vector<std::pair<std::size_t, std::uint32_t>> checks;  // column == slot

    // Assign: slot := lhs.  Compare: lhs (==|!=) rhs.
    std::uint32_t target = 0;
    Expr lhs, rhs;
    bool equal = true;
};

/// One index access a plan performs, for index planning.
struct Access {
    std::size_t pred;
    Source source;
    Mask mask;
};

/// A rule compiled for one evaluation order.
class RulePlan {
public:
    /// Throws InternalError when the order leaves a negation, comparison or
    /// head variable unbound.
    static RulePlan compile(const Program& p, const FunctorRegistry& functors, const PlanSpec& spec);

    const PlanSpec& spec() const { return spec_; }
    const std::vector<Step>& steps() const { return steps_; }
    const std::vector<Expr>& head() const { return head_; }
    std::size_t head_pred() const { return head_pred_; }
    std::size_t slot_count() const { return slots_; }
    /// Index accesses, excluding the explicit first row.
    std::vector<Access> accesses() const;

private:
    PlanSpec spec_;
    std::vector<Step> steps_;
    std::vector<Expr> head_;
    std::size_t head_pred_ = 0;
    std::size_t slots_ = 0;
};

/// Relations a cursor reads, indexed by predicate declaration index.
struct Sources {
    std::span<Relation* const> full;
    std::span<Relation* const> delta;
};

/// Resumable nested-loop join over a RulePlan. Each next() call yields one
/// ground head tuple (duplicates included) and adds to `work` one unit per
/// tuple a scan produced.
class JoinCursor {
public:
    /// `explicit_row` feeds the first step when the plan was compiled with
    /// explicit_first. When `count_explicit` is false the caller already
    /// counted that row.
    JoinCursor(const RulePlan& plan, const Sources& sources, const ValueId* explicit_row = nullptr,
               bool count_explicit = true);

    bool next(std::vector<ValueId>& head, CallContext& ctx, std::uint64_t& work);

private:
    void open(std::size_t level, CallContext& ctx);
    bool step_next(std::size_t level, CallContext& ctx, std::uint64_t& work);
    bool accept_row(const Step& s, const ValueId* row);

    const RulePlan& plan_;
    Sources sources_;
    const ValueId* explicit_row_;
    bool count_explicit_;
    std::vector<ValueId> env_;
    std::vector<Relation::Cursor> cursors_;
    std::vector<bool> fired_;
    std::vector<ValueId> scratch_;
    bool started_ = false;
    bool done_ = false;
};

ValueId eval_expr(const Expr& e, const std::vector<ValueId>& env, CallContext& ctx);

/// For every predicate (by declaration index), the masks needed by `plans`.
std::vector<std::vector<Mask>> plan_indexes(const Program& p, const std::vector<const RulePlan*>& plans);

} // namespace eagerlog
