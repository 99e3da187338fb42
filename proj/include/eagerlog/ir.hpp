#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "eagerlog/error.hpp"
#include "eagerlog/value.hpp"

namespace eagerlog {

struct Term;

struct Var {
    std::string name;
    friend bool operator==(const Var&, const Var&) = default;
};

struct Const {
    ValueId value;
    friend bool operator==(const Const&, const Const&) = default;
};

struct FunctorCall {
    std::string functor;
    std::vector<Term> args;
    friend bool operator==(const FunctorCall&, const FunctorCall&);
};

struct Term {
    std::variant<Var, Const, FunctorCall> node;

    static Term var(std::string name) { return Term{Var{std::move(name)}}; }
    static Term constant(ValueId v) { return Term{Const{v}}; }
    static Term call(std::string f, std::vector<Term> args) { return Term{FunctorCall{std::move(f), std::move(args)}}; }

    const Var* as_var() const { return std::get_if<Var>(&node); }
    const Const* as_const() const { return std::get_if<Const>(&node); }
    const FunctorCall* as_call() const { return std::get_if<FunctorCall>(&node); }

    friend bool operator==(const Term&, const Term&) = default;
};

enum class AtomKind { Pos, Neg, Eq, Neq };

/// One body literal or a rule head. Pos/Neg carry `pred` and its arguments;
/// Eq/Neq leave `pred` empty and hold exactly two args (lhs, rhs).
struct Atom {
    AtomKind kind = AtomKind::Pos;
    std::string pred;
    std::vector<Term> args;
    SourceSpan span;

    static Atom pos(std::string pred, std::vector<Term> args) { return {AtomKind::Pos, std::move(pred), std::move(args), {}}; }
    static Atom neg(std::string pred, std::vector<Term> args) { return {AtomKind::Neg, std::move(pred), std::move(args), {}}; }
    static Atom eq(Term l, Term r) { return {AtomKind::Eq, {}, {std::move(l), std::move(r)}, {}}; }
    static Atom neq(Term l, Term r) { return {AtomKind::Neq, {}, {std::move(l), std::move(r)}, {}}; }

    bool is_predicate() const { return kind == AtomKind::Pos || kind == AtomKind::Neg; }
    const Term& lhs() const { return args.at(0); }
    const Term& rhs() const { return args.at(1); }

    friend bool operator==(const Atom& a, const Atom& b) { return a.kind == b.kind && a.pred == b.pred && a.args == b.args; }
};

using RuleId = std::size_t;

struct Rule {
    RuleId id = 0;
    Atom head;
    std::vector<Atom> body;
    SourceSpan span;
};

enum class PredKind { Input, Output, Internal };

struct PredDecl {
    std::string name;
    std::size_t arity = 0;
    PredKind kind = PredKind::Internal;
    SourceSpan span;
};

/// Declarations (in declaration order) plus rules (rule id == position).
class Program {
public:
    void declare(PredDecl decl);
    void add_rule(Rule rule);

    const std::vector<PredDecl>& decls() const { return decls_; }
    const std::vector<Rule>& rules() const { return rules_; }

    const PredDecl* find(const std::string& pred) const;
    /// Declaration index of `pred`; throws InternalError when undeclared.
    std::size_t index_of(const std::string& pred) const;
    bool declared(const std::string& pred) const { return find(pred) != nullptr; }

private:
    std::vector<PredDecl> decls_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::vector<Rule> rules_;
};

/// Partial map from variable name to value.
class Substitution {
public:
    /// Binds `var` unless it is already bound; returns false (and leaves the
    /// existing binding) when it was.
    bool bind(const std::string& var, ValueId value);
    std::optional<ValueId> lookup(const std::string& var) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const std::map<std::string, ValueId>& bindings() const { return map_; }

private:
    std::map<std::string, ValueId> map_;
};

Term apply(const Substitution& s, const Term& t);
Atom apply(const Substitution& s, const Atom& a);
Rule apply(const Substitution& s, const Rule& r);

/// Variables of `t` in first-occurrence order (duplicates removed).
void collect_vars(const Term& t, std::vector<std::string>& out);

std::string to_string(const Term& t, const Interner& interner);
std::string to_string(const Atom& a, const Interner& interner);
std::string to_string(const Rule& r, const Interner& interner);
/// Re-parseable text of the whole program.
std::string to_string(const Program& p, const Interner& interner);

} // namespace eagerlog
