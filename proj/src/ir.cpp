#include "eagerlog/ir.hpp"

#include <algorithm>

namespace eagerlog {

std::string SourceSpan::str() const {
    std::string out = file.empty() ? "<input>" : file;
    out += ':' + std::to_string(line) + ':' + std::to_string(column);
    return out;
}

ParseError::ParseError(SourceSpan span, const std::string& message)
    : UserError(span.str() + ": " + message), span_(std::move(span)), message_(message) {}

bool operator==(const FunctorCall& a, const FunctorCall& b) { return a.functor == b.functor && a.args == b.args; }

void Program::declare(PredDecl decl) {
    by_name_.emplace(decl.name, decls_.size());
    decls_.push_back(std::move(decl));
}

void Program::add_rule(Rule rule) {
    rule.id = rules_.size();
    rules_.push_back(std::move(rule));
}

const PredDecl* Program::find(const std::string& pred) const {
    auto it = by_name_.find(pred);
    return it == by_name_.end() ? nullptr : &decls_[it->second];
}

std::size_t Program::index_of(const std::string& pred) const {
    auto it = by_name_.find(pred);
    if (it == by_name_.end()) throw InternalError("undeclared predicate " + pred);
    return it->second;
}

bool Substitution::bind(const std::string& var, ValueId value) { return map_.emplace(var, value).second; }

std::optional<ValueId> Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

Term apply(const Substitution& s, const Term& t) {
    if (const auto* v = t.as_var()) {
        if (auto bound = s.lookup(v->name)) return Term::constant(*bound);
        return t;
    }
    if (const auto* c = t.as_call()) {
        std::vector<Term> args;
        args.reserve(c->args.size());
        for (const auto& a : c->args) args.push_back(apply(s, a));
        return Term::call(c->functor, std::move(args));
    }
    return t;
}

Atom apply(const Substitution& s, const Atom& a) {
    Atom out = a;
    for (auto& t : out.args) t = apply(s, t);
    return out;
}

Rule apply(const Substitution& s, const Rule& r) {
    Rule out = r;
    out.head = apply(s, r.head);
    for (auto& a : out.body) a = apply(s, a);
    return out;
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
    if (const auto* v = t.as_var()) {
        if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    } else if (const auto* c = t.as_call()) {
        for (const auto& a : c->args) collect_vars(a, out);
    }
}

std::string to_string(const Term& t, const Interner& interner) {
    if (const auto* v = t.as_var()) return v->name;
    if (const auto* c = t.as_const()) return interner.render(c->value);
    const auto& call = *t.as_call();
    std::string out = "@" + call.functor + "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) {
        if (i != 0) out += ", ";
        out += to_string(call.args[i], interner);
    }
    return out + ")";
}

std::string to_string(const Atom& a, const Interner& interner) {
    auto args = [&] {
        std::string out = "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i != 0) out += ", ";
            out += to_string(a.args[i], interner);
        }
        return out + ")";
    };
    switch (a.kind) {
    case AtomKind::Pos: return a.pred + args();
    case AtomKind::Neg: return "!" + a.pred + args();
    case AtomKind::Eq: return to_string(a.lhs(), interner) + " = " + to_string(a.rhs(), interner);
    case AtomKind::Neq: return to_string(a.lhs(), interner) + " != " + to_string(a.rhs(), interner);
    }
    return {};
}

std::string to_string(const Rule& r, const Interner& interner) {
    std::string out = to_string(r.head, interner);
    if (!r.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i != 0) out += ", ";
            out += to_string(r.body[i], interner);
        }
    }
    return out + ".";
}

std::string to_string(const Program& p, const Interner& interner) {
    std::string out;
    for (const auto& d : p.decls()) {
        out += ".decl " + d.name + "(" + std::to_string(d.arity) + ")";
        if (d.kind == PredKind::Input) out += " input";
        if (d.kind == PredKind::Output) out += " output";
        out += '\n';
    }
    for (const auto& r : p.rules()) out += to_string(r, interner) + '\n';
    return out;
}

} // namespace eagerlog
