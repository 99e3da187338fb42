#include "eagerlog/validate.hpp"

#include <set>

namespace eagerlog {

namespace {

class RuleChecker {
public:
    RuleChecker(const Program& p, const std::map<std::string, std::size_t>& functors, const Rule& r,
                std::vector<Diagnostic>& out)
        : program_(p), functors_(functors), rule_(r), out_(out) {}

    void run() {
        if (rule_.head.kind != AtomKind::Pos) report(rule_.head, "rule head must be a positive atom");
        check_predicate(rule_.head);
        if (const auto* d = program_.find(rule_.head.pred); d != nullptr && d->kind == PredKind::Input)
            report(rule_.head, "input predicate " + d->name + " cannot appear in a rule head");

        for (const auto& atom : rule_.body) {
            switch (atom.kind) {
            case AtomKind::Pos:
                check_predicate(atom);
                for (const auto& t : atom.args) {
                    if (t.as_call() != nullptr) require_bound(t, atom, "functor argument");
                }
                for (const auto& t : atom.args)
                    if (const auto* v = t.as_var()) bound_.insert(v->name);
                break;
            case AtomKind::Neg:
                check_predicate(atom);
                for (const auto& t : atom.args) require_bound(t, atom, "negated atom");
                break;
            case AtomKind::Eq:
                check_functors(atom.lhs(), atom);
                check_functors(atom.rhs(), atom);
                if (const auto* v = atom.lhs().as_var(); v != nullptr && !bound_.contains(v->name) && ground(atom.rhs())) {
                    bound_.insert(v->name);
                } else {
                    require_bound(atom.lhs(), atom, "equality");
                    require_bound(atom.rhs(), atom, "equality");
                }
                break;
            case AtomKind::Neq:
                check_functors(atom.lhs(), atom);
                check_functors(atom.rhs(), atom);
                require_bound(atom.lhs(), atom, "disequality");
                require_bound(atom.rhs(), atom, "disequality");
                break;
            }
        }
        for (const auto& t : rule_.head.args) require_bound(t, rule_.head, "head");
    }

private:
    void report(const Atom& atom, std::string msg) {
        out_.push_back({rule_.id, std::move(msg), atom.span.line != 0 ? atom.span : rule_.span});
    }

    void check_predicate(const Atom& atom) {
        const auto* d = program_.find(atom.pred);
        if (d == nullptr) {
            report(atom, "undeclared predicate " + atom.pred);
        } else if (d->arity != atom.args.size()) {
            report(atom, "predicate " + atom.pred + " expects " + std::to_string(d->arity) + " arguments, got " +
                             std::to_string(atom.args.size()));
        }
        for (const auto& t : atom.args) check_functors(t, atom);
    }

    void check_functors(const Term& t, const Atom& atom) {
        const auto* c = t.as_call();
        if (c == nullptr) return;
        auto it = functors_.find(c->functor);
        if (it == functors_.end()) {
            report(atom, "unknown functor @" + c->functor);
        } else if (it->second != c->args.size()) {
            report(atom, "functor @" + c->functor + " expects " + std::to_string(it->second) + " arguments, got " +
                             std::to_string(c->args.size()));
        }
        for (const auto& a : c->args) check_functors(a, atom);
    }

    bool ground(const Term& t) const {
        std::vector<std::string> vars;
        collect_vars(t, vars);
        for (const auto& v : vars)
            if (!bound_.contains(v)) return false;
        return true;
    }

    void require_bound(const Term& t, const Atom& atom, const char* where) {
        std::vector<std::string> vars;
        collect_vars(t, vars);
        for (const auto& v : vars)
            if (!bound_.contains(v)) report(atom, std::string("unsafe: variable ") + v + " is unbound in " + where);
    }

    const Program& program_;
    const std::map<std::string, std::size_t>& functors_;
    const Rule& rule_;
    std::vector<Diagnostic>& out_;
    std::set<std::string> bound_;
};

} // namespace

std::vector<Diagnostic> validate(const Program& p, const std::map<std::string, std::size_t>& functor_arities) {
    std::vector<Diagnostic> out;
    for (const auto& r : p.rules()) RuleChecker(p, functor_arities, r, out).run();
    return out;
}

} // namespace eagerlog
