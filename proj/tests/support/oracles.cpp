#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace eagerlog::support {

std::set<Edge> floyd_warshall(int n, const std::vector<Edge>& edges) {
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (auto [a, b] : edges) r[a][b] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (r[i][k])
                for (int j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    std::set<Edge> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (r[i][j]) out.insert({i, j});
    return out;
}

bool brute_force_sat(const std::vector<Lit>& literals, int nvars) {
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << nvars); ++a) {
        bool ok = true;
        for (auto [v, pos] : literals)
            if (((a >> v) & 1) != static_cast<std::uint64_t>(pos)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

std::set<Lit> formula_literals(const Interner& in, ValueId f) {
    std::set<Lit> out;
    std::function<void(ValueId)> walk = [&](ValueId id) {
        const Ctor& c = std::get<Ctor>(in.resolve(id));
        if (c.symbol == "lit") {
            out.insert({std::get<IntLit>(in.resolve(c.args[0])).value, std::get<IntLit>(in.resolve(c.args[1])).value == 1});
        } else if (c.symbol == "conj") {
            walk(c.args[0]);
            walk(c.args[1]);
        }
    };
    walk(f);
    return out;
}

std::vector<std::uint64_t> replay_cache(const std::vector<std::set<Lit>>& calls, CachePolicy policy) {
    std::set<Lit> cache;
    std::vector<std::uint64_t> out;
    for (const auto& call : calls) {
        std::uint64_t miss = 0;
        for (const auto& l : call) miss += cache.count(l) ? 0 : 1;
        out.push_back(miss);
        if (policy == CachePolicy::Replace) cache = call;
        else cache.insert(call.begin(), call.end());
    }
    return out;
}

bool brute_force_stratifiable(const Program& p) {
    const std::size_t n = p.decls().size();
    struct Dep {
        std::size_t head, body;
        bool neg;
    };
    std::vector<Dep> deps;
    for (const auto& r : p.rules())
        for (const auto& a : r.body)
            if (a.is_predicate()) deps.push_back({p.index_of(r.head.pred), p.index_of(a.pred), a.kind == AtomKind::Neg});
    std::vector<int> level(n, -1);
    std::function<bool(std::size_t)> go = [&](std::size_t i) {
        if (i == n) return true;
        for (int l = 0; l < static_cast<int>(n); ++l) {
            level[i] = l;
            bool ok = true;
            for (const auto& d : deps) {
                if (level[d.head] < 0 || level[d.body] < 0) continue;
                if (d.neg ? level[d.head] <= level[d.body] : level[d.head] < level[d.body]) {
                    ok = false;
                    break;
                }
            }
            if (ok && go(i + 1)) return true;
        }
        level[i] = -1;
        return false;
    };
    return go(0);
}

namespace {

bool term_bound(const Term& t, const std::set<std::string>& bound) {
    if (const Var* v = t.as_var()) return bound.count(v->name) > 0;
    if (const FunctorCall* c = t.as_call()) {
        for (const auto& a : c->args)
            if (!term_bound(a, bound)) return false;
    }
    return true;
}

} // namespace

bool reference_safe(const Rule& r) {
    std::set<std::string> bound;
    for (const auto& a : r.body) {
        switch (a.kind) {
        case AtomKind::Pos: {
            // Functor arguments must use variables bound before this atom.
            for (const auto& t : a.args)
                if (t.as_call() && !term_bound(t, bound)) return false;
            for (const auto& t : a.args)
                if (const Var* v = t.as_var()) bound.insert(v->name);
            break;
        }
        case AtomKind::Neg:
        case AtomKind::Neq:
            for (const auto& t : a.args)
                if (!term_bound(t, bound)) return false;
            break;
        case AtomKind::Eq: {
            const Var* lv = a.lhs().as_var();
            if (lv && !bound.count(lv->name)) {
                if (!term_bound(a.rhs(), bound)) return false;
                bound.insert(lv->name);
            } else if (!term_bound(a.lhs(), bound) || !term_bound(a.rhs(), bound)) {
                return false;
            }
            break;
        }
        }
    }
    for (const auto& t : r.head.args)
        if (!term_bound(t, bound)) return false;
    return true;
}

void register_test_functors(FunctorRegistry& r) {
    r.add({"inc8", 1, [](std::span<const ValueId> a, CallContext& ctx) {
               const std::int64_t* x = ctx.interner.as_int(a[0]);
               if (x == nullptr) throw EvalError("@inc8 expects an integer");
               return ctx.interner.intern_int((*x + 1) % 8);
           }});
}

RandomProgram random_program(std::mt19937_64& rng) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    const int n = uni(2, 4);
    std::vector<int> arity(n), level(n);
    std::vector<bool> edb(n);
    for (int i = 0; i < n; ++i) {
        arity[i] = uni(1, 2);
        edb[i] = i == 0 || (i < n - 1 && chance(0.3));
        level[i] = edb[i] ? 0 : uni(0, 2);
    }
    std::vector<int> idb;
    for (int i = 0; i < n; ++i)
        if (!edb[i]) idb.push_back(i);

    RandomProgram out;
    std::ostringstream text;
    for (int i = 0; i < n; ++i)
        text << ".decl p" << i << "(" << arity[i] << ")" << (edb[i] ? " input" : " output") << "\n";

    int budget = uni(0, 10) == 0 ? uni(0, 3) : uni(8, 30);
    for (int i = 0; i < n && budget > 0; ++i) {
        if (!edb[i]) continue;
        auto& rows = out.facts["p" + std::to_string(i)];
        int k = i == n - 1 || !edb[i + 1] ? budget : uni(budget / 2, budget);
        budget -= k;
        for (int j = 0; j < k; ++j) {
            std::vector<std::int64_t> row;
            for (int c = 0; c < arity[i]; ++c) row.push_back(uni(0, 7));
            rows.push_back(row);
        }
    }

    const char* vars[] = {"X", "Y", "Z", "W"};
    const int rules = uni(1, 6);
    for (int r = 0; r < rules; ++r) {
        // The first rules give every derived predicate a chance to read p0.
        bool base = r < static_cast<int>(idb.size());
        int h = base ? idb[r] : idb[uni(0, static_cast<int>(idb.size()) - 1)];
        std::vector<std::string> body;
        std::vector<std::string> bound;
        auto arg = [&](bool bound_only) -> std::string {
            if (chance(0.2) || (bound_only && bound.empty())) return std::to_string(uni(0, 7));
            if (bound_only) return bound[uni(0, static_cast<int>(bound.size()) - 1)];
            return vars[uni(0, 3)];
        };
        int npos = uni(1, 3);
        for (int k = 0; k < npos; ++k) {
            std::vector<int> cands;
            for (int i = 0; i < n; ++i)
                if (level[i] <= level[h]) cands.push_back(i);
            int b = (k == 0 && (base || chance(0.4))) ? 0 : cands[uni(0, static_cast<int>(cands.size()) - 1)];
            std::string atom = "p" + std::to_string(b) + "(";
            std::vector<std::string> args;
            for (int c = 0; c < arity[b]; ++c) args.push_back(arg(false));
            for (int c = 0; c < arity[b]; ++c) atom += (c ? ", " : "") + args[c];
            body.push_back(atom + ")");
            for (auto& a : args)
                if (!a.empty() && std::isupper(static_cast<unsigned char>(a[0])) &&
                    std::find(bound.begin(), bound.end(), a) == bound.end())
                    bound.push_back(a);
        }
        if (chance(0.25) && !bound.empty()) {
            std::string v = "V" + std::to_string(r);
            body.push_back(v + " = @inc8(" + arg(true) + ")");
            bound.push_back(v);
        }
        if (chance(0.3)) {
            std::vector<int> cands;
            for (int i = 0; i < n; ++i)
                if (level[i] < level[h]) cands.push_back(i);
            if (!cands.empty()) {
                int b = cands[uni(0, static_cast<int>(cands.size()) - 1)];
                std::string atom = "!p" + std::to_string(b) + "(";
                for (int c = 0; c < arity[b]; ++c) atom += (c ? ", " : "") + arg(true);
                body.push_back(atom + ")");
            }
        }
        if (chance(0.2) && !bound.empty()) body.push_back(arg(true) + (chance(0.5) ? " != " : " = ") + arg(true));

        text << "p" << h << "(";
        for (int c = 0; c < arity[h]; ++c) text << (c ? ", " : "") << arg(true);
        text << ") :- ";
        for (std::size_t k = 0; k < body.size(); ++k) text << (k ? ", " : "") << body[k];
        text << ".\n";
    }
    out.text = text.str();
    return out;
}

std::string random_rule_program(std::mt19937_64& rng, std::size_t max_body) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const char* vars[] = {"X", "Y", "Z"};
    auto term = [&](int depth) {
        std::function<std::string(int)> t = [&](int d) -> std::string {
            int k = uni(0, d > 0 ? 5 : 4);
            if (k <= 2) return vars[k];
            if (k == 3) return std::to_string(uni(0, 3));
            if (k == 4) return vars[uni(0, 2)];
            return "@add(" + t(d - 1) + ", " + t(d - 1) + ")";
        };
        return t(depth);
    };
    std::ostringstream s;
    s << ".decl q(1)\n.decl r(2)\n.decl s(2)\n.decl p(2)\n";
    s << "p(" << term(1) << ", " << term(1) << ")";
    std::size_t nb = static_cast<std::size_t>(uni(0, static_cast<int>(max_body)));
    for (std::size_t i = 0; i < nb; ++i) {
        s << (i ? ", " : " :- ");
        switch (uni(0, 5)) {
        case 0: s << "q(" << term(1) << ")"; break;
        case 1: s << "r(" << term(1) << ", " << term(1) << ")"; break;
        case 2: s << "!s(" << term(1) << ", " << term(0) << ")"; break;
        case 3: s << term(1) << " = " << term(1); break;
        case 4: s << term(0) << " != " << term(1); break;
        default: s << "s(" << term(0) << ", " << term(0) << ")"; break;
        }
    }
    s << ".\n";
    return s.str();
}

} // namespace eagerlog::support
