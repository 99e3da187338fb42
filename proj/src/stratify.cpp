#include "eagerlog/stratify.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace eagerlog {

namespace {

struct Edge {
    std::size_t to;
    bool negated;
};

// Iterative Tarjan; returns the component id of every node.
std::vector<std::size_t> tarjan(const std::vector<std::vector<Edge>>& g, std::size_t& count) {
    const std::size_t n = g.size();
    constexpr std::size_t kUnvisited = SIZE_MAX;
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    count = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < g[f.node].size()) {
                std::size_t w = g[f.node][f.edge++].to;
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            std::size_t v = f.node;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
            if (low[v] == index[v]) {
                for (;;) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                    if (w == v) break;
                }
                ++count;
            }
        }
    }
    return comp;
}

} // namespace

std::vector<Stratum> stratify(const Program& p) {
    const auto& decls = p.decls();
    const std::size_t n = decls.size();

    // Edge body-pred -> head-pred: the head depends on the body.
    std::vector<std::vector<Edge>> g(n);
    std::vector<bool> has_rules(n, false);
    for (const auto& r : p.rules()) {
        std::size_t h = p.index_of(r.head.pred);
        has_rules[h] = true;
        for (const auto& a : r.body)
            if (a.is_predicate()) g[p.index_of(a.pred)].push_back({h, a.kind == AtomKind::Neg});
    }

    std::size_t ncomp = 0;
    std::vector<std::size_t> comp = tarjan(g, ncomp);

    std::vector<std::vector<std::size_t>> members(ncomp);
    for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

    std::vector<bool> cyclic(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& e : g[v]) {
            if (comp[e.to] != comp[v]) continue;
            cyclic[v] = cyclic[e.to] = true;
            if (e.negated) {
                std::string names;
                for (std::size_t m : members[comp[v]]) {
                    if (!names.empty()) names += ", ";
                    names += decls[m].name;
                }
                throw StratificationError("negation occurs within recursion: " + decls[e.to].name +
                                          " depends negatively on " + decls[v].name + " in cycle {" + names + "}");
            }
        }
    }

    // Kahn over the condensation; ready components ordered by the lowest
    // declaration index among their members.
    std::vector<std::size_t> min_decl(ncomp, SIZE_MAX);
    for (std::size_t v = 0; v < n; ++v) min_decl[comp[v]] = std::min(min_decl[comp[v]], v);
    std::vector<std::set<std::size_t>> succ(ncomp);
    std::vector<std::size_t> indeg(ncomp, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& e : g[v])
            if (comp[e.to] != comp[v] && succ[comp[v]].insert(comp[e.to]).second) ++indeg[comp[e.to]];

    using Key = std::pair<std::size_t, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (std::size_t c = 0; c < ncomp; ++c)
        if (indeg[c] == 0) ready.push({min_decl[c], c});

    std::vector<std::size_t> stratum_of(n, SIZE_MAX);
    std::vector<Stratum> out;
    while (!ready.empty()) {
        std::size_t c = ready.top().second;
        ready.pop();
        for (std::size_t s : succ[c])
            if (--indeg[s] == 0) ready.push({min_decl[s], s});

        bool defined = std::any_of(members[c].begin(), members[c].end(), [&](std::size_t v) { return has_rules[v]; });
        if (!defined) continue;
        Stratum s;
        s.index = out.size();
        for (std::size_t v : members[c]) {
            s.preds.push_back(decls[v].name);
            stratum_of[v] = s.index;
            if (cyclic[v]) s.recursive_preds.insert(decls[v].name);
        }
        out.push_back(std::move(s));
    }
    for (const auto& r : p.rules()) out[stratum_of[p.index_of(r.head.pred)]].rules.push_back(r.id);
    return out;
}

} // namespace eagerlog
