#include "eagerlog/bench.hpp"

#include <random>

#include "eagerlog/error.hpp"

namespace eagerlog {

const char* tree_reach_program() {
    return ".decl edge(4) input\n"
           ".decl reach(2) output\n"
           "reach(0, @true()).\n"
           "reach(Y, F) :- reach(X, Phi), edge(X, Y, V, S), F = @conj(Phi, @lit(V, S)), @is_sat(F) = 1.\n";
}

std::string TreeReachInstance::edge_facts() const {
    std::string out;
    for (const auto& e : edges)
        out += std::to_string(e[0]) + '\t' + std::to_string(e[1]) + '\t' + std::to_string(e[2]) + '\t' +
               std::to_string(e[3]) + '\n';
    return out;
}

TreeReachInstance generate_tree_reach(const TreeReachParams& p) {
    if (p.depth < 1) throw UserError("tree depth must be at least 1");
    if (p.branching < 1) throw UserError("tree branching must be at least 1");
    if (!(p.contradiction_rate >= 0.0 && p.contradiction_rate <= 1.0))
        throw UserError("contradiction rate must lie in [0, 1]");
    std::size_t nodes = 1, level = 1;
    for (std::size_t d = 0; d < p.depth; ++d) {
        level *= p.branching;
        nodes += level;
        if (nodes > (std::size_t{1} << 26)) throw UserError("tree too large");
    }

    std::mt19937_64 rng(p.seed);
    std::bernoulli_distribution contradict(p.contradiction_rate);
    TreeReachInstance out;
    out.program = tree_reach_program();

    // Literals labelling the path root -> node, as (var, sign).
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> path(nodes);
    std::size_t next = 1;
    for (std::size_t parent = 0; next < nodes; ++parent) {
        for (std::size_t k = 0; k < p.branching && next < nodes; ++k, ++next) {
            auto child = static_cast<std::int64_t>(next);
            std::pair<std::int64_t, std::int64_t> label{child, 1};
            if (parent != 0 && contradict(rng)) {
                const auto& anc = path[parent];
                auto pick = std::uniform_int_distribution<std::size_t>(0, anc.size() - 1)(rng);
                label = {anc[pick].first, 1 - anc[pick].second};
            }
            path[next] = path[parent];
            path[next].push_back(label);
            out.edges.push_back({static_cast<std::int64_t>(parent), child, label.first, label.second});
        }
    }
    return out;
}

} // namespace eagerlog
