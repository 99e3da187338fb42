#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace eagerlog {

struct TreeReachParams {
    std::size_t depth = 2;
    std::size_t branching = 2;
    double contradiction_rate = 0.0;
    std::uint64_t seed = 0;
};

/// Labeled-tree reachability: a complete `branching`-ary tree of `depth`
/// levels below the root, nodes numbered breadth-first from 0. Edge rows are
/// (parent, child, var, sign). Each edge carries the fresh literal
/// (child, 1) unless, with probability `contradiction_rate`, it carries the
/// complement of a literal already on the path to its parent, which makes
/// the child and its subtree unreachable. Edges out of the root are always
/// fresh.
struct TreeReachInstance {
    std::string program;
    std::vector<std::array<std::int64_t, 4>> edges;

    /// `edge.facts` content.
    std::string edge_facts() const;
};

/// Throws UserError unless depth >= 1, branching >= 1 and 0 <= rate <= 1.
TreeReachInstance generate_tree_reach(const TreeReachParams& params);

/// The guarded reachability program over `edge/4`, without facts.
const char* tree_reach_program();

} // namespace eagerlog
