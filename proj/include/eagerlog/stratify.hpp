#pragma once

#include <set>
#include <string>
#include <vector>

#include "eagerlog/ir.hpp"

namespace eagerlog {

struct Stratum {
    std::size_t index = 0;
    /// Predicates defined in this stratum, in declaration order.
    std::vector<std::string> preds;
    /// Ids of rules whose head predicate is in `preds`, ascending.
    std::vector<RuleId> rules;
    /// Predicates of this stratum that lie on a dependency cycle.
    std::set<std::string> recursive_preds;

    bool is_recursive(const std::string& pred) const { return recursive_preds.count(pred) != 0; }
};

/// Orders the SCCs of the predicate dependency graph. Predicates without
/// rules (inputs and never-defined internals) are extensional and get no
/// stratum. Throws StratificationError when a negated dependency lies
/// inside an SCC; the message names the predicates on the cycle.
std::vector<Stratum> stratify(const Program& p);

} // namespace eagerlog
