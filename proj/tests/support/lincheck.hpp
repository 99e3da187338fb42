#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eagerlog/relation.hpp"

namespace eagerlog::support {

/// One completed operation on a relation, with logical invocation and
/// response times from a shared clock.
struct HistoryOp {
    enum class Kind { Add, Contains, Query };
    Kind kind = Kind::Add;
    std::vector<ValueId> tuple;  // Add / Contains
    Mask mask = 0;               // Query
    std::vector<ValueId> key;    // Query
    bool result = false;         // Add / Contains
    std::vector<std::vector<ValueId>> rows;  // Query, sorted
    std::uint64_t call = 0;
    std::uint64_t ret = 0;
};

/// Wing–Gong search with memoization on the set of linearized operations,
/// against a sequential set. At most 64 operations.
bool linearizable(const std::vector<HistoryOp>& history, std::size_t arity);

/// Runs `workers` threads issuing `ops_per_worker` random operations on a
/// fresh binary relation indexed on column 0, values drawn from 0..domain-1,
/// and returns the recorded history.
std::vector<HistoryOp> record_history(std::uint64_t seed, std::size_t workers, std::size_t ops_per_worker,
                                      std::uint32_t domain, Interner& interner);

} // namespace eagerlog::support
