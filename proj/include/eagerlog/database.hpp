#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "eagerlog/ir.hpp"
#include "eagerlog/parser.hpp"
#include "eagerlog/relation.hpp"

namespace eagerlog {

/// One full relation per declared predicate, indexed by declaration order.
class Database {
public:
    Database(const Program& p, const std::vector<std::vector<Mask>>& masks);

    std::size_t size() const { return relations_.size(); }
    Relation& relation(std::size_t pred) { return *relations_.at(pred); }
    const Relation& relation(std::size_t pred) const { return *relations_.at(pred); }
    /// Null when `pred` is not declared.
    const Relation* find(const std::string& pred) const;
    Relation* find(const std::string& pred);
    const std::vector<Relation*>& pointers() const { return pointers_; }

    /// Rows of `pred` in structural order, independent of insertion order.
    std::vector<Tuple> sorted(const std::string& pred, const Interner& interner) const;
    /// Tab-separated rendering of sorted(), one row per line.
    std::string dump(const std::string& pred, const Interner& interner) const;

private:
    std::vector<std::unique_ptr<Relation>> relations_;
    std::vector<Relation*> pointers_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

} // namespace eagerlog
