#include "eagerlog/database.hpp"

#include <algorithm>

namespace eagerlog {

Database::Database(const Program& p, const std::vector<std::vector<Mask>>& masks) {
    for (std::size_t i = 0; i < p.decls().size(); ++i) {
        const PredDecl& d = p.decls()[i];
        relations_.push_back(std::make_unique<Relation>(d.name, d.arity, i < masks.size() ? masks[i] : std::vector<Mask>{}));
        pointers_.push_back(relations_.back().get());
        by_name_.emplace(d.name, i);
    }
}

const Relation* Database::find(const std::string& pred) const {
    auto it = by_name_.find(pred);
    return it == by_name_.end() ? nullptr : relations_[it->second].get();
}

Relation* Database::find(const std::string& pred) {
    auto it = by_name_.find(pred);
    return it == by_name_.end() ? nullptr : relations_[it->second].get();
}

std::vector<Tuple> Database::sorted(const std::string& pred, const Interner& interner) const {
    const Relation* r = find(pred);
    if (r == nullptr) throw UserError("unknown relation " + pred);
    std::vector<Tuple> rows;
    auto cur = r->scan();
    while (const ValueId* row = cur.next()) rows.emplace_back(row, row + r->arity());
    std::sort(rows.begin(), rows.end(), [&](const Tuple& a, const Tuple& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto c = interner.compare(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return false;
    });
    return rows;
}

std::string Database::dump(const std::string& pred, const Interner& interner) const {
    std::string out;
    for (const Tuple& t : sorted(pred, interner)) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) out += '\t';
            out += interner.render(t[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace eagerlog
