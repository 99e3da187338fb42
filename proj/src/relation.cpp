#include "eagerlog/relation.hpp"

#include <algorithm>
#include <bit>

#include "eagerlog/error.hpp"

namespace eagerlog {

namespace detail {

// Rows sharing one key, ascending. Only the relation's writer appends.
struct RelBucket {
    std::uint64_t hash = 0;
    std::uint32_t first = 0;
    std::atomic<std::uint32_t> count{0};
    std::atomic<std::uint32_t*> data{nullptr};
    std::uint32_t capacity = 2;
    std::uint32_t inline_rows[2] = {0, 0};
    // Current and retired out-of-line arrays. Readers may still hold an
    // older array, so nothing is freed before the relation dies.
    std::vector<std::unique_ptr<std::uint32_t[]>> arrays;

    RelBucket() { data.store(inline_rows, std::memory_order_relaxed); }

    void append(std::uint32_t row) {
        std::uint32_t n = count.load(std::memory_order_relaxed);
        std::uint32_t* d = data.load(std::memory_order_relaxed);
        if (n == capacity) {
            auto grown = std::make_unique<std::uint32_t[]>(std::size_t{capacity} * 2);
            std::copy(d, d + n, grown.get());
            d = grown.get();
            arrays.push_back(std::move(grown));
            capacity *= 2;
            data.store(d, std::memory_order_release);
        }
        d[n] = row;
        count.store(n + 1, std::memory_order_release);
    }
};

struct RelTable {
    std::size_t capacity;
    std::unique_ptr<std::atomic<RelBucket*>[]> slots;

    explicit RelTable(std::size_t cap) : capacity(cap), slots(new std::atomic<RelBucket*>[cap]) {
        for (std::size_t i = 0; i < cap; ++i) slots[i].store(nullptr, std::memory_order_relaxed);
    }
};

struct RelIndex {
    Mask mask = 0;
    std::atomic<RelTable*> table{nullptr};
    // Writer-owned; old tables are retired here for the same reason as
    // bucket arrays.
    std::vector<std::unique_ptr<RelTable>> tables;
    std::vector<std::unique_ptr<RelBucket>> buckets;
};

} // namespace detail

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    return h;
}

constexpr std::size_t kInitialSlots = 16;

} // namespace

Relation::Relation(std::string name, std::size_t arity, const std::vector<Mask>& masks)
    : name_(std::move(name)), arity_(arity), rows_(arity) {
    if (arity > 64) throw InternalError("relation " + name_ + ": arity above 64");
    Mask full = full_mask(arity);
    masks_.push_back(full);
    for (Mask m : masks) {
        if ((m & ~full) != 0) throw InternalError("relation " + name_ + ": index mask out of range");
        if (m != 0) masks_.push_back(m);
    }
    std::sort(masks_.begin(), masks_.end());
    masks_.erase(std::unique(masks_.begin(), masks_.end()), masks_.end());
    for (Mask m : masks_) {
        auto ix = std::make_unique<Index>();
        ix->mask = m;
        auto t = std::make_unique<detail::RelTable>(kInitialSlots);
        ix->table.store(t.get(), std::memory_order_relaxed);
        ix->tables.push_back(std::move(t));
        if (m == full) membership_ = ix.get();
        indexes_.push_back(std::move(ix));
    }
}

Relation::~Relation() = default;

bool Relation::has_index(Mask m) const {
    return m == 0 || std::find(masks_.begin(), masks_.end(), m) != masks_.end();
}

std::uint64_t Relation::key_hash(Mask m, std::span<const ValueId> key) const {
    std::uint64_t h = m;
    for (ValueId v : key) h = mix(h, v.raw);
    return h;
}

std::uint64_t Relation::row_hash(Mask m, const ValueId* row) const {
    std::uint64_t h = m;
    for (std::size_t c = 0; c < arity_; ++c)
        if (m >> c & 1) h = mix(h, row[c].raw);
    return h;
}

bool Relation::key_matches(Mask m, std::span<const ValueId> key, const ValueId* row) const {
    std::size_t k = 0;
    for (std::size_t c = 0; c < arity_; ++c)
        if (m >> c & 1)
            if (row[c] != key[k++]) return false;
    return true;
}

const ValueId* Relation::tuple(std::size_t i) const { return rows_.row(i); }

const Relation::Bucket* Relation::find_bucket(const Index& ix, std::span<const ValueId> key) const {
    const detail::RelTable* t = ix.table.load(std::memory_order_acquire);
    std::uint64_t h = key_hash(ix.mask, key);
    std::size_t slot = h & (t->capacity - 1);
    for (;;) {
        const Bucket* b = t->slots[slot].load(std::memory_order_acquire);
        if (b == nullptr) return nullptr;
        if (b->hash == h && key_matches(ix.mask, key, rows_.row(b->first))) return b;
        slot = (slot + 1) & (t->capacity - 1);
    }
}

void Relation::index_insert(Index& ix, std::uint32_t row) {
    const ValueId* r = rows_.row(row);
    std::uint64_t h = row_hash(ix.mask, r);
    detail::RelTable* t = ix.table.load(std::memory_order_relaxed);
    std::size_t slot = h & (t->capacity - 1);
    for (;;) {
        Bucket* b = t->slots[slot].load(std::memory_order_relaxed);
        if (b == nullptr) break;
        if (b->hash == h) {
            const ValueId* f = rows_.row(b->first);
            bool same = true;
            for (std::size_t c = 0; c < arity_ && same; ++c)
                if (ix.mask >> c & 1) same = f[c] == r[c];
            if (same) {
                b->append(row);
                return;
            }
        }
        slot = (slot + 1) & (t->capacity - 1);
    }

    auto fresh = std::make_unique<Bucket>();
    fresh->hash = h;
    fresh->first = row;
    fresh->append(row);
    Bucket* nb = fresh.get();
    ix.buckets.push_back(std::move(fresh));

    if (ix.buckets.size() * 2 > t->capacity) {
        auto grown = std::make_unique<detail::RelTable>(t->capacity * 2);
        for (const auto& b : ix.buckets) {
            std::size_t s = b->hash & (grown->capacity - 1);
            while (grown->slots[s].load(std::memory_order_relaxed) != nullptr) s = (s + 1) & (grown->capacity - 1);
            grown->slots[s].store(b.get(), std::memory_order_relaxed);
        }
        ix.table.store(grown.get(), std::memory_order_release);
        ix.tables.push_back(std::move(grown));
    } else {
        t->slots[slot].store(nb, std::memory_order_release);
    }
}

bool Relation::add_if_absent(std::span<const ValueId> t) {
    if (t.size() != arity_)
        throw InternalError("relation " + name_ + ": tuple of arity " + std::to_string(t.size()) + ", expected " +
                            std::to_string(arity_));
    std::lock_guard lock(write_mu_);
    if (find_bucket(*membership_, t) != nullptr) return false;
    std::size_t n = visible_.load(std::memory_order_relaxed);
    if (n >= UINT32_MAX) throw InternalError("relation " + name_ + ": too many tuples");
    ValueId* row = rows_.row_for_write(n);
    std::copy(t.begin(), t.end(), row);
    for (auto& ix : indexes_) index_insert(*ix, static_cast<std::uint32_t>(n));
    visible_.store(n + 1, std::memory_order_release);
    return true;
}

bool Relation::contains(std::span<const ValueId> t) const {
    if (t.size() != arity_) return false;
    std::size_t limit = visible_.load(std::memory_order_acquire);
    const Bucket* b = find_bucket(*membership_, t);
    return b != nullptr && b->first < limit;
}

Relation::Cursor Relation::scan() const {
    Cursor c;
    c.rel_ = this;
    c.scan_ = true;
    c.limit_ = visible_.load(std::memory_order_acquire);
    return c;
}

Relation::Cursor Relation::query(Mask mask, std::span<const ValueId> key) const {
    if (mask == 0) return scan();
    if (static_cast<std::size_t>(std::popcount(mask)) != key.size())
        throw InternalError("relation " + name_ + ": key length does not match mask");
    Cursor c;
    c.rel_ = this;
    c.limit_ = visible_.load(std::memory_order_acquire);
    const Index* ix = nullptr;
    for (const auto& i : indexes_)
        if (i->mask == mask) ix = i.get();
    if (ix == nullptr) throw InternalError("relation " + name_ + ": no index for mask " + std::to_string(mask));
    c.bucket_ = find_bucket(*ix, key);
    if (c.bucket_ != nullptr) {
        c.end_ = c.bucket_->count.load(std::memory_order_acquire);
        c.data_ = c.bucket_->data.load(std::memory_order_acquire);
    }
    return c;
}

const ValueId* Relation::Cursor::next() {
    if (scan_) {
        if (pos_ >= limit_) return nullptr;
        return rel_->tuple(pos_++);
    }
    if (bucket_ == nullptr || pos_ >= end_) return nullptr;
    std::uint32_t row = data_[pos_];
    if (row >= limit_) {
        pos_ = end_;
        return nullptr;
    }
    ++pos_;
    return rel_->tuple(row);
}

} // namespace eagerlog
