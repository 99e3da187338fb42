#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "eagerlog/detail/segmented_array.hpp"
#include "eagerlog/value.hpp"

namespace eagerlog {

namespace detail {
struct RelBucket;
struct RelIndex;
} // namespace detail

/// Bit i set == column i bound.
using Mask = std::uint64_t;

inline Mask full_mask(std::size_t arity) { return arity >= 64 ? ~Mask{0} : (Mask{1} << arity) - 1; }

/// Append-only set of ground tuples with one hash index per bound-column set.
///
/// Writers are serialized internally; readers never block. A tuple becomes
/// visible to every index at once when the relation's visible count is
/// published, which is the linearization point of add_if_absent. Cursors are
/// bounded by the visible count at creation, so a cursor sees every tuple
/// inserted before it was created and never sees a tuple twice.
class Relation {
public:
    /// `masks` lists the bound-column sets queries will use. The full mask
    /// (membership) is always indexed; the empty mask is served by a scan.
    Relation(std::string name, std::size_t arity, const std::vector<Mask>& masks = {});
    ~Relation();
    Relation(const Relation&) = delete;
    Relation& operator=(const Relation&) = delete;

    const std::string& name() const { return name_; }
    std::size_t arity() const { return arity_; }
    const std::vector<Mask>& masks() const { return masks_; }
    bool has_index(Mask m) const;

    /// True iff `t` was absent. Throws InternalError on an arity mismatch.
    bool add_if_absent(std::span<const ValueId> t);
    bool contains(std::span<const ValueId> t) const;

    std::size_t size() const { return visible_.load(std::memory_order_acquire); }
    /// Row `i` (< size()).
    const ValueId* tuple(std::size_t i) const;

    class Cursor {
    public:
        Cursor() = default;
        /// Next matching tuple (arity() values), or nullptr when exhausted.
        const ValueId* next();

    private:
        friend class Relation;
        const Relation* rel_ = nullptr;
        const detail::RelBucket* bucket_ = nullptr;
        bool scan_ = false;
        std::size_t limit_ = 0;
        std::size_t pos_ = 0;
        std::size_t end_ = 0;
        const std::uint32_t* data_ = nullptr;
    };

    /// Tuples whose columns in `mask` equal `key` (bound values listed in
    /// ascending column order), in insertion order. The index for `mask`
    /// must exist; otherwise InternalError.
    Cursor query(Mask mask, std::span<const ValueId> key) const;
    Cursor scan() const;

private:
    using Bucket = detail::RelBucket;
    using Index = detail::RelIndex;

    const Bucket* find_bucket(const Index& ix, std::span<const ValueId> key) const;
    void index_insert(Index& ix, std::uint32_t row);
    std::uint64_t key_hash(Mask m, std::span<const ValueId> key) const;
    std::uint64_t row_hash(Mask m, const ValueId* row) const;
    bool key_matches(Mask m, std::span<const ValueId> key, const ValueId* row) const;

    std::string name_;
    std::size_t arity_;
    std::vector<Mask> masks_;
    std::vector<std::unique_ptr<Index>> indexes_;
    Index* membership_ = nullptr;
    detail::SegmentedArray<ValueId> rows_;
    std::atomic<std::size_t> visible_{0};
    std::mutex write_mu_;
};

} // namespace eagerlog
