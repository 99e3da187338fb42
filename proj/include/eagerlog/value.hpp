#pragma once

#include <array>
#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "eagerlog/detail/segmented_array.hpp"

namespace eagerlog {

/// Interned handle of a ground value. Dense, starting at zero.
struct ValueId {
    static constexpr std::uint32_t kInvalid = UINT32_MAX;
    std::uint32_t raw = kInvalid;

    constexpr bool valid() const { return raw != kInvalid; }
    friend constexpr auto operator<=>(ValueId, ValueId) = default;
};

struct IntLit {
    std::int64_t value = 0;
    friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct Ctor {
    std::string symbol;
    std::vector<ValueId> args;
    friend bool operator==(const Ctor&, const Ctor&) = default;
};

using Value = std::variant<IntLit, Ctor>;

struct ValueHash {
    std::size_t operator()(const Value& v) const noexcept;
};

/// Hash-consing table shared by every worker of a run.
///
/// intern() is linearizable: two threads interning structurally equal values
/// always receive the same id. resolve() is wait-free for any id returned by
/// intern(); the returned reference stays valid for the interner's lifetime.
class Interner {
public:
    Interner();
    Interner(const Interner&) = delete;
    Interner& operator=(const Interner&) = delete;

    ValueId intern(const Value& v);
    ValueId intern_int(std::int64_t n) { return intern(IntLit{n}); }
    ValueId intern_ctor(std::string symbol, std::vector<ValueId> args);

    /// Throws InternalError for ids this interner never produced.
    const Value& resolve(ValueId id) const;

    /// Convenience: the integer behind `id`, or nullptr when it is a Ctor.
    const std::int64_t* as_int(ValueId id) const;

    std::size_t size() const { return next_.load(std::memory_order_acquire); }

    /// Textual form: integers in decimal, constructors as `sym(a,b)` or
    /// bare `sym` when nullary.
    std::string render(ValueId id) const;

    /// Structural total order: integers (numerically) before constructors,
    /// constructors by symbol, then arguments left to right. Independent of
    /// interning order, so it is stable across thread schedules.
    std::strong_ordering compare(ValueId a, ValueId b) const;

private:
    static constexpr std::size_t kShards = 64;
    struct Shard {
        std::mutex mu;
        std::unordered_map<Value, ValueId, ValueHash> map;
    };

    std::array<Shard, kShards> shards_;
    std::atomic<std::uint32_t> next_{0};
    detail::SegmentedArray<Value> values_;
};

} // namespace eagerlog

template <>
struct std::hash<eagerlog::ValueId> {
    std::size_t operator()(eagerlog::ValueId id) const noexcept { return std::hash<std::uint32_t>{}(id.raw); }
};
