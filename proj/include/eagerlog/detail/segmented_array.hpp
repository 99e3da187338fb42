#pragma once

#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <memory>
#include <mutex>

namespace eagerlog::detail {

// Append-only storage with stable element addresses. Segment k holds
// (kBase << k) rows of `stride` elements, so rows never straddle segments.
//
// Writers call row_for_write(); readers call row() for rows whose publication
// they have synchronized with (the array itself publishes nothing).
template <class T>
class SegmentedArray {
public:
    explicit SegmentedArray(std::size_t stride = 1) : stride_(stride == 0 ? 1 : stride) {}
    SegmentedArray(const SegmentedArray&) = delete;
    SegmentedArray& operator=(const SegmentedArray&) = delete;

    ~SegmentedArray() {
        for (auto& s : segments_) delete[] s.load(std::memory_order_relaxed);
    }

    T* row_for_write(std::size_t i) {
        auto [seg, off] = locate(i);
        T* base = segments_[seg].load(std::memory_order_acquire);
        if (base == nullptr) {
            std::lock_guard lock(alloc_mu_);
            base = segments_[seg].load(std::memory_order_relaxed);
            if (base == nullptr) {
                base = new T[(kBase << seg) * stride_]();
                segments_[seg].store(base, std::memory_order_release);
            }
        }
        return base + off * stride_;
    }

    /// Null when the segment holding row `i` was never allocated.
    const T* row(std::size_t i) const {
        auto [seg, off] = locate(i);
        const T* base = segments_[seg].load(std::memory_order_acquire);
        return base == nullptr ? nullptr : base + off * stride_;
    }

    std::size_t stride() const { return stride_; }

private:
    static constexpr std::size_t kBase = 256;
    static constexpr std::size_t kSegments = 48;

    static std::pair<std::size_t, std::size_t> locate(std::size_t i) {
        std::size_t q = i / kBase + 1;
        std::size_t seg = static_cast<std::size_t>(std::bit_width(q)) - 1;
        std::size_t first = kBase * ((std::size_t{1} << seg) - 1);
        return {seg, i - first};
    }

    std::size_t stride_;
    std::array<std::atomic<T*>, kSegments> segments_{};
    std::mutex alloc_mu_;
};

} // namespace eagerlog::detail
