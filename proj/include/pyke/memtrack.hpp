#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

// Allocation tracking for the numeric working set. Every large numeric
// container in the pipeline (co-occurrence tables, similarity arenas,
// embedding matrices, engine buffers) allocates through CountingAllocator so
// tests can assert the linear-space contract: peak usage must scale with m,
// never with m^2.

namespace pyke::mem {

namespace detail {

inline std::atomic<std::uint64_t>& current_counter() {
    static std::atomic<std::uint64_t> c{0};
    return c;
}

inline std::atomic<std::uint64_t>& peak_counter() {
    static std::atomic<std::uint64_t> p{0};
    return p;
}

inline void on_allocate(std::size_t bytes) {
    auto now = current_counter().fetch_add(bytes, std::memory_order_relaxed) + bytes;
    auto& peak = peak_counter();
    auto seen = peak.load(std::memory_order_relaxed);
    while (seen < now && !peak.compare_exchange_weak(seen, now, std::memory_order_relaxed)) {
    }
}

inline void on_deallocate(std::size_t bytes) {
    current_counter().fetch_sub(bytes, std::memory_order_relaxed);
}

}  // namespace detail

inline std::uint64_t current_bytes() {
    return detail::current_counter().load(std::memory_order_relaxed);
}

inline std::uint64_t peak_bytes() {
    return detail::peak_counter().load(std::memory_order_relaxed);
}

// Restarts peak tracking from the current level.
inline void reset_peak() {
    detail::peak_counter().store(current_bytes(), std::memory_order_relaxed);
}

template <typename T>
struct CountingAllocator {
    using value_type = T;

    CountingAllocator() noexcept = default;
    template <typename U>
    CountingAllocator(const CountingAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        detail::on_allocate(n * sizeof(T));
        return std::allocator<T>{}.allocate(n);
    }

    void deallocate(T* p, std::size_t n) noexcept {
        detail::on_deallocate(n * sizeof(T));
        std::allocator<T>{}.deallocate(p, n);
    }

    friend bool operator==(const CountingAllocator&, const CountingAllocator&) { return true; }
};

template <typename T>
using vector = std::vector<T, CountingAllocator<T>>;

}  // namespace pyke::mem
