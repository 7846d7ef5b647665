#pragma once

#include <cstdint>
#include <stdexcept>

namespace pcgsim {

inline constexpr bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline constexpr uint32_t log2u(uint64_t v) {
    uint32_t n = 0;
    while (v > 1) { v >>= 1; ++n; }
    return n;
}

// L1 data cache organization. All sizes are powers of two.
struct CacheGeometry {
    uint32_t num_sets = 64;
    uint32_t num_ways = 4;
    uint32_t block_size = 64;
    uint32_t mshr_entries = 4;
    uint32_t prefetch_queue_capacity = 32;

    uint32_t offset_bits() const { return log2u(block_size); }
    uint32_t index_bits() const { return log2u(num_sets); }

    void validate() const {
        if (!is_pow2(num_sets) || !is_pow2(num_ways) || !is_pow2(block_size))
            throw std::invalid_argument("cache geometry fields must be powers of two");
        if (block_size < 8)
            throw std::invalid_argument("block size too small");
        if (mshr_entries == 0 || prefetch_queue_capacity == 0)
            throw std::invalid_argument("mshr and prefetch queue must be non-empty");
    }
};

struct Address {
    uint64_t raw = 0;
    uint64_t tag = 0;
    uint32_t index = 0;
    uint32_t offset = 0;
};

inline Address decompose(uint64_t raw, const CacheGeometry& g) {
    Address a;
    a.raw = raw;
    a.offset = static_cast<uint32_t>(raw & (g.block_size - 1));
    a.index = static_cast<uint32_t>((raw >> g.offset_bits()) & (g.num_sets - 1));
    a.tag = raw >> (g.offset_bits() + g.index_bits());
    return a;
}

inline uint64_t compose(uint64_t tag, uint32_t index, uint32_t offset, const CacheGeometry& g) {
    return (tag << (g.offset_bits() + g.index_bits())) |
           (static_cast<uint64_t>(index) << g.offset_bits()) | offset;
}

inline uint64_t block_of(uint64_t raw, const CacheGeometry& g) {
    return raw & ~static_cast<uint64_t>(g.block_size - 1);
}

// Replaces only the set index bits, keeping tag and offset.
inline uint64_t with_index(uint64_t raw, uint32_t index, const CacheGeometry& g) {
    Address a = decompose(raw, g);
    return compose(a.tag, index, a.offset, g);
}

} // namespace pcgsim
