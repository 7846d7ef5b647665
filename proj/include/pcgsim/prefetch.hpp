#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "pcgsim/geometry.hpp"

namespace pcgsim {

// FIFO of block addresses awaiting issue. Drops the newest entry when full.
class PrefetchQueue {
public:
    explicit PrefetchQueue(uint32_t capacity) : capacity_(capacity) {}

    bool enqueue(uint64_t block_addr) {
        if (q_.size() >= capacity_) { dropped_full++; return false; }
        q_.push_back(block_addr);
        return true;
    }

    bool empty() const { return q_.empty(); }
    size_t size() const { return q_.size(); }
    uint32_t capacity() const { return capacity_; }

    uint64_t pop() {
        uint64_t v = q_.front();
        q_.pop_front();
        return v;
    }

    uint64_t dropped_full = 0;

private:
    uint32_t capacity_;
    std::deque<uint64_t> q_;
};

// Prefetches the next `degree` blocks after every demand access.
class NextLinePrefetcher {
public:
    NextLinePrefetcher(const CacheGeometry& g, uint32_t degree) : geom_(g), degree_(degree) {}

    void on_access(uint64_t addr, std::vector<uint64_t>& out) const {
        uint64_t blk = block_of(addr, geom_);
        for (uint32_t d = 1; d <= degree_; ++d) {
            uint64_t next = blk + static_cast<uint64_t>(d) * geom_.block_size;
            if (next < blk) break;  // address space overflow
            out.push_back(next);
        }
    }

private:
    CacheGeometry geom_;
    uint32_t degree_;
};

// Classic per-PC stride detector: 64 entries, direct-mapped by PC low bits,
// 3-bit confidence, fires at confidence >= ceil(0.5 * 7) = 4.
class StridePrefetcher {
public:
    static constexpr uint32_t kEntries = 64;
    static constexpr uint32_t kConfMax = 7;
    static constexpr uint32_t kConfThreshold = 4;

    StridePrefetcher(const CacheGeometry& g, uint32_t degree) : geom_(g), degree_(degree) {
        table_.resize(kEntries);
    }

    void on_access(uint64_t pc, uint64_t addr, std::vector<uint64_t>& out) {
        Entry& e = table_[pc & (kEntries - 1)];
        if (!e.valid || e.pc != pc) {
            e = Entry{pc, addr, 0, 0, true};
            return;
        }
        int64_t ns = static_cast<int64_t>(addr) - static_cast<int64_t>(e.last_addr);
        e.last_addr = addr;
        if (ns == e.stride) {
            if (e.confidence < kConfMax) e.confidence++;
        } else {
            if (e.confidence > 0) e.confidence--;
            e.stride = ns;
        }
        if (e.confidence < kConfThreshold || e.stride == 0) return;

        uint64_t prev_blk = 0;
        for (uint32_t d = 1; d <= degree_; ++d) {
            int64_t target = static_cast<int64_t>(addr) + e.stride * static_cast<int64_t>(d);
            if (target < 0) break;
            uint64_t blk = block_of(static_cast<uint64_t>(target), geom_);
            if (d > 1 && blk == prev_blk) continue;  // sub-block strides collapse
            out.push_back(blk);
            prev_blk = blk;
        }
    }

private:
    struct Entry {
        uint64_t pc = 0;
        uint64_t last_addr = 0;
        int64_t stride = 0;
        uint32_t confidence = 0;
        bool valid = false;
    };

    CacheGeometry geom_;
    uint32_t degree_;
    std::vector<Entry> table_;
};

} // namespace pcgsim
