#pragma once

#include <cstdint>
#include <vector>

#include "pcgsim/geometry.hpp"
#include "pcgsim/rng.hpp"

namespace pcgsim {

// Abnormal-access monitor. Consumes demand MSHR misses only; flags cache sets
// that took `window` misses from a single PC before the PC changed.
class Aam {
public:
    Aam(uint32_t num_sets, uint32_t window, uint32_t reset_period)
        : window_(window), tau_(window), reset_period_(reset_period),
          counter_(num_sets, 0), danger_(num_sets, 0) {}

    void observe(uint64_t pc, uint32_t set) {
        if (!has_pc_ || pc != last_pc_) {
            // dangerSet is refreshed from the counters accumulated so far,
            // before this access's own count lands
            bool was_zero = danger_zero();
            for (size_t i = 0; i < counter_.size(); ++i)
                if (counter_[i] >= tau_) danger_[i] = 1;
            if (was_zero && !danger_zero()) {
                cnt_ = 0;
                flag_events++;
            }
            last_pc_ = pc;
            has_pc_ = true;
        }
        if (counter_[set] < window_) counter_[set]++;
    }

    void tick() {
        cnt_ = (cnt_ + 1) & 0xffffu;
        if (cnt_ != 0 && cnt_ % reset_period_ == 0) {
            std::fill(counter_.begin(), counter_.end(), uint8_t{0});
            std::fill(danger_.begin(), danger_.end(), uint8_t{0});
            resets++;
        }
    }

    bool danger(uint32_t set) const { return danger_[set] != 0; }
    const std::vector<uint8_t>& danger_set() const { return danger_; }
    bool danger_zero() const {
        for (uint8_t d : danger_)
            if (d) return false;
        return true;
    }

    uint8_t counter(uint32_t set) const { return counter_[set]; }
    uint16_t cnt() const { return cnt_; }

    uint64_t resets = 0;
    uint64_t flag_events = 0;

private:
    uint32_t window_;
    uint32_t tau_;
    uint32_t reset_period_;
    std::vector<uint8_t> counter_;
    std::vector<uint8_t> danger_;
    uint64_t last_pc_ = 0;
    bool has_pc_ = false;
    uint16_t cnt_ = 0;
};

// Obfuscating-prefetch generator. Noise prefetch targets are remapped through
// balanced_set so they spread over abnormal sets first, then untouched sets.
class Ocm {
public:
    Ocm(const CacheGeometry& geom, uint32_t degree, uint64_t seed)
        : ref_set(geom.num_sets, 0), dan_set(geom.num_sets, 1),
          geom_(geom), degree_(degree), rng_(seed) {}

    void mark_ref(uint32_t set) { ref_set[set] = 1; }

    // degree noise prefetches around a missing block, random direction per step
    void noise_for_miss(uint64_t block_addr, const std::vector<uint8_t>& danger,
                        std::vector<uint64_t>& out) {
        for (uint32_t d = 1; d <= degree_; ++d) {
            uint64_t delta = static_cast<uint64_t>(d) * geom_.block_size;
            uint64_t temp;
            if (rng_.coin()) {
                temp = block_addr + delta;
                if (temp < block_addr) continue;
            } else {
                if (block_addr < delta) continue;
                temp = block_addr - delta;
            }
            generated++;
            out.push_back(balanced_set(temp, danger));
        }
    }

    // Algorithm: refresh marks when the reference vector saturates, then pick
    // the closest set whose bit is clear (abnormal sets first), mark it, and
    // rewrite the index bits of the address.
    uint64_t balanced_set(uint64_t temp_raw, const std::vector<uint8_t>& danger) {
        uint32_t sets = geom_.num_sets;
        if (all_ones(ref_set)) {
            std::fill(ref_set.begin(), ref_set.end(), uint8_t{0});
            for (uint32_t i = 0; i < sets; ++i) dan_set[i] = danger[i] ? 0 : 1;
            refreshes++;
        }
        uint32_t t = decompose(temp_raw, geom_).index;
        uint32_t fin;
        if (!all_ones(dan_set)) {
            fin = nearest_zero(dan_set, t);
            dan_set[fin] = 1;
        } else {
            fin = nearest_zero(ref_set, t);
            ref_set[fin] = 1;
        }
        return with_index(temp_raw, fin, geom_);
    }

    uint64_t generated = 0;
    uint64_t refreshes = 0;

    std::vector<uint8_t> ref_set;
    std::vector<uint8_t> dan_set;

    static bool all_ones(const std::vector<uint8_t>& v) {
        for (uint8_t b : v)
            if (!b) return false;
        return true;
    }

    // circular distance, forward preferred on ties, distance 0 allowed
    static uint32_t nearest_zero(const std::vector<uint8_t>& v, uint32_t t) {
        uint32_t n = static_cast<uint32_t>(v.size());
        for (uint32_t dist = 0; dist <= n / 2; ++dist) {
            uint32_t fwd = (t + dist) % n;
            if (!v[fwd]) return fwd;
            uint32_t bwd = (t + n - dist) % n;
            if (!v[bwd]) return bwd;
        }
        return t;  // unreachable when a zero bit exists
    }

private:
    CacheGeometry geom_;
    uint32_t degree_;
    Rng rng_;
};

} // namespace pcgsim
