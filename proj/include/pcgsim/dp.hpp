#pragma once

#include <cstdint>
#include <vector>

#include "pcgsim/geometry.hpp"
#include "pcgsim/rng.hpp"

namespace pcgsim {

// Disturbance prefetcher baseline: on every demand access, emit a random
// number of next-block candidates in random order, each remapped onto the
// least-used cache set.
class DpPrefetcher {
public:
    DpPrefetcher(const CacheGeometry& geom, uint32_t max_degree, uint64_t seed)
        : set_usage(geom.num_sets, 0), geom_(geom), max_degree_(max_degree), rng_(seed) {}

    void on_access(uint64_t addr, std::vector<uint64_t>& out) {
        uint64_t blk = block_of(addr, geom_);
        uint32_t k = static_cast<uint32_t>(rng_.range(1, max_degree_));
        scratch_.clear();
        for (uint32_t d = 1; d <= k; ++d) {
            uint64_t cand = blk + static_cast<uint64_t>(d) * geom_.block_size;
            if (cand < blk) break;
            scratch_.push_back(cand);
        }
        rng_.shuffle(scratch_);
        for (uint64_t cand : scratch_) {
            uint32_t fin = least_used_set(decompose(cand, geom_).index);
            set_usage[fin]++;
            generated++;
            out.push_back(with_index(cand, fin, geom_));
        }
    }

    // minimum usage count; ties broken by the smallest forward circular
    // distance from the candidate's own set
    uint32_t least_used_set(uint32_t from) const {
        uint32_t n = geom_.num_sets;
        uint32_t best = from;
        for (uint32_t dist = 1; dist < n; ++dist) {
            uint32_t s = (from + dist) % n;
            if (set_usage[s] < set_usage[best]) best = s;
        }
        return best;
    }

    uint64_t generated = 0;
    std::vector<uint64_t> set_usage;

private:
    CacheGeometry geom_;
    uint32_t max_degree_;
    Rng rng_;
    std::vector<uint64_t> scratch_;
};

} // namespace pcgsim
