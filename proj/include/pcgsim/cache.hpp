#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcgsim/geometry.hpp"
#include "pcgsim/rng.hpp"

namespace pcgsim {

enum class AccessOutcome : uint8_t {
    HitL1,
    MissMergedIntoMshr,
    MshrMiss,   // allocated a new MSHR entry
    MshrStall,  // MSHR full, request not accepted this cycle
};

enum class AccessKind : uint8_t { Demand, Prefetch };

enum class Replacement : uint8_t { Random, Lru };

struct LatencyModel {
    uint64_t l1_hit = 3;
    uint64_t l2_hit = 40;
    uint64_t memory = 100;
    uint64_t hit_threshold = 35;  // attacker's hit/miss discriminator
};

// Backing tag store used only for fill latency (L2 hit vs memory).
struct L2Geometry {
    uint32_t num_sets = 256;
    uint32_t num_ways = 8;
};

struct AccessResult {
    AccessOutcome outcome = AccessOutcome::HitL1;
    uint64_t latency = 0;
    uint32_t set_index = 0;
    uint64_t block_addr = 0;
};

struct CacheLine {
    uint64_t tag = 0;
    uint64_t lru_stamp = 0;
    bool valid = false;
    bool evict_first = false;
};

struct MshrEntry {
    uint64_t block_addr = 0;
    uint64_t completion = 0;
    uint32_t merged = 0;       // requests folded into this entry, first included
    bool valid = false;
    bool is_prefetch = false;  // allocated by a prefetch access
    bool demand_involved = false;
};

// Produced when an MSHR entry's fill lands in the array.
struct FillRecord {
    uint64_t block_addr = 0;
    uint32_t set_index = 0;
    uint32_t way = 0;
    bool demand = false;
    std::optional<uint64_t> evicted_block;
};

class CacheModel {
public:
    CacheModel(const CacheGeometry& geom, const L2Geometry& l2, const LatencyModel& lat,
               Replacement repl, uint64_t seed);

    AccessResult access(uint64_t raw, AccessKind kind, uint64_t now);

    // Installs every fill due at `now` (completion <= now), in allocation order.
    // Appends one FillRecord per install to `out`.
    void complete_fills(uint64_t now, std::vector<FillRecord>& out);

    uint64_t next_completion() const { return next_completion_; }
    uint32_t mshr_in_use() const { return mshr_in_use_; }
    bool mshr_has(uint64_t block_addr) const;

    bool resident_l1(uint64_t raw) const;
    bool resident_l2(uint64_t raw) const;

    void flag_evict_first(uint32_t set, uint32_t way) { line_mut(set, way).evict_first = true; }
    uint32_t select_victim(uint32_t set);  // exposed for replacement tests

    const CacheLine& line(uint32_t set, uint32_t way) const { return lines_[set * geom_.num_ways + way]; }
    const CacheGeometry& geometry() const { return geom_; }
    const LatencyModel& latency() const { return lat_; }

    uint64_t evictions = 0;
    uint64_t fills = 0;

private:
    CacheLine& line_mut(uint32_t set, uint32_t way) { return lines_[set * geom_.num_ways + way]; }
    int find_way(uint32_t set, uint64_t tag) const;
    void refresh_next_completion();

    void l2_touch_or_install(uint64_t block_addr);
    bool l2_lookup(uint64_t block_addr) const;

    CacheGeometry geom_;
    L2Geometry l2_geom_;
    LatencyModel lat_;
    Replacement repl_;
    Rng rng_;

    std::vector<CacheLine> lines_;
    std::vector<CacheLine> l2_lines_;
    std::vector<MshrEntry> mshr_;
    uint32_t mshr_in_use_ = 0;
    uint64_t next_completion_ = UINT64_MAX;
    uint64_t stamp_ = 0;
    uint64_t l2_stamp_ = 0;
};

} // namespace pcgsim
