#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pcgsim/cache.hpp"
#include "pcgsim/dp.hpp"
#include "pcgsim/pcg.hpp"
#include "pcgsim/prefetch.hpp"
#include "pcgsim/trace.hpp"

namespace pcgsim {

enum class PrefetcherKind : uint8_t { None, NextLine, Stride };
enum class DefenseKind : uint8_t { None, Pcg, Dp };

struct PcgParams {
    uint32_t degree = 4;
    uint32_t reset_period = 10000;
    uint64_t rng_seed = 0;
};

struct DpParams {
    uint32_t max_degree = 10;
};

struct SimConfig {
    CacheGeometry geom;
    L2Geometry l2;
    LatencyModel lat;
    Replacement repl = Replacement::Random;
    PrefetcherKind prefetcher = PrefetcherKind::None;
    uint32_t prefetch_degree = 4;
    DefenseKind defense = DefenseKind::None;
    PcgParams pcg;
    DpParams dp;
};

struct SimStats {
    uint64_t cycles = 0;
    uint64_t demand_accesses = 0;
    uint64_t demand_hits = 0;
    uint64_t demand_misses = 0;  // merged + mshr misses
    uint64_t mshr_misses = 0;
    uint64_t merged = 0;
    uint64_t stalls = 0;

    uint64_t pf_enqueued = 0;
    uint64_t pf_queue_drops = 0;
    uint64_t pf_discarded_resident = 0;
    uint64_t pf_issued = 0;
    uint64_t pf_merged = 0;
    uint64_t pf_dropped_mshr_full = 0;

    uint64_t ocm_noise_generated = 0;
    uint64_t ocm_bring_backs = 0;
    uint64_t ocm_flags = 0;
    uint64_t dp_generated = 0;
    uint64_t stride_emitted = 0;
    uint64_t nextline_emitted = 0;

    uint64_t aam_resets = 0;
    uint64_t aam_flag_events = 0;
    uint64_t evictions = 0;
    uint64_t fills = 0;

    double mshr_miss_over_accesses() const {
        return demand_accesses ? static_cast<double>(mshr_misses) / demand_accesses : 0.0;
    }
    double mshr_miss_over_misses() const {
        return demand_misses ? static_cast<double>(mshr_misses) / demand_misses : 0.0;
    }
};

// Single-core cycle-stepped wrapper around the cache: one demand slot per
// cycle, one prefetch drained per cycle, fills applied as they come due.
class Simulator {
public:
    Simulator(const SimConfig& cfg, uint64_t seed);

    // Blocking access: retries MSHR stalls, then waits out the access latency.
    // On return the accessed line is resident.
    AccessResult demand_access(uint64_t pc, uint64_t addr);

    uint64_t measure_latency(uint64_t pc, uint64_t addr) { return demand_access(pc, addr).latency; }

    // Non-blocking: one attempt, one cycle. Returns MshrStall when not accepted.
    AccessResult issue_demand(uint64_t pc, uint64_t addr);

    void idle(uint64_t cycles);

    // Runs until MSHRs and prefetch queue are empty (bounded).
    void drain_outstanding(uint64_t max_cycles = 200000);

    // Feeds trace events at one per cycle, retrying stalled events.
    void replay(const std::vector<TraceEvent>& trace);

    uint64_t now() const { return cycle_; }
    CacheModel& cache() { return cache_; }
    PrefetchQueue& queue() { return queue_; }
    Aam* aam() { return aam_.get(); }
    Ocm* ocm() { return ocm_.get(); }
    DpPrefetcher* dp() { return dp_.get(); }
    const SimConfig& config() const { return cfg_; }

    SimStats stats() const;
    uint64_t event_hash() const { return hash_; }

private:
    void process_fills();
    void tick_rest();  // prefetch drain + aam tick + advance clock
    void after_demand(uint64_t pc, uint64_t addr, const AccessResult& r);
    void drain_prefetch();
    void enqueue_all(const std::vector<uint64_t>& addrs);
    void log_event(uint64_t a, uint64_t b, uint64_t c);

    SimConfig cfg_;
    CacheModel cache_;
    PrefetchQueue queue_;
    std::unique_ptr<NextLinePrefetcher> nextline_;
    std::unique_ptr<StridePrefetcher> stride_;
    std::unique_ptr<Aam> aam_;
    std::unique_ptr<Ocm> ocm_;
    std::unique_ptr<DpPrefetcher> dp_;

    uint64_t cycle_ = 0;
    uint64_t hash_ = 0xcbf29ce484222325ull;
    SimStats stats_;
    std::vector<FillRecord> fill_scratch_;
    std::vector<uint64_t> addr_scratch_;
};

} // namespace pcgsim
