#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pcgsim/simulator.hpp"

namespace pcgsim {

// Address-space layout used by all attack programs. array2 spans exactly 256
// blocks covering every set 4 times; the attacker's eviction region is large
// enough to build an n=4 eviction set for every set at once.
struct AttackLayout {
    uint64_t array2_base = 0x20000000;
    uint64_t evict_base = 0x40000000;
    uint64_t pc_traverse_a = 0x1104;
    uint64_t pc_traverse_b = 0x1148;
    uint64_t pc_victim = 0x2110;
    uint64_t pc_probe = 0x3114;
    uint64_t pc_chase = 0x4118;
};

struct EvictionSet {
    std::vector<uint64_t> addresses;  // n*W entries, same index, distinct tags, offset 0
    uint32_t set_index = 0;
};

// n*W addresses carved from region_base that share target's set index.
EvictionSet build_eviction_set(uint64_t target, uint32_t n, const CacheGeometry& g,
                               uint64_t region_base);

struct VictimModel {
    uint64_t array2_base = 0;
    uint8_t secret = 0;
};

struct RoundOptions {
    bool warm_attacker = true;     // pre-load the eviction region so Phase 1 timing is stable
    bool warm_array2 = false;      // victim data cold by default (fresh process per round)
    uint32_t phase1_passes = 1;
    uint64_t victim_prologue_idle = 0;  // cycles the victim spends before the secret access
    bool random_stall = false;          // uniform 0..stall_max cycles between Phase 2 and 3
    uint32_t stall_max = 500;
};

struct RoundResult {
    std::array<uint32_t, 256> latency{};
    uint8_t recovered = 0;
    bool victim_set_danger = false;  // dangerSet state of the victim's set right after Phase 2
    SimStats stats;
};

// One full Evict+Reload round on a fresh simulator.
RoundResult evict_reload_round(const SimConfig& cfg, const AttackLayout& lay, uint64_t seed,
                               uint8_t secret, const RoundOptions& opt = {});

struct PrimeProbeResult {
    bool any_miss = false;
    uint32_t probe_misses = 0;
};

// Prime a target set, optionally run the victim, probe own lines.
PrimeProbeResult prime_probe_round(const SimConfig& cfg, const AttackLayout& lay, uint64_t seed,
                                   bool victim_active);

struct EvictTimeResult {
    uint64_t t_baseline = 0;  // victim re-access, no interference
    uint64_t t_evicted = 0;   // victim re-access after the attacker evicts the target
};

EvictTimeResult evict_time_round(const SimConfig& cfg, const AttackLayout& lay, uint64_t seed);

struct CountingResult {
    std::array<uint64_t, 256> counts{};
    uint8_t argmax = 0;
    double mean = 0.0;
    double stddev = 0.0;
    bool secret_within_1sd = false;
    uint64_t attacks = 0;
};

// Listing-2 style repeated attack: outer*inner attacks in one continuing
// simulation, probe order reshuffled per outer step via mix = (g*a+b) & 255.
CountingResult repeated_counting_attack(const SimConfig& cfg, const AttackLayout& lay,
                                        uint64_t seed, uint8_t secret, uint32_t outer = 100,
                                        uint32_t inner = 100);

struct ChaseResult {
    uint64_t accesses = 0;
    uint64_t mshr_misses = 0;
    uint64_t stride_prefetches = 0;
    uint64_t ocm_prefetches = 0;
};

// Dependent-load traversal of an eviction set in seeded permutation order.
ChaseResult pointer_chase_traverse(Simulator& sim, const EvictionSet& es, uint64_t seed,
                                   uint64_t pc);

// Synthesizes a Listing-1 style access trace (Phase 1 + victim + probes per
// round) for the MSHR-ratio report.
std::vector<TraceEvent> make_attack_trace(const AttackLayout& lay, const CacheGeometry& g,
                                          uint32_t rounds, uint64_t seed);

// Predetermined random odd primes from [67, 251] for the a[]/b[] probe shuffle.
std::vector<uint32_t> shuffle_primes(size_t count);

} // namespace pcgsim
