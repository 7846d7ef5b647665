#pragma once

#include <cstdint>
#include <vector>

#include "pcgsim/trace.hpp"

namespace pcgsim {

// Benign trace generators. All of them emit enough spatial locality that a
// replayed trace produces merge-dominated misses, the way ordinary code does.

// Linear scan over [base, base+bytes) in elem_size steps, repeated passes times.
std::vector<TraceEvent> gen_sequential(uint64_t base, uint64_t bytes, uint64_t elem_size,
                                       uint32_t passes, uint64_t pc);

// Fixed-stride scan, one read per stride step.
std::vector<TraceEvent> gen_strided(uint64_t base, uint64_t bytes, uint64_t stride,
                                    uint32_t passes, uint64_t pc);

// Random object walk: each step picks a random element and reads burst
// consecutive fields from it.
std::vector<TraceEvent> gen_random_walk(uint64_t base, uint64_t bytes, uint64_t elem_size,
                                        uint32_t steps, uint32_t burst, uint64_t pc, uint64_t seed);

// Pointer chase over a shuffled ring of small nodes (several nodes per block).
std::vector<TraceEvent> gen_pointer_chase(uint64_t base, uint32_t num_nodes, uint64_t node_size,
                                          uint32_t hops, uint64_t pc, uint64_t seed);

// The ring order used by gen_pointer_chase, exposed so a live traversal can
// follow the same successor chain.
std::vector<uint32_t> pointer_chase_ring(uint32_t num_nodes, uint64_t seed);

} // namespace pcgsim
