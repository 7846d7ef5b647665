#include "pcgsim/workloads.hpp"

#include <numeric>

#include "pcgsim/rng.hpp"

namespace pcgsim {

std::vector<TraceEvent> gen_sequential(uint64_t base, uint64_t bytes, uint64_t elem_size,
                                       uint32_t passes, uint64_t pc) {
    std::vector<TraceEvent> out;
    out.reserve(passes * (bytes / elem_size));
    for (uint32_t p = 0; p < passes; ++p)
        for (uint64_t off = 0; off + elem_size <= bytes; off += elem_size)
            out.push_back({pc, base + off, false});
    return out;
}

std::vector<TraceEvent> gen_strided(uint64_t base, uint64_t bytes, uint64_t stride,
                                    uint32_t passes, uint64_t pc) {
    return gen_sequential(base, bytes, stride, passes, pc);
}

std::vector<TraceEvent> gen_random_walk(uint64_t base, uint64_t bytes, uint64_t elem_size,
                                        uint32_t steps, uint32_t burst, uint64_t pc, uint64_t seed) {
    std::vector<TraceEvent> out;
    out.reserve(static_cast<size_t>(steps) * burst);
    Rng rng(seed);
    uint64_t num_elems = bytes / elem_size;
    for (uint32_t s = 0; s < steps; ++s) {
        uint64_t e = rng.below(num_elems);
        for (uint32_t f = 0; f < burst; ++f) {
            uint64_t idx = (e + f) % num_elems;
            out.push_back({pc, base + idx * elem_size, false});
        }
    }
    return out;
}

std::vector<uint32_t> pointer_chase_ring(uint32_t num_nodes, uint64_t seed) {
    std::vector<uint32_t> order(num_nodes);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(splitmix64(seed ^ 0xc4a5eull));
    rng.shuffle(order);
    // next[order[i]] = order[i+1] closes a single cycle through every node.
    std::vector<uint32_t> next(num_nodes);
    for (uint32_t i = 0; i < num_nodes; ++i)
        next[order[i]] = order[(i + 1) % num_nodes];
    return next;
}

std::vector<TraceEvent> gen_pointer_chase(uint64_t base, uint32_t num_nodes, uint64_t node_size,
                                          uint32_t hops, uint64_t pc, uint64_t seed) {
    std::vector<uint32_t> next = pointer_chase_ring(num_nodes, seed);
    std::vector<TraceEvent> out;
    out.reserve(hops);
    uint32_t cur = 0;
    for (uint32_t h = 0; h < hops; ++h) {
        out.push_back({pc, base + static_cast<uint64_t>(cur) * node_size, false});
        cur = next[cur];
    }
    return out;
}

} // namespace pcgsim
