#include "pcgsim/simulator.hpp"

#include <stdexcept>

#include "pcgsim/rng.hpp"

namespace pcgsim {

Simulator::Simulator(const SimConfig& cfg, uint64_t seed)
    : cfg_(cfg),
      cache_(cfg.geom, cfg.l2, cfg.lat, cfg.repl, splitmix64(seed ^ 0x5cac5e01u)),
      queue_(cfg.geom.prefetch_queue_capacity) {
    cfg_.geom.validate();
    switch (cfg_.prefetcher) {
    case PrefetcherKind::NextLine:
        nextline_ = std::make_unique<NextLinePrefetcher>(cfg_.geom, cfg_.prefetch_degree);
        break;
    case PrefetcherKind::Stride:
        stride_ = std::make_unique<StridePrefetcher>(cfg_.geom, cfg_.prefetch_degree);
        break;
    case PrefetcherKind::None:
        break;
    }
    if (cfg_.defense == DefenseKind::Pcg) {
        aam_ = std::make_unique<Aam>(cfg_.geom.num_sets, 4, cfg_.pcg.reset_period);
        ocm_ = std::make_unique<Ocm>(cfg_.geom, cfg_.pcg.degree,
                                     splitmix64(seed ^ splitmix64(cfg_.pcg.rng_seed) ^ 0x0c31u));
    } else if (cfg_.defense == DefenseKind::Dp) {
        dp_ = std::make_unique<DpPrefetcher>(cfg_.geom, cfg_.dp.max_degree, splitmix64(seed ^ 0xd31u));
    }
}

void Simulator::log_event(uint64_t a, uint64_t b, uint64_t c) {
    hash_ = splitmix64(hash_ ^ splitmix64(a) ^ splitmix64(b + 0x9e3779b97f4a7c15ull) ^ c);
}

void Simulator::process_fills() {
    if (cache_.next_completion() > cycle_) return;
    fill_scratch_.clear();
    cache_.complete_fills(cycle_, fill_scratch_);
    for (const FillRecord& rec : fill_scratch_) {
        log_event(0xf111, rec.block_addr, cycle_);
        if (!ocm_ || !rec.demand || !rec.evicted_block) continue;
        // Algorithm 1 part (a): a demand fill that evicts from a danger set
        // marks the new line evict-first and schedules the evicted block to
        // be brought back.
        if (aam_->danger(rec.set_index)) {
            cache_.flag_evict_first(rec.set_index, rec.way);
            ++stats_.ocm_flags;
            if (queue_.enqueue(*rec.evicted_block)) {
                ++stats_.pf_enqueued;
                ++stats_.ocm_bring_backs;
            }
        }
    }
}

void Simulator::drain_prefetch() {
    if (queue_.empty()) return;
    uint64_t blk = queue_.pop();
    if (cache_.resident_l1(blk)) {
        ++stats_.pf_discarded_resident;
        return;
    }
    AccessResult r = cache_.access(blk, AccessKind::Prefetch, cycle_);
    switch (r.outcome) {
    case AccessOutcome::MshrMiss: ++stats_.pf_issued; break;
    case AccessOutcome::MissMergedIntoMshr: ++stats_.pf_merged; break;
    case AccessOutcome::MshrStall: ++stats_.pf_dropped_mshr_full; break;  // dropped, no retry
    case AccessOutcome::HitL1: break;
    }
    log_event(0x9f, blk, static_cast<uint64_t>(r.outcome));
}

void Simulator::tick_rest() {
    drain_prefetch();
    if (aam_) aam_->tick();
    ++cycle_;
}

void Simulator::enqueue_all(const std::vector<uint64_t>& addrs) {
    for (uint64_t a : addrs) {
        if (queue_.enqueue(a)) ++stats_.pf_enqueued;
    }
}

void Simulator::after_demand(uint64_t pc, uint64_t addr, const AccessResult& r) {
    ++stats_.demand_accesses;
    switch (r.outcome) {
    case AccessOutcome::HitL1:
        ++stats_.demand_hits;
        break;
    case AccessOutcome::MissMergedIntoMshr:
        ++stats_.demand_misses;
        ++stats_.merged;
        break;
    case AccessOutcome::MshrMiss:
        ++stats_.demand_misses;
        ++stats_.mshr_misses;
        break;
    case AccessOutcome::MshrStall:
        break;
    }
    log_event(pc, addr, (cycle_ << 3) | static_cast<uint64_t>(r.outcome));

    bool missed = r.outcome == AccessOutcome::MshrMiss || r.outcome == AccessOutcome::MissMergedIntoMshr;
    if (aam_) {
        // AAM sees the miss stream; its danger bits feed the noise below.
        if (r.outcome == AccessOutcome::MshrMiss) aam_->observe(pc, r.set_index);
        ocm_->mark_ref(r.set_index);
        if (missed) {
            addr_scratch_.clear();
            ocm_->noise_for_miss(r.block_addr, aam_->danger_set(), addr_scratch_);
            stats_.ocm_noise_generated += addr_scratch_.size();
            enqueue_all(addr_scratch_);
        }
    } else if (dp_) {
        addr_scratch_.clear();
        dp_->on_access(addr, addr_scratch_);
        stats_.dp_generated += addr_scratch_.size();
        enqueue_all(addr_scratch_);
    }

    if (nextline_) {
        addr_scratch_.clear();
        nextline_->on_access(addr, addr_scratch_);
        stats_.nextline_emitted += addr_scratch_.size();
        enqueue_all(addr_scratch_);
    } else if (stride_) {
        addr_scratch_.clear();
        stride_->on_access(pc, addr, addr_scratch_);
        stats_.stride_emitted += addr_scratch_.size();
        enqueue_all(addr_scratch_);
    }
}

AccessResult Simulator::issue_demand(uint64_t pc, uint64_t addr) {
    process_fills();
    AccessResult r = cache_.access(addr, AccessKind::Demand, cycle_);
    if (r.outcome == AccessOutcome::MshrStall) ++stats_.stalls;
    else after_demand(pc, addr, r);
    tick_rest();
    return r;
}

AccessResult Simulator::demand_access(uint64_t pc, uint64_t addr) {
    for (;;) {
        process_fills();
        AccessResult r = cache_.access(addr, AccessKind::Demand, cycle_);
        if (r.outcome == AccessOutcome::MshrStall) {
            ++stats_.stalls;
            tick_rest();
            continue;
        }
        after_demand(pc, addr, r);
        uint64_t lat = r.latency;
        tick_rest();
        if (lat > 1) idle(lat - 1);
        else process_fills();
        return r;
    }
}

void Simulator::idle(uint64_t cycles) {
    while (cycles--) {
        process_fills();
        tick_rest();
    }
    process_fills();
}

void Simulator::drain_outstanding(uint64_t max_cycles) {
    uint64_t budget = max_cycles;
    while (cache_.mshr_in_use() > 0 || !queue_.empty()) {
        if (budget-- == 0) throw std::runtime_error("drain_outstanding: did not converge");
        process_fills();
        tick_rest();
    }
    process_fills();
}

void Simulator::replay(const std::vector<TraceEvent>& trace) {
    for (const TraceEvent& ev : trace) {
        while (issue_demand(ev.pc, ev.addr).outcome == AccessOutcome::MshrStall) {}
    }
    drain_outstanding();
}

SimStats Simulator::stats() const {
    SimStats s = stats_;
    s.cycles = cycle_;
    s.pf_queue_drops = queue_.dropped_full;
    s.evictions = cache_.evictions;
    s.fills = cache_.fills;
    if (aam_) {
        s.aam_resets = aam_->resets;
        s.aam_flag_events = aam_->flag_events;
    }
    return s;
}

} // namespace pcgsim
