#include "pcgsim/cache.hpp"

#include <algorithm>

namespace pcgsim {

CacheModel::CacheModel(const CacheGeometry& geom, const L2Geometry& l2, const LatencyModel& lat,
                       Replacement repl, uint64_t seed)
    : geom_(geom), l2_geom_(l2), lat_(lat), repl_(repl), rng_(seed) {
    geom_.validate();
    if (!is_pow2(l2_geom_.num_sets) || l2_geom_.num_ways == 0)
        throw std::invalid_argument("bad L2 geometry");
    lines_.resize(static_cast<size_t>(geom_.num_sets) * geom_.num_ways);
    l2_lines_.resize(static_cast<size_t>(l2_geom_.num_sets) * l2_geom_.num_ways);
    mshr_.resize(geom_.mshr_entries);
}

int CacheModel::find_way(uint32_t set, uint64_t tag) const {
    for (uint32_t w = 0; w < geom_.num_ways; ++w) {
        const CacheLine& l = line(set, w);
        if (l.valid && l.tag == tag) return static_cast<int>(w);
    }
    return -1;
}

bool CacheModel::resident_l1(uint64_t raw) const {
    Address a = decompose(raw, geom_);
    return find_way(a.index, a.tag) >= 0;
}

bool CacheModel::l2_lookup(uint64_t block_addr) const {
    uint32_t set = static_cast<uint32_t>((block_addr >> geom_.offset_bits()) & (l2_geom_.num_sets - 1));
    uint64_t tag = block_addr >> (geom_.offset_bits() + log2u(l2_geom_.num_sets));
    for (uint32_t w = 0; w < l2_geom_.num_ways; ++w) {
        const CacheLine& l = l2_lines_[set * l2_geom_.num_ways + w];
        if (l.valid && l.tag == tag) return true;
    }
    return false;
}

bool CacheModel::resident_l2(uint64_t raw) const { return l2_lookup(block_of(raw, geom_)); }

void CacheModel::l2_touch_or_install(uint64_t block_addr) {
    uint32_t set = static_cast<uint32_t>((block_addr >> geom_.offset_bits()) & (l2_geom_.num_sets - 1));
    uint64_t tag = block_addr >> (geom_.offset_bits() + log2u(l2_geom_.num_sets));
    CacheLine* base = &l2_lines_[set * l2_geom_.num_ways];
    CacheLine* slot = nullptr;
    for (uint32_t w = 0; w < l2_geom_.num_ways; ++w) {
        if (base[w].valid && base[w].tag == tag) { base[w].lru_stamp = ++l2_stamp_; return; }
        if (!base[w].valid && !slot) slot = &base[w];
    }
    if (!slot) {
        slot = base;
        for (uint32_t w = 1; w < l2_geom_.num_ways; ++w)
            if (base[w].lru_stamp < slot->lru_stamp) slot = &base[w];
    }
    slot->valid = true;
    slot->tag = tag;
    slot->lru_stamp = ++l2_stamp_;
    slot->evict_first = false;
}

bool CacheModel::mshr_has(uint64_t block_addr) const {
    for (const MshrEntry& e : mshr_)
        if (e.valid && e.block_addr == block_addr) return true;
    return false;
}

AccessResult CacheModel::access(uint64_t raw, AccessKind kind, uint64_t now) {
    Address a = decompose(raw, geom_);
    uint64_t blk = block_of(raw, geom_);
    AccessResult r;
    r.set_index = a.index;
    r.block_addr = blk;

    int way = find_way(a.index, a.tag);
    if (way >= 0) {
        if (kind == AccessKind::Demand) line_mut(a.index, static_cast<uint32_t>(way)).lru_stamp = ++stamp_;
        r.outcome = AccessOutcome::HitL1;
        r.latency = lat_.l1_hit;
        return r;
    }

    for (MshrEntry& e : mshr_) {
        if (e.valid && e.block_addr == blk) {
            e.merged++;
            if (kind == AccessKind::Demand) e.demand_involved = true;
            r.outcome = AccessOutcome::MissMergedIntoMshr;
            r.latency = e.completion > now ? e.completion - now : 1;
            return r;
        }
    }

    if (mshr_in_use_ == geom_.mshr_entries) {
        r.outcome = AccessOutcome::MshrStall;
        r.latency = 1;
        return r;
    }

    uint64_t fill = l2_lookup(blk) ? lat_.l2_hit : lat_.memory;
    for (MshrEntry& e : mshr_) {
        if (!e.valid) {
            e = MshrEntry{blk, now + fill, 1, true, kind == AccessKind::Prefetch,
                          kind == AccessKind::Demand};
            break;
        }
    }
    mshr_in_use_++;
    next_completion_ = std::min(next_completion_, now + fill);
    r.outcome = AccessOutcome::MshrMiss;
    r.latency = fill;
    return r;
}

uint32_t CacheModel::select_victim(uint32_t set) {
    // evictFirst overrides the base policy: uniform among flagged lines
    uint32_t flagged[64];
    uint32_t nflag = 0;
    for (uint32_t w = 0; w < geom_.num_ways; ++w)
        if (line_mut(set, w).valid && line_mut(set, w).evict_first) flagged[nflag++] = w;
    if (nflag > 0) return flagged[rng_.below(nflag)];

    if (repl_ == Replacement::Random) return static_cast<uint32_t>(rng_.below(geom_.num_ways));

    uint32_t victim = 0;
    for (uint32_t w = 1; w < geom_.num_ways; ++w)
        if (line_mut(set, w).lru_stamp < line_mut(set, victim).lru_stamp) victim = w;
    return victim;
}

void CacheModel::refresh_next_completion() {
    next_completion_ = UINT64_MAX;
    for (const MshrEntry& e : mshr_)
        if (e.valid) next_completion_ = std::min(next_completion_, e.completion);
}

void CacheModel::complete_fills(uint64_t now, std::vector<FillRecord>& out) {
    if (next_completion_ > now) return;
    for (MshrEntry& e : mshr_) {
        if (!e.valid || e.completion > now) continue;
        Address a = decompose(e.block_addr, geom_);

        int slot = -1;
        for (uint32_t w = 0; w < geom_.num_ways; ++w)
            if (!line_mut(a.index, w).valid) { slot = static_cast<int>(w); break; }

        FillRecord rec;
        rec.block_addr = e.block_addr;
        rec.set_index = a.index;
        rec.demand = e.demand_involved;
        if (slot < 0) {
            slot = static_cast<int>(select_victim(a.index));
            CacheLine& victim = line_mut(a.index, static_cast<uint32_t>(slot));
            rec.evicted_block = compose(victim.tag, a.index, 0, geom_);
            evictions++;
        }
        rec.way = static_cast<uint32_t>(slot);

        CacheLine& l = line_mut(a.index, static_cast<uint32_t>(slot));
        l.valid = true;
        l.tag = a.tag;
        l.evict_first = false;
        l.lru_stamp = ++stamp_;
        fills++;

        l2_touch_or_install(e.block_addr);

        e.valid = false;
        mshr_in_use_--;
        out.push_back(rec);
    }
    refresh_next_completion();
}

} // namespace pcgsim
