#include "pcgsim/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "pcgsim/rng.hpp"
#include "pcgsim/trace.hpp"
#include "pcgsim/workloads.hpp"

namespace pcgsim {

namespace {

using nlohmann::ordered_json;

constexpr size_t kMinTraceEvents = 10000;

const char* defense_name(DefenseKind d) {
    switch (d) {
    case DefenseKind::Pcg: return "pcg";
    case DefenseKind::Dp: return "dp";
    default: return "none";
    }
}

const char* prefetcher_name(PrefetcherKind p) {
    switch (p) {
    case PrefetcherKind::NextLine: return "next-line";
    case PrefetcherKind::Stride: return "stride";
    default: return "none";
    }
}

ordered_json config_echo(const ExperimentConfig& cfg) {
    ordered_json j;
    j["mode"] = cfg.mode;
    j["seed"] = cfg.seed;
    j["geometry"] = {{"sets", cfg.sim.geom.num_sets},
                     {"ways", cfg.sim.geom.num_ways},
                     {"block_size", cfg.sim.geom.block_size},
                     {"mshr_entries", cfg.sim.geom.mshr_entries},
                     {"prefetch_queue_capacity", cfg.sim.geom.prefetch_queue_capacity}};
    j["l2"] = {{"sets", cfg.sim.l2.num_sets}, {"ways", cfg.sim.l2.num_ways}};
    j["latency"] = {{"l1_hit", cfg.sim.lat.l1_hit},
                    {"l2_hit", cfg.sim.lat.l2_hit},
                    {"memory", cfg.sim.lat.memory},
                    {"hit_threshold", cfg.sim.lat.hit_threshold}};
    j["replacement"] = cfg.sim.repl == Replacement::Lru ? "lru" : "random";
    j["prefetcher"] = prefetcher_name(cfg.sim.prefetcher);
    j["prefetch_degree"] = cfg.sim.prefetch_degree;
    j["defense"] = defense_name(cfg.sim.defense);
    j["pcg"] = {{"degree", cfg.sim.pcg.degree},
                {"reset_period", cfg.sim.pcg.reset_period},
                {"rng_seed", cfg.sim.pcg.rng_seed}};
    j["dp"] = {{"max_degree", cfg.sim.dp.max_degree}};
    j["attack"] = cfg.attack;
    j["rounds"] = cfg.rounds;
    j["secret"] = cfg.secret;
    j["random_stall"] = cfg.random_stall;
    j["victim_prologue_idle"] = cfg.victim_prologue_idle;
    return j;
}

struct SweepTotals {
    uint64_t rounds = 0;
    uint64_t victim_danger_rounds = 0;
    uint64_t demand_accesses = 0;
    uint64_t mshr_misses = 0;
    uint64_t ocm_noise_generated = 0;
    uint64_t ocm_bring_backs = 0;
    uint64_t pf_queue_drops = 0;
    uint64_t aam_resets = 0;
};

void accumulate(SweepTotals& tot, const RoundResult& r) {
    ++tot.rounds;
    tot.victim_danger_rounds += r.victim_set_danger ? 1 : 0;
    tot.demand_accesses += r.stats.demand_accesses;
    tot.mshr_misses += r.stats.mshr_misses;
    tot.ocm_noise_generated += r.stats.ocm_noise_generated;
    tot.ocm_bring_backs += r.stats.ocm_bring_backs;
    tot.pf_queue_drops += r.stats.pf_queue_drops;
    tot.aam_resets += r.stats.aam_resets;
}

ordered_json totals_json(const SweepTotals& t) {
    ordered_json j;
    j["rounds"] = t.rounds;
    j["victim_set_danger_rate"] =
        t.rounds ? static_cast<double>(t.victim_danger_rounds) / t.rounds : 0.0;
    j["demand_accesses"] = t.demand_accesses;
    j["mshr_misses"] = t.mshr_misses;
    j["ocm_noise_generated"] = t.ocm_noise_generated;
    j["ocm_bring_backs"] = t.ocm_bring_backs;
    j["prefetch_queue_drops"] = t.pf_queue_drops;
    j["aam_resets"] = t.aam_resets;
    return j;
}

HeatMap sweep_into(const ExperimentConfig& cfg, uint32_t rounds, SweepTotals& totals) {
    AttackLayout lay;
    RoundOptions opt = round_options(cfg);
    HeatMap hm;
    for (uint32_t s = 0; s < 256; ++s) {
        for (uint32_t r = 0; r < rounds; ++r) {
            // Round 0 targets a fresh victim process. Later rounds of the same
            // cell re-attack that process, so its table is already cache-warm:
            // phase 1 still clears it out of L1, but reload misses pay the L2
            // cost for every guess instead of only the one the victim touched.
            opt.warm_array2 = r > 0;
            uint64_t seed = derive_seed(cfg.seed, s, r);
            RoundResult res = evict_reload_round(cfg.sim, lay, seed, static_cast<uint8_t>(s), opt);
            for (uint32_t g = 0; g < 256; ++g)
                hm.add(static_cast<uint8_t>(s), static_cast<uint8_t>(g), res.latency[g]);
            accumulate(totals, res);
        }
    }
    return hm;
}

std::vector<WorkloadSpec> builtin_workloads() {
    return {
        {"evict-reload-attack", "attack", "", PrefetcherKind::None},
        {"sequential-scan", "sequential", "", PrefetcherKind::NextLine},
        {"strided-scan", "strided", "", PrefetcherKind::Stride},
        {"random-walk", "random-walk", "", PrefetcherKind::None},
        {"pointer-chase", "pointer-chase", "", PrefetcherKind::Stride},
    };
}

std::vector<TraceEvent> workload_trace(const WorkloadSpec& w, const ExperimentConfig& cfg) {
    AttackLayout lay;
    uint64_t seed = derive_seed(cfg.seed, 0xbe419, std::hash<std::string>{}(w.name));
    if (w.kind == "attack") return make_attack_trace(lay, cfg.sim.geom, 8, seed);
    if (w.kind == "sequential") return gen_sequential(0x10000, 8192, 8, 10, 0x7104);
    if (w.kind == "strided") return gen_strided(0x80000, 32768, 16, 5, 0x7208);
    if (w.kind == "random-walk") return gen_random_walk(0x100000, 4096, 8, 2560, 4, 0x7300, seed);
    if (w.kind == "pointer-chase") return gen_pointer_chase(0x180000, 64, 8, 10240, 0x7404, seed);
    if (w.kind == "trace") return load_trace(w.path);
    throw std::runtime_error("unknown workload kind: " + w.kind);
}

void write_report(const ordered_json& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::string path = out_dir + "/report.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

struct CheckLog {
    ordered_json details = ordered_json::array();
    int evaluated = 0;
    bool ok = true;

    void add(const std::string& name, bool pass, double got) {
        ++evaluated;
        ok = ok && pass;
        details.push_back({{"check", name}, {"pass", pass}, {"value", got}});
    }
};

} // namespace

RoundOptions round_options(const ExperimentConfig& cfg) {
    RoundOptions opt;
    opt.random_stall = cfg.random_stall;
    opt.victim_prologue_idle = cfg.victim_prologue_idle;
    return opt;
}

HeatMap heatmap_sweep(const ExperimentConfig& cfg, uint32_t rounds) {
    SweepTotals ignored;
    return sweep_into(cfg, rounds, ignored);
}

nlohmann::ordered_json mshr_ratio_report(const ExperimentConfig& cfg) {
    std::vector<WorkloadSpec> workloads = cfg.workloads.empty() ? builtin_workloads() : cfg.workloads;
    if (workloads.empty()) throw std::runtime_error("mshr-report: no workloads configured");

    ordered_json rows = ordered_json::array();
    for (const WorkloadSpec& w : workloads) {
        std::vector<TraceEvent> trace = workload_trace(w, cfg);
        if (trace.size() < kMinTraceEvents)
            throw std::runtime_error("workload \"" + w.name + "\" has " + std::to_string(trace.size()) +
                                     " events, need at least " + std::to_string(kMinTraceEvents));
        SimConfig sim_cfg = cfg.sim;
        sim_cfg.prefetcher = w.prefetcher;
        Simulator sim(sim_cfg, derive_seed(cfg.seed, 0x3e9417, std::hash<std::string>{}(w.name)));
        sim.replay(trace);
        SimStats st = sim.stats();
        if (!(st.mshr_misses <= st.demand_misses && st.demand_misses <= st.demand_accesses))
            throw std::runtime_error("counter invariant violated for workload " + w.name);
        ordered_json row;
        row["name"] = w.name;
        row["kind"] = w.kind;
        row["prefetcher"] = prefetcher_name(w.prefetcher);
        row["events"] = trace.size();
        row["accesses"] = st.demand_accesses;
        row["cache_misses"] = st.demand_misses;
        row["mshr_misses"] = st.mshr_misses;
        row["mshr_miss_over_accesses"] = st.mshr_miss_over_accesses();
        row["mshr_miss_over_misses"] = st.mshr_miss_over_misses();
        rows.push_back(std::move(row));
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    ordered_json& report = res.report;
    report["config"] = config_echo(cfg);
    CheckLog checks;
    AttackLayout lay;

    std::filesystem::create_directories(cfg.out_dir);

    if (cfg.mode == "heatmap") {
        SweepTotals totals;
        HeatMap hm = sweep_into(cfg, cfg.rounds, totals);
        write_heatmap_csv(hm, cfg.out_dir + "/heatmap.csv");
        write_heatmap_pgm(hm, cfg.out_dir + "/heatmap.pgm");
        double contrast = diagonal_contrast(hm);
        report["results"] = {{"diagonal_contrast", contrast},
                             {"rounds_per_secret", cfg.rounds},
                             {"grid_full", hm.full()}};
        report["stats"] = totals_json(totals);
        report["artifacts"] = {cfg.out_dir + "/heatmap.csv", cfg.out_dir + "/heatmap.pgm"};
        if (cfg.checks.min_diagonal_contrast)
            checks.add("min_diagonal_contrast", contrast >= *cfg.checks.min_diagonal_contrast, contrast);
        if (cfg.checks.max_diagonal_contrast)
            checks.add("max_diagonal_contrast", contrast <= *cfg.checks.max_diagonal_contrast, contrast);
    } else if (cfg.mode == "sweep-T") {
        ordered_json arr = ordered_json::array();
        ordered_json artifacts = ordered_json::array();
        SweepTotals totals;
        for (uint32_t T : cfg.sweep_T) {
            ExperimentConfig sub = cfg;
            sub.sim.pcg.reset_period = T;
            sub.random_stall = true;  // reset-period sensitivity methodology uses the stall
            HeatMap hm = sweep_into(sub, cfg.sweep_rounds, totals);
            std::string stem = cfg.out_dir + "/heatmap_T" + std::to_string(T);
            write_heatmap_csv(hm, stem + ".csv");
            write_heatmap_pgm(hm, stem + ".pgm");
            artifacts.push_back(stem + ".csv");
            artifacts.push_back(stem + ".pgm");
            arr.push_back({{"reset_period", T}, {"diagonal_contrast", diagonal_contrast(hm)}});
        }
        report["results"] = {{"sweep", arr}, {"rounds_per_secret", cfg.sweep_rounds}};
        report["stats"] = totals_json(totals);
        report["artifacts"] = artifacts;
    } else if (cfg.mode == "mshr-report") {
        ordered_json rows = mshr_ratio_report(cfg);
        report["results"] = {{"workloads", rows}};
        for (const auto& row : rows) {
            bool is_attack = row.at("kind") == "attack";
            double over_acc = row.at("mshr_miss_over_accesses").get<double>();
            double over_miss = row.at("mshr_miss_over_misses").get<double>();
            std::string name = row.at("name").get<std::string>();
            if (is_attack && cfg.checks.min_attack_mshr_over_accesses)
                checks.add(name + ":min_attack_mshr_over_accesses",
                           over_acc >= *cfg.checks.min_attack_mshr_over_accesses, over_acc);
            if (is_attack && cfg.checks.min_attack_mshr_over_misses)
                checks.add(name + ":min_attack_mshr_over_misses",
                           over_miss >= *cfg.checks.min_attack_mshr_over_misses, over_miss);
            if (!is_attack && cfg.checks.max_benign_mshr_over_misses)
                checks.add(name + ":max_benign_mshr_over_misses",
                           over_miss < *cfg.checks.max_benign_mshr_over_misses, over_miss);
        }
    } else if (cfg.mode == "attack") {
        RoundOptions opt = round_options(cfg);
        if (cfg.attack == "evict-reload") {
            SweepTotals totals;
            std::map<unsigned, uint64_t> histogram;
            uint64_t correct = 0;
            for (uint32_t r = 0; r < cfg.rounds; ++r) {
                RoundResult rr =
                    evict_reload_round(cfg.sim, lay, derive_seed(cfg.seed, 0xa4, r), cfg.secret, opt);
                ++histogram[rr.recovered];
                if (rr.recovered == cfg.secret) ++correct;
                accumulate(totals, rr);
            }
            unsigned modal = histogram.empty() ? 0 : histogram.begin()->first;
            for (const auto& [val, n] : histogram)
                if (n > histogram.at(modal)) modal = val;
            double accuracy = static_cast<double>(correct) / cfg.rounds;
            report["results"] = {{"attack", cfg.attack},
                                 {"rounds", cfg.rounds},
                                 {"secret", cfg.secret},
                                 {"accuracy", accuracy},
                                 {"modal_recovered", modal}};
            report["stats"] = totals_json(totals);
            if (cfg.checks.expect_recovered)
                checks.add("expect_recovered", static_cast<int>(modal) == *cfg.checks.expect_recovered,
                           static_cast<double>(modal));
        } else if (cfg.attack == "prime-probe") {
            uint64_t with_victim = 0, without_victim = 0;
            for (uint32_t r = 0; r < cfg.rounds; ++r) {
                if (prime_probe_round(cfg.sim, lay, derive_seed(cfg.seed, 0xbb, r), true).any_miss)
                    ++with_victim;
                if (prime_probe_round(cfg.sim, lay, derive_seed(cfg.seed, 0xcc, r), false).any_miss)
                    ++without_victim;
            }
            report["results"] = {{"attack", cfg.attack},
                                 {"rounds", cfg.rounds},
                                 {"miss_rate_victim_active", static_cast<double>(with_victim) / cfg.rounds},
                                 {"miss_rate_victim_idle", static_cast<double>(without_victim) / cfg.rounds}};
        } else if (cfg.attack == "evict-time") {
            double sum_base = 0, sum_evicted = 0;
            for (uint32_t r = 0; r < cfg.rounds; ++r) {
                EvictTimeResult et = evict_time_round(cfg.sim, lay, derive_seed(cfg.seed, 0xdd, r));
                sum_base += static_cast<double>(et.t_baseline);
                sum_evicted += static_cast<double>(et.t_evicted);
            }
            report["results"] = {{"attack", cfg.attack},
                                 {"rounds", cfg.rounds},
                                 {"mean_baseline", sum_base / cfg.rounds},
                                 {"mean_evicted", sum_evicted / cfg.rounds},
                                 {"mean_gap", (sum_evicted - sum_base) / cfg.rounds}};
        } else {  // counting
            CountingResult cr = repeated_counting_attack(cfg.sim, lay, cfg.seed, cfg.secret);
            ordered_json counts = ordered_json::array();
            for (uint64_t c : cr.counts) counts.push_back(c);
            report["results"] = {{"attack", cfg.attack},
                                 {"attacks", cr.attacks},
                                 {"secret", cfg.secret},
                                 {"argmax", cr.argmax},
                                 {"secret_count", cr.counts[cfg.secret]},
                                 {"mean_count", cr.mean},
                                 {"stddev_count", cr.stddev},
                                 {"secret_within_1sd", cr.secret_within_1sd},
                                 {"counts", counts}};
            if (cfg.checks.expect_recovered)
                checks.add("expect_recovered", static_cast<int>(cr.argmax) == *cfg.checks.expect_recovered,
                           static_cast<double>(cr.argmax));
        }
    } else {
        throw std::runtime_error("unknown mode: " + cfg.mode);
    }

    report["checks"] = {{"evaluated", checks.evaluated}, {"passed", checks.ok}, {"details", checks.details}};
    res.checks_ok = checks.ok;
    res.checks_evaluated = checks.evaluated;
    write_report(report, cfg.out_dir);
    return res;
}

} // namespace pcgsim
