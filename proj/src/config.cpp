#include "pcgsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pcgsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

void require_keys(const json& j, const std::string& where, const std::set<std::string>& known) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) fail("unknown key \"" + it.key() + "\" in " + where);
}

template <typename T>
void get_to(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception&) {
        fail(std::string("bad value for \"") + key + "\" in " + where);
    }
}

PrefetcherKind parse_prefetcher(const std::string& s) {
    if (s == "none") return PrefetcherKind::None;
    if (s == "next-line") return PrefetcherKind::NextLine;
    if (s == "stride") return PrefetcherKind::Stride;
    fail("prefetcher must be none|next-line|stride, got \"" + s + "\"");
}

void parse_geometry(const json& j, CacheGeometry& g) {
    require_keys(j, "geometry", {"sets", "ways", "block_size", "mshr_entries", "prefetch_queue_capacity"});
    get_to(j, "sets", g.num_sets, "geometry");
    get_to(j, "ways", g.num_ways, "geometry");
    get_to(j, "block_size", g.block_size, "geometry");
    get_to(j, "mshr_entries", g.mshr_entries, "geometry");
    get_to(j, "prefetch_queue_capacity", g.prefetch_queue_capacity, "geometry");
}

void parse_sim(const json& j, SimConfig& sim) {
    if (j.contains("geometry")) parse_geometry(j.at("geometry"), sim.geom);
    if (j.contains("l2")) {
        const json& l2 = j.at("l2");
        require_keys(l2, "l2", {"sets", "ways"});
        get_to(l2, "sets", sim.l2.num_sets, "l2");
        get_to(l2, "ways", sim.l2.num_ways, "l2");
    }
    if (j.contains("latency")) {
        const json& lat = j.at("latency");
        require_keys(lat, "latency", {"l1_hit", "l2_hit", "memory", "hit_threshold"});
        get_to(lat, "l1_hit", sim.lat.l1_hit, "latency");
        get_to(lat, "l2_hit", sim.lat.l2_hit, "latency");
        get_to(lat, "memory", sim.lat.memory, "latency");
        get_to(lat, "hit_threshold", sim.lat.hit_threshold, "latency");
    }
    if (j.contains("replacement")) {
        std::string r = j.at("replacement").get<std::string>();
        if (r == "random") sim.repl = Replacement::Random;
        else if (r == "lru") sim.repl = Replacement::Lru;
        else fail("replacement must be random|lru, got \"" + r + "\"");
    }
    if (j.contains("prefetcher")) sim.prefetcher = parse_prefetcher(j.at("prefetcher").get<std::string>());
    get_to(j, "prefetch_degree", sim.prefetch_degree, "top level");

    if (j.contains("defense")) {
        std::string d = j.at("defense").get<std::string>();
        if (d == "none") sim.defense = DefenseKind::None;
        else if (d == "pcg") sim.defense = DefenseKind::Pcg;
        else if (d == "dp") sim.defense = DefenseKind::Dp;
        else fail("defense must be none|pcg|dp, got \"" + d + "\"");
    }
    if (j.contains("pcg")) {
        const json& p = j.at("pcg");
        require_keys(p, "pcg", {"enabled", "degree", "reset_period", "rng_seed"});
        get_to(p, "degree", sim.pcg.degree, "pcg");
        get_to(p, "reset_period", sim.pcg.reset_period, "pcg");
        get_to(p, "rng_seed", sim.pcg.rng_seed, "pcg");
        if (p.contains("enabled")) {
            // pcg.enabled toggles the defense when the defense key is absent
            // (and wins over defense=pcg when explicitly false).
            bool en = false;
            get_to(p, "enabled", en, "pcg");
            if (en) sim.defense = DefenseKind::Pcg;
            else if (sim.defense == DefenseKind::Pcg) sim.defense = DefenseKind::None;
        }
        if (sim.pcg.degree < 1) fail("pcg.degree must be >= 1");
        if (sim.pcg.reset_period < 1) fail("pcg.reset_period must be >= 1");
    }
    if (j.contains("dp")) {
        const json& p = j.at("dp");
        require_keys(p, "dp", {"max_degree"});
        get_to(p, "max_degree", sim.dp.max_degree, "dp");
        if (sim.dp.max_degree < 1) fail("dp.max_degree must be >= 1");
    }

    try {
        sim.geom.validate();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    if (sim.l2.num_sets == 0 || sim.l2.num_ways == 0) fail("l2 sets/ways must be >= 1");
    if (sim.lat.hit_threshold <= sim.lat.l1_hit || sim.lat.hit_threshold >= sim.lat.l2_hit)
        fail("hit_threshold must separate l1_hit from l2_hit");
}

void parse_checks(const json& j, CheckSpec& c) {
    require_keys(j, "checks",
                 {"min_diagonal_contrast", "max_diagonal_contrast", "expect_recovered",
                  "min_attack_mshr_over_accesses", "min_attack_mshr_over_misses",
                  "max_benign_mshr_over_misses"});
    auto opt_double = [&](const char* key, std::optional<double>& out) {
        if (j.contains(key)) out = j.at(key).get<double>();
    };
    opt_double("min_diagonal_contrast", c.min_diagonal_contrast);
    opt_double("max_diagonal_contrast", c.max_diagonal_contrast);
    opt_double("min_attack_mshr_over_accesses", c.min_attack_mshr_over_accesses);
    opt_double("min_attack_mshr_over_misses", c.min_attack_mshr_over_misses);
    opt_double("max_benign_mshr_over_misses", c.max_benign_mshr_over_misses);
    if (j.contains("expect_recovered")) c.expect_recovered = j.at("expect_recovered").get<int>();
}

void parse_workloads(const json& j, std::vector<WorkloadSpec>& out) {
    if (!j.is_array()) fail("workloads must be an array");
    for (const json& w : j) {
        require_keys(w, "workloads[]", {"name", "kind", "path", "prefetcher"});
        WorkloadSpec spec;
        get_to(w, "name", spec.name, "workloads[]");
        get_to(w, "kind", spec.kind, "workloads[]");
        get_to(w, "path", spec.path, "workloads[]");
        if (w.contains("prefetcher"))
            spec.prefetcher = parse_prefetcher(w.at("prefetcher").get<std::string>());
        static const std::set<std::string> kinds{"attack",      "sequential", "strided",
                                                 "random-walk", "pointer-chase", "trace"};
        if (!kinds.count(spec.kind)) fail("workload kind \"" + spec.kind + "\" unknown");
        if (spec.kind == "trace" && spec.path.empty()) fail("trace workload needs a path");
        if (spec.name.empty()) spec.name = spec.kind;
        out.push_back(std::move(spec));
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level must be an object");

    static const std::set<std::string> known{
        "mode",        "geometry",   "l2",           "latency",     "replacement",
        "prefetcher",  "prefetch_degree", "defense", "pcg",         "dp",
        "attack",      "rounds",     "secret",       "seed",        "random_stall",
        "victim_prologue_idle", "sweep_T", "sweep_rounds", "out_dir", "checks",
        "workloads"};
    require_keys(j, "top level", known);

    ExperimentConfig cfg;
    parse_sim(j, cfg.sim);
    get_to(j, "mode", cfg.mode, "top level");
    get_to(j, "attack", cfg.attack, "top level");
    get_to(j, "rounds", cfg.rounds, "top level");
    get_to(j, "seed", cfg.seed, "top level");
    get_to(j, "random_stall", cfg.random_stall, "top level");
    get_to(j, "victim_prologue_idle", cfg.victim_prologue_idle, "top level");
    get_to(j, "sweep_rounds", cfg.sweep_rounds, "top level");
    get_to(j, "out_dir", cfg.out_dir, "top level");
    if (j.contains("secret")) {
        int s = j.at("secret").get<int>();
        if (s < 0 || s > 255) fail("secret must be in [0,255]");
        cfg.secret = static_cast<uint8_t>(s);
    }
    if (j.contains("sweep_T")) {
        cfg.sweep_T.clear();
        for (const json& t : j.at("sweep_T")) {
            uint32_t v = t.get<uint32_t>();
            if (v == 0) fail("sweep_T values must be >= 1");
            cfg.sweep_T.push_back(v);
        }
        if (cfg.sweep_T.empty()) fail("sweep_T must not be empty");
    }
    if (j.contains("checks")) parse_checks(j.at("checks"), cfg.checks);
    if (j.contains("workloads")) parse_workloads(j.at("workloads"), cfg.workloads);

    static const std::set<std::string> modes{"attack", "heatmap", "mshr-report", "sweep-T"};
    if (!modes.count(cfg.mode)) fail("mode must be attack|heatmap|mshr-report|sweep-T");
    static const std::set<std::string> attacks{"evict-reload", "prime-probe", "evict-time", "counting"};
    if (!attacks.count(cfg.attack)) fail("attack must be evict-reload|prime-probe|evict-time|counting");
    if (cfg.rounds < 1) fail("rounds must be >= 1");
    if (cfg.sweep_rounds < 1) fail("sweep_rounds must be >= 1");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace pcgsim
