#pragma once

#include <string>

#include <json.hpp>

#include "pcgsim/attack.hpp"
#include "pcgsim/config.hpp"
#include "pcgsim/heatmap.hpp"

namespace pcgsim {

struct ExperimentResult {
    nlohmann::ordered_json report;
    bool checks_ok = true;
    int checks_evaluated = 0;
};

// Full 256-secret sweep with `rounds` fresh rounds per secret.
HeatMap heatmap_sweep(const ExperimentConfig& cfg, uint32_t rounds);

// Per-workload MSHR miss ratios; rejects traces under 10^4 events.
nlohmann::ordered_json mshr_ratio_report(const ExperimentConfig& cfg);

// Dispatches on cfg.mode, writes artifacts under cfg.out_dir, evaluates
// cfg.checks, and returns the report document.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Derived per-round options shared by every experiment path.
RoundOptions round_options(const ExperimentConfig& cfg);

} // namespace pcgsim
