#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcgsim/simulator.hpp"

namespace pcgsim {

struct WorkloadSpec {
    std::string name;
    std::string kind;  // attack | sequential | strided | random-walk | pointer-chase | trace
    std::string path;  // for kind == trace
    PrefetcherKind prefetcher = PrefetcherKind::None;
};

struct CheckSpec {
    std::optional<double> min_diagonal_contrast;
    std::optional<double> max_diagonal_contrast;
    std::optional<int> expect_recovered;
    std::optional<double> min_attack_mshr_over_accesses;
    std::optional<double> min_attack_mshr_over_misses;
    std::optional<double> max_benign_mshr_over_misses;
};

struct ExperimentConfig {
    std::string mode = "heatmap";  // attack | heatmap | mshr-report | sweep-T
    SimConfig sim;
    std::string attack = "evict-reload";  // evict-reload | prime-probe | evict-time | counting
    uint32_t rounds = 1;
    uint8_t secret = 115;
    uint64_t seed = 1;
    bool random_stall = false;
    uint64_t victim_prologue_idle = 0;
    std::vector<uint32_t> sweep_T{1000, 10000, 50000};
    uint32_t sweep_rounds = 40;
    std::string out_dir = "out";
    CheckSpec checks;
    std::vector<WorkloadSpec> workloads;  // empty selects the builtin set
};

// Parses and validates the JSON config document. Unknown keys and malformed
// values fail with a message naming the offending key.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

} // namespace pcgsim
