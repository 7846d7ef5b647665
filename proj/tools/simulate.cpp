#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcgsim/experiment.hpp"

namespace {

void print_summary(const pcgsim::ExperimentResult& res, const std::string& out_dir) {
    const auto& rep = res.report;
    std::cout << "mode: " << rep.at("config").at("mode").get<std::string>() << "\n";
    if (rep.contains("results")) {
        const auto& r = rep.at("results");
        if (r.contains("diagonal_contrast"))
            std::cout << "diagonal contrast: " << r.at("diagonal_contrast").get<double>() << "\n";
        if (r.contains("accuracy"))
            std::cout << "recovery accuracy: " << r.at("accuracy").get<double>() << "\n";
        if (r.contains("argmax")) std::cout << "argmax guess: " << r.at("argmax").get<int>() << "\n";
        if (r.contains("sweep"))
            for (const auto& row : r.at("sweep"))
                std::cout << "T=" << row.at("reset_period").get<uint32_t>()
                          << " contrast=" << row.at("diagonal_contrast").get<double>() << "\n";
        if (r.contains("workloads"))
            for (const auto& row : r.at("workloads"))
                std::cout << row.at("name").get<std::string>()
                          << ": mshrMissOverAccesses=" << row.at("mshr_miss_over_accesses").get<double>()
                          << " mshrMissOverMisses=" << row.at("mshr_miss_over_misses").get<double>()
                          << "\n";
    }
    std::cout << "report: " << out_dir << "/report.json\n";
    if (res.checks_evaluated)
        std::cout << "checks: " << (res.checks_ok ? "pass" : "FAIL") << " (" << res.checks_evaluated
                  << " evaluated)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic cache side-channel simulator"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir;
    bool check = false;
    uint64_t seed = 0;
    bool seed_set = false;

    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_flag("--check", check, "evaluate configured checks; nonzero exit on failure");
    app.add_option("--out", out_dir, "override output directory");
    app.add_option("--seed", seed, "override base seed")->each([&](const std::string&) { seed_set = true; });

    std::string forced_mode;
    for (const char* sub : {"attack", "mshr-report", "heatmap", "sweep-T"}) {
        CLI::App* s = app.add_subcommand(sub, std::string("run in ") + sub + " mode");
        s->fallthrough();  // lets --config etc. appear after the subcommand
        s->callback([&forced_mode, sub] { forced_mode = sub; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        pcgsim::ExperimentConfig cfg = pcgsim::load_config_file(config_path);
        if (!forced_mode.empty()) cfg.mode = forced_mode;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;

        pcgsim::ExperimentResult res = pcgsim::run_experiment(cfg);
        print_summary(res, cfg.out_dir);
        if (check && !res.checks_ok) return 1;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
