#include <doctest.h>

#include "pcgsim/config.hpp"

#include <string>

using namespace pcgsim;

TEST_CASE("empty document yields the default experiment") {
    ExperimentConfig cfg = parse_config_text("{}");
    CHECK(cfg.mode == "heatmap");
    CHECK(cfg.sim.geom.num_sets == 64);
    CHECK(cfg.sim.geom.num_ways == 4);
    CHECK(cfg.sim.geom.block_size == 64);
    CHECK(cfg.sim.geom.mshr_entries == 4);
    CHECK(cfg.sim.geom.prefetch_queue_capacity == 32);
    CHECK(cfg.sim.l2.num_sets == 256);
    CHECK(cfg.sim.l2.num_ways == 8);
    CHECK(cfg.sim.lat.l1_hit == 3);
    CHECK(cfg.sim.lat.l2_hit == 40);
    CHECK(cfg.sim.lat.memory == 100);
    CHECK(cfg.sim.lat.hit_threshold == 35);
    CHECK(cfg.sim.repl == Replacement::Random);
    CHECK(cfg.sim.prefetcher == PrefetcherKind::None);
    CHECK(cfg.sim.defense == DefenseKind::None);
    CHECK(cfg.sim.pcg.degree == 4);
    CHECK(cfg.sim.pcg.reset_period == 10000);
    CHECK(cfg.sim.dp.max_degree == 10);
    CHECK(cfg.secret == 115);
    CHECK(cfg.rounds == 1);
    CHECK(cfg.sweep_T == std::vector<uint32_t>{1000, 10000, 50000});
}

TEST_CASE("a full document round-trips every field") {
    const char* doc = R"({
        "mode": "attack",
        "seed": 99,
        "out_dir": "results",
        "geometry": {"sets": 32, "ways": 2, "block_size": 32, "mshr_entries": 2,
                     "prefetch_queue_capacity": 8},
        "l2": {"sets": 128, "ways": 4},
        "latency": {"l1_hit": 2, "l2_hit": 20, "memory": 80, "hit_threshold": 10},
        "replacement": "lru",
        "prefetcher": "stride",
        "prefetch_degree": 2,
        "defense": "dp",
        "dp": {"max_degree": 6},
        "attack": "counting",
        "rounds": 7,
        "secret": 200,
        "random_stall": true,
        "victim_prologue_idle": 123,
        "sweep_T": [500, 2000],
        "sweep_rounds": 5,
        "checks": {"expect_recovered": 200},
        "workloads": [{"name": "w", "kind": "sequential", "prefetcher": "next-line"}]
    })";
    ExperimentConfig cfg = parse_config_text(doc);
    CHECK(cfg.mode == "attack");
    CHECK(cfg.seed == 99);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.sim.geom.num_sets == 32);
    CHECK(cfg.sim.geom.num_ways == 2);
    CHECK(cfg.sim.geom.block_size == 32);
    CHECK(cfg.sim.geom.mshr_entries == 2);
    CHECK(cfg.sim.geom.prefetch_queue_capacity == 8);
    CHECK(cfg.sim.l2.num_sets == 128);
    CHECK(cfg.sim.l2.num_ways == 4);
    CHECK(cfg.sim.lat.l2_hit == 20);
    CHECK(cfg.sim.repl == Replacement::Lru);
    CHECK(cfg.sim.prefetcher == PrefetcherKind::Stride);
    CHECK(cfg.sim.prefetch_degree == 2);
    CHECK(cfg.sim.defense == DefenseKind::Dp);
    CHECK(cfg.sim.dp.max_degree == 6);
    CHECK(cfg.attack == "counting");
    CHECK(cfg.rounds == 7);
    CHECK(cfg.secret == 200);
    CHECK(cfg.random_stall);
    CHECK(cfg.victim_prologue_idle == 123);
    CHECK(cfg.sweep_T == std::vector<uint32_t>{500, 2000});
    CHECK(cfg.sweep_rounds == 5);
    REQUIRE(cfg.checks.expect_recovered.has_value());
    CHECK(*cfg.checks.expect_recovered == 200);
    REQUIRE(cfg.workloads.size() == 1);
    CHECK(cfg.workloads[0].kind == "sequential");
    CHECK(cfg.workloads[0].prefetcher == PrefetcherKind::NextLine);
}

TEST_CASE("unknown keys are rejected with the key name") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"bogus": 1})"),
                         doctest::Contains("bogus"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"geometry": {"setz": 64}})"),
                         doctest::Contains("setz"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"pcg": {"windows": 4}})"),
                         doctest::Contains("windows"), std::runtime_error);
}

TEST_CASE("bad enum values name the offending field") {
    CHECK_THROWS(parse_config_text(R"({"replacement": "plru"})"));
    CHECK_THROWS(parse_config_text(R"({"prefetcher": "ghb"})"));
    CHECK_THROWS(parse_config_text(R"({"defense": "partition"})"));
    CHECK_THROWS(parse_config_text(R"({"mode": "fuzz"})"));
    CHECK_THROWS(parse_config_text(R"({"attack": "flush-reload"})"));
}

TEST_CASE("validation guards the latency ordering and ranges") {
    CHECK_THROWS(parse_config_text(R"({"latency": {"hit_threshold": 2}})"));
    CHECK_THROWS(parse_config_text(R"({"latency": {"hit_threshold": 40}})"));
    CHECK_THROWS(parse_config_text(R"({"secret": 256})"));
    CHECK_THROWS(parse_config_text(R"({"rounds": 0})"));
    CHECK_THROWS(parse_config_text(R"({"sweep_T": []})"));
    CHECK_THROWS(parse_config_text(R"({"geometry": {"sets": 48}})"));
    CHECK_THROWS(parse_config_text(R"({"workloads": [{"name": "t", "kind": "trace"}]})"));
}

TEST_CASE("pcg.enabled toggles the defense") {
    ExperimentConfig on = parse_config_text(R"({"pcg": {"enabled": true}})");
    CHECK(on.sim.defense == DefenseKind::Pcg);

    ExperimentConfig off = parse_config_text(R"({"defense": "pcg", "pcg": {"enabled": false}})");
    CHECK(off.sim.defense == DefenseKind::None);

    ExperimentConfig dp = parse_config_text(R"({"defense": "dp", "pcg": {"enabled": false}})");
    CHECK(dp.sim.defense == DefenseKind::Dp);

    ExperimentConfig tuned = parse_config_text(R"({"pcg": {"enabled": true, "reset_period": 1000}})");
    CHECK(tuned.sim.defense == DefenseKind::Pcg);
    CHECK(tuned.sim.pcg.reset_period == 1000);
}
