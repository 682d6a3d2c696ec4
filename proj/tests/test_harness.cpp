#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "gftlab/config.hpp"
#include "gftlab/report.hpp"
#include "gftlab/suites.hpp"

using namespace gftlab;

namespace {

Report tiny_report() {
    Report r;
    r.suite = "demo";
    r.seed = 7;
    r.trials = 100;
    r.wall_time_seconds = 0.125;
    r.rows.push_back({"row-a", "plain anchor", 1.0, 2.0, 0.5, true});
    r.rows.push_back({"row-b", "anchor, with \"quotes\" and, commas", 0.3333333333333333, 0.25, 0.0, false});
    return r;
}

std::string write_temp_config(const std::string& body) {
    const std::string path = "gftlab_test_config.json";
    std::ofstream out(path);
    out << body;
    out.close();
    return path;
}

}  // namespace

TEST_CASE("csv output pins the column layout and escaping", "[report]") {
    const std::string csv = to_csv(tiny_report());
    CHECK(csv.rfind("claim_id,paper_anchor,measured,bound,stderr,pass\n", 0) == 0);
    CHECK(csv.find("row-a,plain anchor,1,2,0.5,true") != std::string::npos);
    // Quoted field with doubled quotes, 17 significant digits on doubles.
    CHECK(csv.find("row-b,\"anchor, with \"\"quotes\"\" and, commas\",0.33333333333333331,0.25,0,false") !=
          std::string::npos);
}

TEST_CASE("json round-trips every field except wall time", "[report]") {
    const Report original = tiny_report();
    const nlohmann::json j = to_json(original);
    CHECK(j["metadata"]["seed"] == 7);
    CHECK(j["metadata"]["trials"] == 100);
    CHECK(j["rows"][0]["stderr"] == 0.5);

    const Report back = report_from_json(j);
    CHECK(back.suite == original.suite);
    CHECK(back.seed == original.seed);
    CHECK(back.trials == original.trials);
    REQUIRE(back.rows.size() == original.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].claim_id == original.rows[i].claim_id);
        CHECK(back.rows[i].paper_anchor == original.rows[i].paper_anchor);
        CHECK(back.rows[i].measured == original.rows[i].measured);
        CHECK(back.rows[i].bound == original.rows[i].bound);
        CHECK(back.rows[i].std_error == original.rows[i].std_error);
        CHECK(back.rows[i].pass == original.rows[i].pass);
    }
    CHECK_FALSE(tiny_report().all_pass());
}

TEST_CASE("config parses every distribution literal", "[config]") {
    const std::string path = write_temp_config(R"({
        "suite": "upper-bound",
        "instances": [
            {"discrete": [[1.0, 0.5], [2.0, 0.5]]},
            {"uniform": [0.0, 1.0]},
            {"point": 1.5},
            {"equal_revenue": [1.0, 8.0]},
            {"tight_instance": [0.5, 1.0]},
            {"revenue_gap_instance": 10.0},
            {"welfare_gap_instance": [16.0, 2, 0.001]}
        ],
        "strategy": {"kind": "adversarial", "delta": 0.25, "T_max": 500},
        "trials": 1234,
        "seed": 99,
        "tolerances": {"freq_slack": 0.02}
    })");
    const ExperimentConfig cfg = load_config(path);
    std::remove(path.c_str());

    REQUIRE(cfg.suite.has_value());
    CHECK(*cfg.suite == "upper-bound");
    REQUIRE(cfg.instances.size() == 7);
    CHECK(is_discrete(cfg.instances[0]));
    CHECK_FALSE(is_discrete(cfg.instances[1]));
    CHECK(max_value(cfg.instances[2]) == 1.5);
    CHECK(max_value(cfg.instances[4]) == 2.0);   // tight instance high value
    CHECK(max_value(cfg.instances[5]) == 100.0); // M^2
    REQUIRE(cfg.strategy.has_value());
    CHECK(cfg.strategy->kind == "adversarial");
    CHECK(cfg.strategy->delta == 0.25);
    CHECK(cfg.strategy->t_max == 500);
    CHECK(cfg.trials == 1234);
    CHECK(cfg.seed == 99);
    CHECK(cfg.tolerances.at("freq_slack") == 0.02);
}

TEST_CASE("config rejects malformed input with located errors", "[config]") {
    CHECK_THROWS_AS(load_config("does-not-exist.json"), IoError);

    const auto expect_config_error = [](const std::string& body) {
        const std::string path = write_temp_config(body);
        CHECK_THROWS_AS(load_config(path), ConfigError);
        std::remove(path.c_str());
    };
    expect_config_error("{ not json");
    expect_config_error(R"({"unknown_key": 1})");
    expect_config_error(R"({"trials": 0})");
    expect_config_error(R"({"T_max": -5})");
    expect_config_error(R"({"instances": [{"discrete": [[1.0, 0.5]]}]})");       // mass != 1
    expect_config_error(R"({"instances": [{"tight_instance": [0.2, 0.4]}]})");   // degenerate
    expect_config_error(R"({"instances": [{"welfare_gap_instance": [16.0, 2.5, 0.001]}]})");
    expect_config_error(R"({"strategy": {"kind": "mystery"}})");
    expect_config_error(R"({"strategy": {"kind": "fixed_k"}})");                 // k required
    expect_config_error(R"({"strategy": {"kind": "adversarial"}})");             // delta required
    expect_config_error(R"({"strategy": {"kind": "fixed_k", "k": 1, "junk": 2}})");
    expect_config_error(R"({"tolerances": {"freq_tol": -1.0}})");
}

TEST_CASE("distribution literals round-trip through to_literal", "[config]") {
    const std::string path = write_temp_config(R"({
        "instances": [
            {"discrete": [[1.0, 0.5], [4.0, 0.5]]},
            {"uniform": [0.25, 2.0]},
            {"point": 3.0},
            {"equal_revenue": [1.0, 4.0]}
        ]
    })");
    const ExperimentConfig cfg = load_config(path);
    std::remove(path.c_str());
    for (const auto& inst : cfg.instances) {
        const Distribution again = parse_distribution(to_literal(inst), "roundtrip");
        CHECK(min_value(again) == min_value(inst));
        CHECK(max_value(again) == max_value(inst));
        for (double x : {0.5, 1.0, 2.5}) CHECK(ccdf(again, x) == ccdf(inst, x));
    }
}

TEST_CASE("suite registry exposes runnable suites", "[suites]") {
    CHECK(suite_registry().size() == 10);
    CHECK(find_suite("tightness") != nullptr);
    CHECK(find_suite("nope") == nullptr);
    CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), ConfigError);

    SuiteOptions opts;
    const Report algebra = run_suite("walk-algebra", opts);
    CHECK(algebra.suite == "walk-algebra");
    CHECK(algebra.seed == kDefaultSeed);
    CHECK(algebra.all_pass());
    CHECK(algebra.wall_time_seconds >= 0.0);

    opts.trials = 2000;
    const Report gap = run_suite("revenue-gap", opts);
    CHECK(gap.all_pass());
    CHECK(gap.trials == 2000);
}

TEST_CASE("suite reports are seed- and thread-stable", "[suites]") {
    SuiteOptions opts;
    opts.trials = 500;
    opts.t_max = 200;

    opts.threads = 1;
    const Report one = run_suite("multi-support", opts);
    opts.threads = 4;
    const Report four = run_suite("multi-support", opts);
    CHECK(to_csv(one) == to_csv(four));

    opts.seed = 555;
    const Report reseeded = run_suite("multi-support", opts);
    CHECK(to_csv(reseeded) != to_csv(four));
}

TEST_CASE("tolerance overrides reach the rows", "[suites]") {
    SuiteOptions opts;
    opts.trials = 300;
    opts.t_max = 50;
    // An absurdly loose tolerance forces every frequency row to pass even at
    // tiny scale, which proves the knob is plumbed through.
    opts.tolerances["freq_tol"] = 10.0;
    const Report loose = run_suite("tightness", opts);
    CHECK(loose.all_pass());
    REQUIRE(!loose.rows.empty());
    CHECK(loose.rows[0].bound == 0.5);
}

TEST_CASE("strategy and instance overrides reshape the tightness suite", "[suites]") {
    SuiteOptions opts;
    opts.trials = 4000;
    opts.t_max = 400;
    StrategyConfig strat;
    strat.kind = "adversarial";
    strat.delta = 0.4;
    strat.c = 0.8;
    opts.strategy = strat;
    const Report custom = run_suite("tightness", opts);
    REQUIRE(custom.rows.size() == 1);
    CHECK(custom.rows[0].bound == Catch::Approx(0.5).epsilon(1e-12));  // delta/c
    CHECK(custom.rows[0].claim_id.find("d0.4") != std::string::npos);
}

TEST_CASE("the combined suite prefixes claim ids", "[suites]") {
    // Scale everything down: this exercises wiring, not statistics.
    SuiteOptions opts;
    opts.trials = 50;
    opts.t_max = 20;
    const Report all = run_suite("all", opts);
    CHECK(all.suite == "all");
    bool saw_prefixed = false;
    for (const auto& row : all.rows)
        saw_prefixed = saw_prefixed || row.claim_id.rfind("revenue-gap/", 0) == 0;
    CHECK(saw_prefixed);
}
