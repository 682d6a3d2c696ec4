#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gftlab/battery.hpp"
#include "gftlab/pricing.hpp"
#include "gftlab/worst_case.hpp"

using namespace gftlab;

TEST_CASE("tight instance puts exactly delta of welfare on the bad price", "[worst-case]") {
    const DiscreteDistribution unit = tight_instance(0.5, 1.0);
    REQUIRE(unit.size() == 2);
    CHECK(unit.value(0) == 1.0);
    CHECK(unit.prob(0) == 0.75);
    CHECK(unit.value(1) == 2.0);
    CHECK(unit.prob(1) == 0.25);
    CHECK(unit.tail_expectation(2.0) == Catch::Approx(0.5).epsilon(1e-14));
    // Price 1 earns the optimal revenue 1; the bad price 2c earns only delta.
    CHECK(2.0 * unit.ccdf(2.0) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(optimal_price(Distribution{unit}, 0.0).profit == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(optimal_price(Distribution{unit}, 0.0).price == 1.0);

    const DiscreteDistribution scaled = tight_instance(0.3, 0.6);
    CHECK(scaled.value(1) == Catch::Approx(1.2).epsilon(1e-14));
    CHECK(scaled.prob(1) == Catch::Approx(0.25).epsilon(1e-14));
    CHECK(scaled.tail_expectation(scaled.value(1)) == Catch::Approx(0.3).epsilon(1e-14));

    CHECK_THROWS_AS(tight_instance(0.2, 0.4), DegenerateInstance);  // 2c <= 1
    CHECK_THROWS_AS(tight_instance(0.0, 1.0), InvalidParameters);
    CHECK_THROWS_AS(tight_instance(2.1, 1.0), InvalidParameters);   // mass above 1
}

TEST_CASE("revenue gap instance separates one sample from optimal", "[worst-case]") {
    const DiscreteDistribution d = revenue_gap_instance(10.0);
    REQUIRE(d.size() == 2);
    CHECK(d.value(0) == 1.0);
    CHECK(d.prob(0) == Catch::Approx(0.9).epsilon(1e-14));
    CHECK(d.value(1) == 100.0);
    CHECK(d.prob(1) == Catch::Approx(0.1).epsilon(1e-14));
    CHECK(optimal_price(Distribution{d}, 0.0).profit == Catch::Approx(10.0).epsilon(1e-14));

    double k1 = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) k1 += d.prob(i) * d.value(i) * d.ccdf(d.value(i));
    CHECK(k1 == Catch::Approx(1.9).epsilon(1e-14));
    CHECK(10.0 / k1 >= 5.0);

    CHECK_THROWS_AS(revenue_gap_instance(1.0), InvalidParameters);
}

TEST_CASE("welfare gap instance keeps revenue flat at one while welfare grows", "[worst-case]") {
    const DiscreteDistribution d = welfare_gap_instance(64.0, 3, 0.001);
    CHECK(d.min_value() == 1.0);
    // Revenue is 1 at price 1 and never exceeds it anywhere.
    CHECK(1.0 * d.ccdf(1.0) == Catch::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(d.value(i) * d.ccdf(d.value(i)) <= 1.0 + 1e-9);
    // Towers: each is at least the square and at least 100x its predecessor,
    // and each earns revenue 1 - eps.
    double tower = 64.0;
    for (int j = 0; j < 3; ++j) {
        tower = std::max(tower * tower, 100.0 * tower);
        CHECK(tower * d.ccdf(tower) == Catch::Approx(1.0 - 0.001).epsilon(1e-9));
    }
    // Log welfare from the geometric part.
    CHECK(d.mean() >= 0.5 * std::log(64.0 / 2.0) - 1.0);

    // m = 0 keeps only the base and the geometric grid.
    const DiscreteDistribution flat = welfare_gap_instance(16.0, 0, 0.001);
    CHECK(flat.max_value() <= 16.0 * (1.0 + 1e-9));

    CHECK_THROWS_AS(welfare_gap_instance(16.0, -1, 0.001), InvalidParameters);
    CHECK_THROWS_AS(welfare_gap_instance(16.0, 9, 0.001), InvalidParameters);
    CHECK_THROWS_AS(welfare_gap_instance(16.0, 3, 0.02), InvalidParameters);  // eps too big
    CHECK_THROWS_AS(welfare_gap_instance(16.0, 3, 0.001, 1.0), InvalidParameters);
    CHECK_THROWS_AS(welfare_gap_instance(1.5, 3, 0.001), InvalidParameters);  // M0 < 2
}

TEST_CASE("normalize rescales optimal revenue to one", "[worst-case]") {
    const DiscreteDistribution d({{2.0, 0.5}, {4.0, 0.5}});
    const DiscreteDistribution n = normalize(d);
    CHECK(n.value(0) == 1.0);
    CHECK(n.value(1) == 2.0);
    CHECK(optimal_price(Distribution{n}, 0.0).profit == Catch::Approx(1.0).epsilon(1e-14));
    // Idempotent on fixed points.
    const DiscreteDistribution nn = normalize(n);
    CHECK(nn.value(0) == n.value(0));
    CHECK(nn.value(1) == n.value(1));
    CHECK_THROWS_AS(normalize(DiscreteDistribution({{0.0, 1.0}})), ZeroRevenue);
}

TEST_CASE("bad price threshold finds the lowest delta-bad support index", "[worst-case]") {
    const DiscreteDistribution d({{1.0, 0.5}, {2.0, 0.3}, {4.0, 0.2}});
    // Welfare tails: 1.9, 1.4, 0.8.
    const auto at1 = bad_price_threshold(d, 1.0);
    REQUIRE(at1.has_value());
    CHECK(at1->index == 2);
    CHECK(at1->value == 4.0);

    const auto at2 = bad_price_threshold(d, 2.0);
    REQUIRE(at2.has_value());
    CHECK(at2->index == 0);
    CHECK(at2->value == 1.0);

    CHECK_FALSE(bad_price_threshold(d, 0.5).has_value());
}

TEST_CASE("discretize rounds bad values onto an epsilon grid above tau", "[worst-case]") {
    // Welfare tails: 1.705 at 1, 1.105 at 2.2, 0.775 at 3.1 -> with delta 1
    // the first bad value is 3.1 and tau is its predecessor 2.2. Revenue stays
    // at most 1 everywhere (0.88 at 2.2, 0.775 at 3.1).
    const DiscreteDistribution d({{1.0, 0.6}, {2.2, 0.15}, {3.1, 0.25}});
    const Discretized result = discretize(d, 0.5, 1.0);
    CHECK(result.tau == Catch::Approx(2.2).epsilon(1e-14));
    REQUIRE(result.dist.size() == 2);
    CHECK(result.dist.value(0) == 1.0);
    CHECK(result.dist.prob(0) == Catch::Approx(0.75).epsilon(1e-14));
    CHECK(result.dist.value(1) == Catch::Approx(3.2).epsilon(1e-14));
    CHECK(result.dist.prob(1) == Catch::Approx(0.25).epsilon(1e-14));

    // No bad value at all: nothing to discretize around.
    CHECK_THROWS_AS(discretize(d, 0.5, 0.1), InvalidParameters);
    // Every value bad: the construction needs a good prefix.
    CHECK_THROWS_AS(discretize(d, 0.5, 5.0), BranchUnsupported);
    // Preconditions: minimum value 1 and revenue at most 1 everywhere.
    CHECK_THROWS_AS(discretize(DiscreteDistribution({{2.0, 1.0}}), 0.5, 1.0), InvalidParameters);
    CHECK_THROWS_AS(discretize(DiscreteDistribution({{1.0, 0.5}, {4.0, 0.5}}), 0.5, 1.0),
                    InvalidParameters);
}

TEST_CASE("discretize admits a monotone sample coupling", "[worst-case]") {
    // Sampling the output at quantile u is the rounded image of sampling the
    // input at the same u: values at most tau collapse to 1, values above
    // move up to the next epsilon step.
    int instances_exercised = 0;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const DiscreteDistribution d = random_normalized_instance(derive_seed(4242, s));
        const double eps = 0.25;
        const double delta = 0.35;
        Discretized out{DiscreteDistribution({{1.0, 1.0}}), 0.0};
        try {
            out = discretize(d, eps, delta);
        } catch (const Error&) {
            continue;  // instances without a usable bad threshold are fine
        }
        ++instances_exercised;
        int checked = 0;
        for (int ui = 0; ui < 200; ++ui) {
            const double u = uniform_at(derive_seed(4343, s), ui);
            bool near_boundary = false;
            for (std::size_t j = 0; j + 1 < d.size(); ++j)
                near_boundary = near_boundary || std::abs(d.cdf(d.value(j)) - u) < 1e-9;
            if (near_boundary) continue;
            const double v = d.quantile(u);
            const double mapped =
                v <= out.tau ? 1.0
                             : out.tau + eps * std::ceil((v - out.tau) / eps - 1e-9);
            CHECK(out.dist.quantile(u) == Catch::Approx(mapped).epsilon(1e-12));
            ++checked;
        }
        CHECK(checked > 150);
    }
    CHECK(instances_exercised >= 3);
}

TEST_CASE("rounding up to the c grid merges and snaps", "[worst-case]") {
    const DiscreteDistribution d({{1.0, 0.5}, {2.3, 0.5}});
    const DiscreteDistribution up = round_up_to_c_grid(d, 0.5);
    REQUIRE(up.size() == 2);
    CHECK(up.value(0) == 1.0);
    CHECK(up.value(1) == 2.5);

    // Values within 1e-9 of a grid point snap instead of jumping a full step.
    const DiscreteDistribution snap =
        round_up_to_c_grid(DiscreteDistribution({{1.0, 0.5}, {2.0 - 1e-10, 0.5}}), 0.5);
    CHECK(snap.value(1) == 2.0);

    // Collisions merge their masses.
    const DiscreteDistribution merged =
        round_up_to_c_grid(DiscreteDistribution({{1.0, 0.4}, {2.1, 0.3}, {2.4, 0.3}}), 0.5);
    REQUIRE(merged.size() == 2);
    CHECK(merged.value(1) == 2.5);
    CHECK(merged.prob(1) == Catch::Approx(0.6).epsilon(1e-14));

    CHECK_THROWS_AS(round_up_to_c_grid(d, 0.0), InvalidParameters);
    CHECK_THROWS_AS(round_up_to_c_grid(d, 1.5), InvalidParameters);
    CHECK_THROWS_AS(round_up_to_c_grid(DiscreteDistribution({{2.0, 1.0}}), 0.5), InvalidParameters);
}

TEST_CASE("rounding up at most doubles welfare at every grid tail", "[worst-case]") {
    // Each value moves up by less than c <= 1 <= value, so it at most doubles.
    // The tail at a grid value g in the output collects exactly the input
    // atoms above g - c, so that is the welfare it must stay within twice of.
    for (std::uint64_t s = 0; s < 15; ++s) {
        const DiscreteDistribution d = random_normalized_instance(derive_seed(5252, s));
        for (double c : {1.0, 0.5, 0.25}) {
            const DiscreteDistribution up = round_up_to_c_grid(d, c);
            CHECK(up.mean() <= 2.0 * d.mean() + 1e-12);
            for (std::size_t j = 0; j < up.size(); ++j) {
                const double g = up.value(j);
                double preimage_welfare = 0.0;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    if (d.value(i) > g - c - c * 1e-8)
                        preimage_welfare += d.value(i) * d.prob(i);
                }
                CHECK(up.tail_expectation(g) <= 2.0 * preimage_welfare + 1e-12);
            }
        }
    }
}

TEST_CASE("composed pipeline keeps adversarial preconditions intact", "[worst-case]") {
    // normalize -> condition at 1 -> round up: the shape every sampling
    // argument runs through before the walk analysis applies.
    const DiscreteDistribution raw({{1.0, 0.5}, {2.3, 0.3}, {4.1, 0.2}});
    const DiscreteDistribution normalized = normalize(raw);  // optimal price 2.3
    CHECK(normalized.max_value() == Catch::Approx(4.1 / 2.3).epsilon(1e-14));
    const DiscreteDistribution conditioned = condition_at_least(normalized, 1.0);
    REQUIRE(conditioned.size() == 2);
    CHECK(conditioned.prob(0) == Catch::Approx(0.6).epsilon(1e-14));
    const DiscreteDistribution gridded = round_up_to_c_grid(conditioned, 0.5);
    CHECK(gridded.min_value() == 1.0);
    CHECK(gridded.value(1) == 2.0);  // 4.1/2.3 = 1.78... rounds up to the grid
    for (std::size_t j = 1; j < gridded.size(); ++j) {
        const double ratio = gridded.value(j) / 0.5;
        CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
    }
}
