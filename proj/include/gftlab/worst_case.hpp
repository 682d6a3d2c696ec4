#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gftlab/distribution.hpp"
#include "gftlab/errors.hpp"
#include "gftlab/pricing.hpp"

// Extremal instances and the normalization/discretization pipeline that
// reduces a general value distribution to the integer-grid form the walk
// analysis consumes.

namespace gftlab {

// Binary instance {1, 2c} on which the adversarial strategy's bad-price
// probability is exactly delta/c: the high price 2c earns welfare exactly
// delta while its empirical revenue reaches c with probability
// (delta/2c) * (2c/c) = delta/c. Needs 2c > 1 so the high value sits above 1.
inline DiscreteDistribution tight_instance(double delta, double c) {
    if (!(c > 0.0 && c <= 1.0)) throw InvalidParameters("tight_instance needs c in (0, 1]");
    if (!(delta > 0.0 && delta <= c)) throw InvalidParameters("tight_instance needs 0 < delta <= c");
    if (!(2.0 * c > 1.0))
        throw DegenerateInstance("tight_instance needs 2c > 1, otherwise the high value is not above 1");
    const double high_mass = delta / (2.0 * c);
    return DiscreteDistribution({{1.0, 1.0 - high_mass}, {2.0 * c, high_mass}});
}

// Binary instance {1, M^2} whose optimal revenue is M while any single-sample
// price earns expected revenue below 2: revenue learning needs many samples.
inline DiscreteDistribution revenue_gap_instance(double M) {
    if (!(M > 1.0) || !std::isfinite(M)) throw InvalidParameters("revenue_gap_instance needs M > 1");
    return DiscreteDistribution({{1.0, 1.0 - 1.0 / M}, {M * M, 1.0 / M}});
}

// Equal-revenue staircase with sparse high-value towers. Support:
//   * base atom at 1,
//   * a geometric grid 2, 2r, 2r^2, ... up to M0 carrying the equal-revenue
//     tail Pr[v >= p] = 1/(2p) (each grid price earns revenue 1/2),
//   * m tower atoms T_1 < ... < T_m with Pr[v >= T_i] = (1 - eps)/T_i
//     (each tower price earns revenue 1 - eps), T_i >= 100 * T_{i-1}.
// Every price earns revenue at most 1 and price 1 earns exactly 1, while the
// welfare at price 1 grows like ln(M0)/2: near-optimal revenue is compatible
// with far-from-optimal welfare.
inline DiscreteDistribution welfare_gap_instance(double M0, int m, double eps,
                                                 double grid_ratio = 1.1) {
    if (!(M0 > 2.0) || !std::isfinite(M0)) throw InvalidParameters("welfare_gap_instance needs M0 > 2");
    if (m < 0 || m > 8) throw InvalidParameters("welfare_gap_instance needs 0 <= m <= 8");
    if (!(eps > 0.0 && eps < 0.01)) throw InvalidParameters("welfare_gap_instance needs eps in (0, 0.01)");
    if (!(grid_ratio > 1.0) || !std::isfinite(grid_ratio))
        throw InvalidParameters("welfare_gap_instance needs grid_ratio > 1");

    std::vector<double> grid{2.0};
    while (grid.back() * grid_ratio <= M0 * (1.0 + 1e-12)) grid.push_back(grid.back() * grid_ratio);

    std::vector<double> towers;
    double t = M0;
    for (int i = 0; i < m; ++i) {
        t = std::max(t * t, 100.0 * t);
        if (!std::isfinite(t)) throw InvalidParameters("welfare_gap_instance towers overflow");
        towers.push_back(t);
    }

    std::vector<Atom> atoms;
    atoms.push_back({1.0, 1.0 - 0.5 / grid.front()});
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double tail_here = 0.5 / grid[j];
        const double tail_next =
            j + 1 < grid.size() ? 0.5 / grid[j + 1]
                                : (towers.empty() ? 0.0 : (1.0 - eps) / towers.front());
        if (!(tail_here > tail_next))
            throw InvalidParameters("welfare_gap_instance tail must decrease along the grid");
        atoms.push_back({grid[j], tail_here - tail_next});
    }
    for (std::size_t i = 0; i < towers.size(); ++i) {
        const double tail_here = (1.0 - eps) / towers[i];
        const double tail_next = i + 1 < towers.size() ? (1.0 - eps) / towers[i + 1] : 0.0;
        atoms.push_back({towers[i], tail_here - tail_next});
    }
    DiscreteDistribution dist(std::move(atoms));

    // Loud construction-time checks of the revenue profile.
    if (std::abs(revenue(Distribution{dist}, 1.0) - 1.0) > 1e-9)
        throw InvalidParameters("welfare_gap_instance: revenue at price 1 must be 1");
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.value(i) * dist.ccdf(dist.value(i)) > 1.0 + 1e-9)
            throw InvalidParameters("welfare_gap_instance: revenue above 1 at a support price");
    }
    return dist;
}

// Rescale so the optimal (lowest-maximizer) price moves to 1. Composed with
// condition_at_least(., 1) when downstream analysis needs no mass below 1.
inline DiscreteDistribution normalize(const DiscreteDistribution& d) {
    const PriceQuote opt = optimal_price(Distribution{d}, 0.0);
    if (!(opt.profit > 0.0)) throw ZeroRevenue("normalize needs a strictly positive optimal revenue");
    return rescale(d, 1.0 / opt.price);
}

struct BadPriceThreshold {
    std::size_t index = 0;
    double value = 0.0;
};

// Lowest support index whose welfare E[v * 1{v >= value}] is at most delta;
// empty when even the top value's welfare exceeds delta.
inline std::optional<BadPriceThreshold> bad_price_threshold(const DiscreteDistribution& d,
                                                            double delta) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.tail_expectation(d.value(i)) <= delta) return BadPriceThreshold{i, d.value(i)};
    }
    return std::nullopt;
}

struct Discretized {
    DiscreteDistribution dist;
    double tau = 0.0;  // collapse threshold: highest support value with welfare above delta
};

// Coarsen a normalized distribution: mass at values <= tau collapses to an
// atom at 1, and mass in (tau + (j-1)*eps, tau + j*eps] moves UP to
// tau + j*eps. tau is the last support value whose welfare still exceeds
// delta, so the supported branch requires welfare(tau) > delta while some
// support value has welfare <= delta. Moving mass up can only raise any
// empirical revenue along a coupled sample stream.
inline Discretized discretize(const DiscreteDistribution& d, double eps, double delta) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParameters("discretize needs eps > 0");
    if (!(delta > 0.0)) throw InvalidParameters("discretize needs delta > 0");
    if (std::abs(d.min_value() - 1.0) > 1e-9)
        throw InvalidParameters("discretize needs a normalized distribution with minimum value 1");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.value(i) * d.ccdf(d.value(i)) > 1.0 + 1e-9)
            throw InvalidParameters(
                "discretize needs a normalized distribution with optimal revenue 1 at price 1");
    }
    const auto bad = bad_price_threshold(d, delta);
    if (!bad) throw InvalidParameters("discretize needs some support value with welfare <= delta");
    if (bad->index == 0)
        throw BranchUnsupported(
            "discretize handles only the branch where welfare at the minimum value exceeds delta");
    const double tau = d.value(bad->index - 1);

    std::map<double, double> rounded;  // grid value -> mass
    rounded[1.0] = d.cdf(tau);
    for (std::size_t i = bad->index; i < d.size(); ++i) {
        const double over = (d.value(i) - tau) / eps;
        double steps = std::ceil(over - 1e-9);
        if (steps < 1.0) steps = 1.0;
        rounded[tau + steps * eps] += d.prob(i);
    }
    std::vector<Atom> atoms;
    atoms.reserve(rounded.size());
    for (const auto& [value, mass] : rounded) atoms.push_back({value, mass});
    return {DiscreteDistribution(std::move(atoms)), tau};
}

// Push every support value above 1 up to the next integer multiple of c
// (values already on the grid stay put); masses unchanged, colliding values
// merged. Along a coupled stream this never lowers any empirical revenue.
inline DiscreteDistribution round_up_to_c_grid(const DiscreteDistribution& d, double c) {
    if (!(c > 0.0 && c <= 1.0)) throw InvalidParameters("round_up_to_c_grid needs c in (0, 1]");
    if (std::abs(d.min_value() - 1.0) > 1e-9)
        throw InvalidParameters("round_up_to_c_grid needs a normalized distribution with minimum value 1");
    std::map<double, double> merged;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double v = d.value(i);
        if (i == 0) {
            merged[v] += d.prob(i);
            continue;
        }
        const double ratio = v / c;
        const double nearest = std::round(ratio);
        const double steps =
            std::abs(ratio - nearest) <= 1e-9 ? nearest : std::ceil(ratio);
        merged[steps * c] += d.prob(i);
    }
    std::vector<Atom> atoms;
    atoms.reserve(merged.size());
    for (const auto& [value, mass] : merged) atoms.push_back({value, mass});
    return DiscreteDistribution(std::move(atoms));
}

}  // namespace gftlab
