#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gftlab/distribution.hpp"
#include "gftlab/mechanisms.hpp"
#include "gftlab/rng.hpp"

// Deterministic families of randomized test instances. Every generator is a
// pure function of its seed (counter-addressed draws, no shared state), so a
// battery is reproducible from a single integer.

namespace gftlab {

// Normalized instance: minimum value 1 carrying the full tail, every other
// support value v has revenue v * Pr[x >= v] <= 0.95, so price 1 is the
// unique optimal price with revenue exactly 1.
inline DiscreteDistribution random_normalized_instance(std::uint64_t seed,
                                                       std::size_t min_support = 2,
                                                       std::size_t max_support = 8) {
    std::uint64_t n = 0;
    const auto u = [&] { return uniform_at(seed, n++); };
    const std::size_t span = max_support - min_support + 1;
    const std::size_t size = min_support + static_cast<std::size_t>(bits_at(seed, 1000) % span);

    std::vector<double> values{1.0};
    for (std::size_t j = 1; j < size; ++j) values.push_back(values.back() * (1.25 + 0.95 * u()));

    std::vector<double> tails(size, 1.0);
    for (std::size_t j = 1; j < size; ++j) {
        const double w = u();
        const double shrink = 0.02 + 0.93 * w * w;  // bias toward small tails
        tails[j] = std::min(tails[j - 1], 1.0 / values[j]) * shrink;
    }

    std::vector<Atom> atoms;
    for (std::size_t j = 0; j < size; ++j) {
        const double next = j + 1 < size ? tails[j + 1] : 0.0;
        atoms.push_back({values[j], tails[j] - next});
    }
    return DiscreteDistribution(std::move(atoms));
}

// Normalized instance whose support above 1 lies on the integer multiples of
// c, as the walk reduction requires. Multiples stay small (so first-passage
// events resolve well within a few hundred walk steps) and the revenue ratios
// rho_j = Rev(v_j)/c stay outside (0.8, 1.15): rho is the saturation point of
// the hitting probability min(1, rho), so keeping a margin around 1 keeps
// every event estimate off the slow-convergence knife edge.
inline DiscreteDistribution random_integer_grid_instance(std::uint64_t seed, double c) {
    std::uint64_t n = 0;
    const auto u = [&] { return uniform_at(seed, n++); };
    const std::size_t size = 3 + static_cast<std::size_t>(bits_at(seed, 2000) % 2);  // 3 or 4

    std::vector<std::int64_t> multiples{0};  // index 0 is the base value 1, not on the grid
    std::int64_t m = static_cast<std::int64_t>(std::floor(1.0 / c)) +
                     1 + static_cast<std::int64_t>(std::floor(2.9 * u()));
    for (std::size_t j = 1; j < size; ++j) {
        multiples.push_back(m);
        m *= 4;
    }

    // rho sequence: start subcritical (or, when c allows rho up to 1/c,
    // sometimes supercritical), then decay by a factor in (0, 1) so the tail
    // probabilities q_j = rho_j * c / v_j strictly decrease (v grows 4x while
    // rho shrinks).
    std::vector<double> rho(size, 0.0);
    const bool supercritical_start = c < 0.75 && u() < 0.35;
    rho[1] = supercritical_start ? 1.4 + 0.4 * u() : 0.3 + 0.48 * u();
    for (std::size_t j = 2; j < size; ++j) {
        const double shrink = supercritical_start && j == 2 ? 0.25 + 0.25 * u() : 0.4 + 0.55 * u();
        rho[j] = std::min(rho[j - 1] * shrink, 0.78);
    }

    std::vector<double> values{1.0};
    std::vector<double> tails{1.0};
    for (std::size_t j = 1; j < size; ++j) {
        const double v = c * static_cast<double>(multiples[j]);
        values.push_back(v);
        tails.push_back(rho[j] * c / v);
    }
    std::vector<Atom> atoms;
    for (std::size_t j = 0; j < size; ++j) {
        const double next = j + 1 < size ? tails[j + 1] : 0.0;
        atoms.push_back({values[j], tails[j] - next});
    }
    return DiscreteDistribution(std::move(atoms));
}

// Unconstrained two-sided instance for universal inequalities: overlapping
// seller/buyer supports with arbitrary masses.
inline TradeInstance random_two_sided_instance(std::uint64_t seed) {
    std::uint64_t n = 0;
    const auto u = [&] { return uniform_at(seed, n++); };
    const auto build = [&](std::size_t size, double lo, double step_max) {
        std::vector<Atom> atoms;
        double v = lo + u();
        std::vector<double> weights;
        double total = 0.0;
        for (std::size_t j = 0; j < size; ++j) {
            const double w = 0.1 + 0.9 * u();
            weights.push_back(w);
            total += w;
            atoms.push_back({v, 0.0});
            v += 0.05 + step_max * u();
        }
        for (std::size_t j = 0; j < size; ++j) atoms[j].prob = weights[j] / total;
        return DiscreteDistribution(std::move(atoms));
    };
    const std::size_t ks = 2 + static_cast<std::size_t>(bits_at(seed, 3000) % 3);  // 2..4
    const std::size_t kb = 3 + static_cast<std::size_t>(bits_at(seed, 3001) % 4);  // 3..6
    DiscreteDistribution seller = build(ks, 0.0, 1.0);
    DiscreteDistribution buyer = build(kb, 0.5, 1.5);
    return TradeInstance{Distribution{std::move(seller)}, Distribution{std::move(buyer)}};
}

}  // namespace gftlab
