#pragma once

#include <algorithm>
#include <cstdint>
#include <variant>

#include "gftlab/distribution.hpp"
#include "gftlab/errors.hpp"
#include "gftlab/parallel.hpp"
#include "gftlab/pricing.hpp"
#include "gftlab/rng.hpp"

// Bilateral-trade mechanisms. A seller with private cost and a buyer with
// private value trade at a posted price r: the trade happens iff the buyer's
// value is at least r and (for buyer-posted prices) the seller's cost is at
// most r. Gains from trade (GFT) = value - cost whenever trade happens.

namespace gftlab {

struct TradeInstance {
    Distribution seller_dist;  // seller's cost distribution
    Distribution buyer_dist;   // buyer's value distribution
};

struct MechanismResult {
    double gft = 0.0;
    double agent_profit = 0.0;          // profit of the side posting the price
    double counterpart_utility = 0.0;   // surplus of the accepting side
    double std_error = 0.0;             // stderr of gft; 0 for exact evaluation
};

// Substream roles inside one trial, so the three draws of a trial never
// collide and stay identical across strategy variations.
inline constexpr std::uint64_t kRoleSellerDraw = 0;
inline constexpr std::uint64_t kRoleStrategy = 1;
inline constexpr std::uint64_t kRoleBuyerDraw = 2;

// ---- first best ----

// E[(vb - vs) * 1{vb > vs}]: total surplus of always trading when profitable.
// Exact closed forms exist when either side is discrete/point (sum of exact
// one-sided expectations) and for uniform x uniform.
inline double first_best_exact(const TradeInstance& inst) {
    DiscreteDistribution storage({{0.0, 1.0}});
    if (const auto* sd = try_discrete(inst.seller_dist, storage)) {
        double total = 0.0;
        for (std::size_t i = 0; i < sd->size(); ++i) {
            const double s = sd->value(i);
            // atom of the buyer exactly at s contributes zero either way
            total += sd->prob(i) *
                     (tail_expectation(inst.buyer_dist, s) - s * ccdf(inst.buyer_dist, s));
        }
        return total;
    }
    if (const auto* bd = try_discrete(inst.buyer_dist, storage)) {
        double total = 0.0;
        for (std::size_t i = 0; i < bd->size(); ++i) {
            const double b = bd->value(i);
            total += bd->prob(i) *
                     (b * cdf(inst.seller_dist, b) - head_expectation(inst.seller_dist, b));
        }
        return total;
    }
    const auto* su = std::get_if<Uniform>(&inst.seller_dist);
    const auto* bu = std::get_if<Uniform>(&inst.buyer_dist);
    if (su && bu) {
        // Integrate E[(y - X)+] for X ~ U[a,b] over y ~ U[c,d]:
        //   (y-a)^2 / (2(b-a)) on (a, b],   y - (a+b)/2 above b.
        const double a = su->lo, b = su->hi, c = bu->lo, d = bu->hi;
        double integral = 0.0;
        const double q_lo = std::max(c, a), q_hi = std::min(d, b);
        if (q_hi > q_lo) {
            const auto cube = [a](double y) { return (y - a) * (y - a) * (y - a); };
            integral += (cube(q_hi) - cube(q_lo)) / (6.0 * (b - a));
        }
        const double l_lo = std::max(c, b);
        if (d > l_lo) {
            const double mid = 0.5 * (a + b);
            integral += 0.5 * (d * d - l_lo * l_lo) - mid * (d - l_lo);
        }
        return integral / (d - c);
    }
    throw UnsupportedExactPair("no exact first-best formula for this distribution pair");
}

inline Estimate first_best_mc(const TradeInstance& inst, std::int64_t trials, std::uint64_t seed,
                              int threads = 0) {
    if (trials < 1) throw InvalidParameters("first_best_mc needs trials >= 1");
    return mc_mean(trials, threads, [&](std::int64_t trial) -> double {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(trial));
        const double vs = quantile(inst.seller_dist, uniform_at(derive_seed(ts, kRoleSellerDraw), 0));
        const double vb = quantile(inst.buyer_dist, uniform_at(derive_seed(ts, kRoleBuyerDraw), 0));
        return vb > vs ? vb - vs : 0.0;
    });
}

// ---- full-information pricing mechanisms ----

// Seller pricing: the seller observes cost vs and posts the exact optimal
// price against the buyer's distribution; the buyer accepts iff vb >= r.
// Exact mode iterates the seller support (seller must be discrete or point;
// the buyer side only needs closed-form expectations).
inline MechanismResult seller_pricing_exact(const TradeInstance& inst) {
    DiscreteDistribution storage({{0.0, 1.0}});
    const auto* sd = try_discrete(inst.seller_dist, storage);
    if (!sd) throw UnsupportedExactPair("exact seller pricing needs a discrete seller distribution");
    MechanismResult out;
    for (std::size_t i = 0; i < sd->size(); ++i) {
        const double vs = sd->value(i);
        const double ps = sd->prob(i);
        const double r = optimal_price(inst.buyer_dist, vs).price;  // sentinel trades never
        const double accept = ccdf(inst.buyer_dist, r);
        const double buyer_mass = tail_expectation(inst.buyer_dist, r);
        out.gft += ps * (buyer_mass - vs * accept);
        out.agent_profit += ps * (r - vs) * accept;
        out.counterpart_utility += ps * (buyer_mass - r * accept);
    }
    return out;
}

inline MechanismResult seller_pricing_mc(const TradeInstance& inst, std::int64_t trials,
                                         std::uint64_t seed, int threads = 0) {
    if (trials < 1) throw InvalidParameters("seller_pricing_mc needs trials >= 1");
    auto est = mc_mean_vec(trials, 3, threads, [&](std::int64_t trial, double* out) {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(trial));
        const double vs = quantile(inst.seller_dist, uniform_at(derive_seed(ts, kRoleSellerDraw), 0));
        const double vb = quantile(inst.buyer_dist, uniform_at(derive_seed(ts, kRoleBuyerDraw), 0));
        const double r = optimal_price(inst.buyer_dist, vs).price;
        const bool trade = vb >= r;
        out[0] = trade ? vb - vs : 0.0;
        out[1] = trade ? r - vs : 0.0;
        out[2] = trade ? vb - r : 0.0;
    });
    return {est[0].value, est[1].value, est[2].value, est[0].std_error};
}

// Buyer pricing mirror: buyer observes value vb, posts the optimal price
// against the seller's cost distribution; the seller accepts iff vs <= r.
inline MechanismResult buyer_pricing_exact(const TradeInstance& inst) {
    DiscreteDistribution storage({{0.0, 1.0}});
    const auto* bd = try_discrete(inst.buyer_dist, storage);
    if (!bd) throw UnsupportedExactPair("exact buyer pricing needs a discrete buyer distribution");
    MechanismResult out;
    for (std::size_t i = 0; i < bd->size(); ++i) {
        const double vb = bd->value(i);
        const double pb = bd->prob(i);
        const double r = buyer_optimal_price(inst.seller_dist, vb).price;
        const double accept = cdf(inst.seller_dist, r);
        const double seller_mass = head_expectation(inst.seller_dist, r);
        out.gft += pb * (vb * accept - seller_mass);
        out.agent_profit += pb * (vb - r) * accept;
        out.counterpart_utility += pb * (r * accept - seller_mass);
    }
    return out;
}

inline MechanismResult buyer_pricing_mc(const TradeInstance& inst, std::int64_t trials,
                                        std::uint64_t seed, int threads = 0) {
    if (trials < 1) throw InvalidParameters("buyer_pricing_mc needs trials >= 1");
    auto est = mc_mean_vec(trials, 3, threads, [&](std::int64_t trial, double* out) {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(trial));
        const double vs = quantile(inst.seller_dist, uniform_at(derive_seed(ts, kRoleSellerDraw), 0));
        const double vb = quantile(inst.buyer_dist, uniform_at(derive_seed(ts, kRoleBuyerDraw), 0));
        const double r = buyer_optimal_price(inst.seller_dist, vb).price;
        const bool trade = vs <= r;
        out[0] = trade ? vb - vs : 0.0;
        out[1] = trade ? vb - r : 0.0;
        out[2] = trade ? r - vs : 0.0;
    });
    return {est[0].value, est[1].value, est[2].value, est[0].std_error};
}

// ---- sample-based (limited-information) pricing ----

// Expected GFT when the seller prices via the fixed-k empirical strategy
// using samples from the buyer's distribution. Trials whose strategy hits the
// draw cap record 0 GFT and stay in the denominator.
inline Estimate sample_based_seller_gft(const TradeInstance& inst, const FixedK& spec,
                                        std::int64_t trials, std::uint64_t seed,
                                        int threads = 0) {
    if (trials < 1) throw InvalidParameters("sample_based_seller_gft needs trials >= 1");
    return mc_mean(trials, threads, [&](std::int64_t trial) -> double {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(trial));
        const double vs = quantile(inst.seller_dist, uniform_at(derive_seed(ts, kRoleSellerDraw), 0));
        SampleStream stream(inst.buyer_dist, derive_seed(ts, kRoleStrategy));
        double price = 0.0;
        try {
            price = run_fixed_k(stream, vs, spec).price;
        } catch (const SampleCapExceeded&) {
            return 0.0;
        }
        const double vb = quantile(inst.buyer_dist, uniform_at(derive_seed(ts, kRoleBuyerDraw), 0));
        return vb >= price ? vb - vs : 0.0;
    });
}

// Buyer mirror: the buyer prices via the fixed-k empirical strategy using
// samples from the seller's cost distribution.
inline Estimate sample_based_buyer_gft(const TradeInstance& inst, const FixedK& spec,
                                       std::int64_t trials, std::uint64_t seed,
                                       int threads = 0) {
    if (trials < 1) throw InvalidParameters("sample_based_buyer_gft needs trials >= 1");
    return mc_mean(trials, threads, [&](std::int64_t trial) -> double {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(trial));
        const double vb = quantile(inst.buyer_dist, uniform_at(derive_seed(ts, kRoleBuyerDraw), 0));
        SampleStream stream(inst.seller_dist, derive_seed(ts, kRoleStrategy));
        double price = 0.0;
        try {
            price = run_fixed_k_buyer(stream, vb, spec).price;
        } catch (const SampleCapExceeded&) {
            return 0.0;
        }
        const double vs = quantile(inst.seller_dist, uniform_at(derive_seed(ts, kRoleSellerDraw), 0));
        return vs <= price ? vb - vs : 0.0;
    });
}

}  // namespace gftlab
