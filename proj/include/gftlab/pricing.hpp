#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gftlab/distribution.hpp"
#include "gftlab/errors.hpp"

// Posted-price optimization, exact and empirical, for both market sides.
//
// Conventions used throughout (and documented in the README):
//  * a buyer accepts price r iff their value v >= r (atom inclusive);
//  * a seller accepts price r iff their cost v <= r (atom inclusive);
//  * every argmax tie is broken at the LOWEST price;
//  * when no price earns a strictly positive profit/utility, a no-trade
//    sentinel outside the support is returned (above it for seller prices,
//    below it for buyer prices) with profit 0.

namespace gftlab {

// Absolute slack for empirical-optimality comparisons, so exact ties computed
// in different orders are not rejected.
inline constexpr double kCeoTolerance = 1e-12;

// Hard cap on draws for strategies that must wait for a qualifying sample.
inline constexpr std::int64_t kSampleCap = 1'000'000;

struct PriceQuote {
    double price = 0.0;
    double profit = 0.0;         // utility, for buyer-side quotes
    std::int64_t samples_used = 0;  // 0 for full-information quotes
};

// Expected revenue p * Pr[v >= p] of posting price p to values drawn from d.
inline double revenue(const Distribution& d, double p) { return p * ccdf(d, p); }

// Expected welfare E[v * 1{v >= p}] released by posting price p.
inline double welfare(const Distribution& d, double p) { return tail_expectation(d, p); }

namespace detail {

inline PriceQuote seller_sentinel(const Distribution& d) {
    return {max_value(d) + 1.0, 0.0, 0};
}

inline PriceQuote buyer_sentinel(const Distribution& d) {
    return {min_value(d) - 1.0, 0.0, 0};
}

}  // namespace detail

// Best seller price against value distribution d at the given cost:
// argmax_p (p - cost) * Pr[v >= p], lowest maximizer, sentinel when no price
// earns a strictly positive profit. For a discrete d the maximum is attained
// at a support value.
inline PriceQuote optimal_price(const Distribution& d, double cost) {
    if (const auto* disc = std::get_if<DiscreteDistribution>(&d)) {
        double best_price = 0.0, best_profit = 0.0;
        bool found = false;
        for (std::size_t i = 0; i < disc->size(); ++i) {
            const double p = disc->value(i);
            const double profit = (p - cost) * disc->ccdf(p);
            if (profit > 0.0 && (!found || profit > best_profit)) {
                best_price = p;
                best_profit = profit;
                found = true;
            }
        }
        if (!found) return detail::seller_sentinel(d);
        return {best_price, best_profit, 0};
    }
    if (const auto* pm = std::get_if<PointMass>(&d)) {
        if (pm->v > cost) return {pm->v, pm->v - cost, 0};
        return detail::seller_sentinel(d);
    }
    if (const auto* u = std::get_if<Uniform>(&d)) {
        // (p - cost)(hi - p)/(hi - lo) is strictly concave on [lo, hi]; prices
        // below lo are dominated by lo.
        const double p = std::clamp(0.5 * (cost + u->hi), u->lo, u->hi);
        const double profit = (p - cost) * ccdf(d, p);
        if (!(profit > 0.0)) return detail::seller_sentinel(d);
        return {p, profit, 0};
    }
    const auto& er = std::get<EqualRevenue>(d);
    // (p - cost) * lo/p is constant (= lo) at cost 0 -- lowest maximizer lo --
    // and strictly increasing on [lo, hi] for cost > 0; prices below lo are
    // dominated by lo.
    const double p = cost > 0.0 ? er.hi : er.lo;
    const double profit = (p - cost) * ccdf(d, p);
    if (!(profit > 0.0)) return detail::seller_sentinel(d);
    return {p, profit, 0};
}

// Best buyer price against cost distribution d at the given value:
// argmax_p (value - p) * Pr[v <= p], lowest maximizer, sentinel below the
// support when no price earns a strictly positive utility.
inline PriceQuote buyer_optimal_price(const Distribution& d, double value) {
    if (const auto* disc = std::get_if<DiscreteDistribution>(&d)) {
        double best_price = 0.0, best_util = 0.0;
        bool found = false;
        for (std::size_t i = 0; i < disc->size(); ++i) {
            const double p = disc->value(i);
            const double util = (value - p) * disc->cdf(p);
            if (util > 0.0 && (!found || util > best_util)) {
                best_price = p;
                best_util = util;
                found = true;
            }
        }
        if (!found) return detail::buyer_sentinel(d);
        return {best_price, best_util, 0};
    }
    if (const auto* pm = std::get_if<PointMass>(&d)) {
        if (value > pm->v) return {pm->v, value - pm->v, 0};
        return detail::buyer_sentinel(d);
    }
    if (const auto* u = std::get_if<Uniform>(&d)) {
        const double p = std::clamp(0.5 * (value + u->lo), u->lo, u->hi);
        const double util = (value - p) * cdf(d, p);
        if (!(util > 0.0)) return detail::buyer_sentinel(d);
        return {p, util, 0};
    }
    const auto& er = std::get<EqualRevenue>(d);
    // Continuous part: (value - p)(1 - lo/p) has stationary point sqrt(lo*value);
    // the atom at hi makes p = hi a separate candidate.
    const double interior = std::clamp(std::sqrt(er.lo * value), er.lo, er.hi);
    double best_price = interior;
    double best_util = (value - interior) * cdf(d, interior);
    const double at_hi = (value - er.hi) * 1.0;
    if (at_hi > best_util) {
        best_price = er.hi;
        best_util = at_hi;
    }
    if (!(best_util > 0.0)) return detail::buyer_sentinel(d);
    return {best_price, best_util, 0};
}

// ---- empirical (sample-based) counterparts ----

// (price - cost) * |{s in samples : s >= price}| / |samples|.
inline double empirical_profit(std::span<const double> samples, double cost, double price) {
    if (samples.empty()) throw EmptySamples("empirical_profit needs at least one sample");
    std::int64_t count = 0;
    for (double s : samples)
        if (s >= price) ++count;
    return (price - cost) * static_cast<double>(count) / static_cast<double>(samples.size());
}

// (value - price) * |{s in samples : s <= price}| / |samples|.
inline double empirical_utility(std::span<const double> samples, double value, double price) {
    if (samples.empty()) throw EmptySamples("empirical_utility needs at least one sample");
    std::int64_t count = 0;
    for (double s : samples)
        if (s <= price) ++count;
    return (value - price) * static_cast<double>(count) / static_cast<double>(samples.size());
}

// Best empirical seller price, searched over the drawn sample values (between
// samples the tail count is constant while price - cost still has room to
// grow, so some sample value always weakly dominates). Requires a sample
// strictly above cost; ties break to the lowest price.
inline PriceQuote empirical_optimal(std::span<const double> samples, double cost) {
    if (samples.empty()) throw EmptySamples("empirical_optimal needs at least one sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.back() > cost))
        throw NoQualifyingSample("empirical_optimal needs a sample strictly above cost");
    const double n = static_cast<double>(sorted.size());
    double best_price = 0.0, best_profit = 0.0;
    bool found = false;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double p = sorted[i];
        const auto count = static_cast<double>(sorted.size() - i);  // samples >= p
        const double profit = (p - cost) * count / n;
        if (profit > 0.0 && (!found || profit > best_profit)) {
            best_price = p;
            best_profit = profit;
            found = true;
        }
        while (i < sorted.size() && sorted[i] == p) ++i;
    }
    return {best_price, best_profit, static_cast<std::int64_t>(sorted.size())};
}

// Buyer mirror: best empirical buyer price over drawn sample values.
// Requires a sample strictly below the buyer's value.
inline PriceQuote empirical_buyer_optimal(std::span<const double> samples, double value) {
    if (samples.empty()) throw EmptySamples("empirical_buyer_optimal needs at least one sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.front() < value))
        throw NoQualifyingSample("empirical_buyer_optimal needs a sample strictly below value");
    const double n = static_cast<double>(sorted.size());
    double best_price = 0.0, best_util = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;  // last of a run
        const double p = sorted[i];
        const auto count = static_cast<double>(i + 1);  // samples <= p
        const double util = (value - p) * count / n;
        if (util > 0.0 && (!found || util > best_util)) {
            best_price = p;
            best_util = util;
            found = true;
        }
    }
    return {best_price, best_util, static_cast<std::int64_t>(sorted.size())};
}

// Does `price` extract at least a c-fraction of the optimal empirical profit?
// Absolute tolerance avoids rejecting exact ties computed in different orders.
inline bool is_c_eo(std::span<const double> samples, double cost, double price, double c) {
    const PriceQuote best = empirical_optimal(samples, cost);
    return empirical_profit(samples, cost, price) >= c * best.profit - kCeoTolerance;
}

// ---- strategies ----

// Draw k samples, price at the empirical optimum. The fixed-k optimizer takes
// the full empirical optimum, so its output is c-EO for every c <= 1.
struct FixedK {
    int k = 1;
    double c = 1.0;
};

// Wait for a moment at which some drawn price is simultaneously c-EO and bad
// for welfare (relative to delta), then post it. Gives up after t_max draws.
struct Adversarial {
    double delta = 0.25;
    int t_max = 1000;
    double c = 1.0;
};

using StrategySpec = std::variant<FixedK, Adversarial>;

// Fixed-k seller strategy. Draws spec.k samples; if none lies strictly above
// cost, keeps drawing until one does (hard cap kSampleCap, SampleCapExceeded
// beyond it); prices at the empirical optimum over everything drawn.
inline PriceQuote run_fixed_k(SampleStream& stream, double cost, const FixedK& spec) {
    if (spec.k < 1) throw InvalidParameters("fixed-k strategy needs k >= 1");
    // A source with no support above cost can never qualify; drawing the full
    // cap to find that out would change nothing observable.
    if (!(max_value(stream.source()) > cost))
        throw SampleCapExceeded("no sample above cost within the draw cap");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(spec.k));
    bool qualified = false;
    for (int i = 0; i < spec.k; ++i) {
        const double s = stream.next();
        qualified = qualified || s > cost;
        samples.push_back(s);
    }
    while (!qualified) {
        if (std::ssize(samples) >= kSampleCap)
            throw SampleCapExceeded("no sample above cost within the draw cap");
        const double s = stream.next();
        qualified = s > cost;
        samples.push_back(s);
    }
    PriceQuote quote = empirical_optimal(samples, cost);
    quote.samples_used = std::ssize(samples);
    return quote;
}

// Fixed-k buyer strategy: mirror image (waits for a sample strictly below the
// buyer's value, prices at the empirical utility optimum).
inline PriceQuote run_fixed_k_buyer(SampleStream& stream, double value, const FixedK& spec) {
    if (spec.k < 1) throw InvalidParameters("fixed-k strategy needs k >= 1");
    // Mirror of the seller-side shortcut: nothing below the value can appear.
    if (!(min_value(stream.source()) < value))
        throw SampleCapExceeded("no sample below value within the draw cap");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(spec.k));
    bool qualified = false;
    for (int i = 0; i < spec.k; ++i) {
        const double s = stream.next();
        qualified = qualified || s < value;
        samples.push_back(s);
    }
    while (!qualified) {
        if (std::ssize(samples) >= kSampleCap)
            throw SampleCapExceeded("no sample below value within the draw cap");
        const double s = stream.next();
        qualified = s < value;
        samples.push_back(s);
    }
    PriceQuote quote = empirical_buyer_optimal(samples, value);
    quote.samples_used = std::ssize(samples);
    return quote;
}

// Result of the adversarial stopping strategy; quote is empty on timeout
// (an expected outcome, not an error).
struct AdversarialResult {
    std::optional<PriceQuote> quote;
    std::int64_t draws = 0;
};

// Adversarial seller strategy. After each draw t = 1..t_max it looks for a
// price r among the drawn sample values such that
//   (a) r is c-EO against the samples so far, and
//   (b) welfare(truth, r) - cost * ccdf(truth, r) < delta * optimal profit
//       (STRICT inequality),
// stopping at the first such t with the lowest qualifying r. Restricting the
// search to drawn values is lossless: moving r up to the next sample value
// keeps condition (b) and only raises the empirical profit.
inline AdversarialResult run_adversarial(SampleStream& stream, double cost,
                                         const Adversarial& spec, const Distribution& truth) {
    if (spec.t_max < 1) throw InvalidParameters("adversarial strategy needs t_max >= 1");
    if (!(spec.c > 0.0 && spec.c <= 1.0))
        throw InvalidParameters("adversarial strategy needs c in (0, 1]");
    const PriceQuote opt = optimal_price(truth, cost);
    if (!(opt.profit > 0.0))
        throw ZeroRevenue("adversarial strategy needs a strictly positive optimal profit");
    const double bad_threshold = spec.delta * opt.profit;

    struct Entry {
        double value;
        std::int64_t count;
        bool bad;
    };
    std::vector<Entry> entries;  // sorted by value
    std::vector<double> suffix;  // counts of samples >= entry value

    for (std::int64_t t = 1; t <= spec.t_max; ++t) {
        const double x = stream.next();
        auto it = std::lower_bound(entries.begin(), entries.end(), x,
                                   [](const Entry& e, double v) { return e.value < v; });
        if (it != entries.end() && it->value == x) {
            ++it->count;
        } else {
            const bool bad =
                tail_expectation(truth, x) - cost * ccdf(truth, x) < bad_threshold;
            entries.insert(it, {x, 1, bad});
        }

        suffix.assign(entries.size(), 0.0);
        double acc = 0.0;
        for (std::size_t i = entries.size(); i-- > 0;) {
            acc += static_cast<double>(entries[i].count);
            suffix[i] = acc;
        }
        const double n = static_cast<double>(t);
        double emp_opt = 0.0;
        for (std::size_t i = 0; i < entries.size(); ++i)
            emp_opt = std::max(emp_opt, (entries[i].value - cost) * suffix[i] / n);
        if (!(emp_opt > 0.0)) continue;  // no sample above cost yet

        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!entries[i].bad) continue;
            const double profit = (entries[i].value - cost) * suffix[i] / n;
            if (profit >= spec.c * emp_opt - kCeoTolerance)
                return {PriceQuote{entries[i].value, profit, t}, t};
        }
    }
    return {std::nullopt, spec.t_max};
}

}  // namespace gftlab
