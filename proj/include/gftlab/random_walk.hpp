#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gftlab/distribution.hpp"
#include "gftlab/errors.hpp"
#include "gftlab/parallel.hpp"
#include "gftlab/rng.hpp"

// Random-walk view of empirical revenue. For a value v1 observed with
// probability p1 (everything else counting as a miss), the running statistic
//   X_t = (v1/c) * |{samples >= v1 among first t}| - t
// moves +$(v1/c - 1)$ on a hit and -1 on a miss, starts at 0, and the
// empirical revenue of v1 reaches c at time t exactly when X_t >= 0 (t >= 1).
// With m = v1/c a positive integer the walk lives on the integer lattice, so
// every comparison below is exact integer arithmetic.

namespace gftlab {

inline constexpr double kIntegerTolerance = 1e-9;

struct BinaryWalkSpec {
    double v1 = 2.0;
    double p1 = 0.25;
    double c = 1.0;
    std::int64_t m = 2;  // v1/c, validated integral

    BinaryWalkSpec(double v1_, double p1_, double c_) : v1(v1_), p1(p1_), c(c_) {
        if (!(v1 > 0.0) || !std::isfinite(v1)) throw InvalidSpec("walk needs v1 > 0");
        if (!(p1 > 0.0 && p1 < 1.0)) throw InvalidSpec("walk needs p1 in (0, 1)");
        if (!(c > 0.0 && c <= 1.0)) throw InvalidSpec("walk needs c in (0, 1]");
        const double ratio = v1 / c;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > kIntegerTolerance || rounded < 1.0)
            throw InvalidSpec("walk needs v1/c to be a positive integer");
        m = static_cast<std::int64_t>(rounded);
        if (p1 * static_cast<double>(m) > 1.0 + kProbTolerance)
            throw InvalidSpec("walk needs p1 * v1/c <= 1");
    }
};

// Probability the walk ever reaches a nonnegative position (t >= 1):
// exactly p1 * v1/c, valid under the constructor's p1 * v1/c <= 1 check.
inline double hitting_prob_closed_form(const BinaryWalkSpec& spec) {
    return spec.p1 * static_cast<double>(spec.m);
}

// Intermediate quantities of the first-passage recursion from position 0:
//   g0 = Pr[walk ever strictly positive] = (p1/(1-p1)) * (v1/c - 1)
//   h0 = Pr[walk returns to 0 before going positive] = 1 - g0
//   f0 = Pr[walk ever >= 0 at t >= 1] = p1 + (1 - p1) * g0
struct WalkClosedForms {
    double g0 = 0.0;
    double h0 = 0.0;
    double f0 = 0.0;
};

inline WalkClosedForms g0_closed_form(const BinaryWalkSpec& spec) {
    WalkClosedForms out;
    out.g0 = spec.p1 / (1.0 - spec.p1) * static_cast<double>(spec.m - 1);
    out.h0 = 1.0 - out.g0;
    out.f0 = spec.p1 + (1.0 - spec.p1) * out.g0;
    return out;
}

// Exact dynamic program: probability of absorption (position >= 0 at some
// t in [1, T]). Alive states are strictly negative positions; truncation at
// horizon T only discards hits after T, so the result underestimates the
// closed form and is nondecreasing in T.
inline double hitting_prob_dp(const BinaryWalkSpec& spec, int T) {
    if (T < 1) throw InvalidParameters("hitting_prob_dp needs T >= 1");
    const double p = spec.p1, q = 1.0 - spec.p1;
    const std::int64_t up = spec.m - 1;
    double absorbed = p;  // first step: 0 + (m-1) >= 0
    std::vector<double> cur(static_cast<std::size_t>(T), 0.0);
    std::vector<double> nxt(static_cast<std::size_t>(T), 0.0);
    cur[0] = q;          // position -1
    std::int64_t depth = 1;  // deepest alive position is -depth
    for (int t = 2; t <= T; ++t) {
        const std::int64_t new_depth = depth + 1;
        std::fill(nxt.begin(), nxt.begin() + static_cast<std::ptrdiff_t>(new_depth), 0.0);
        for (std::int64_t x = 1; x <= depth; ++x) {
            const double pr = cur[static_cast<std::size_t>(x - 1)];
            if (pr == 0.0) continue;
            if (up >= x)
                absorbed += p * pr;
            else
                nxt[static_cast<std::size_t>(x - up - 1)] += p * pr;
            nxt[static_cast<std::size_t>(x)] += q * pr;  // position -(x+1)
        }
        cur.swap(nxt);
        depth = new_depth;
    }
    return absorbed;
}

// Monte Carlo estimate of the same truncated hitting probability.
inline Estimate hitting_prob_mc(const BinaryWalkSpec& spec, int T, std::int64_t trials,
                                std::uint64_t seed, int threads = 0) {
    if (T < 1) throw InvalidParameters("hitting_prob_mc needs T >= 1");
    if (trials < 1) throw InvalidParameters("hitting_prob_mc needs trials >= 1");
    const std::int64_t up = spec.m - 1;
    const double p = spec.p1;
    return mc_mean(trials, threads, [&](std::int64_t trial) -> double {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(trial));
        std::int64_t pos = 0;
        for (int t = 1; t <= T; ++t) {
            pos += uniform_at(s, static_cast<std::uint64_t>(t)) < p ? up : -1;
            if (pos >= 0) return 1.0;
            // Too deep to climb back within the horizon: stop early.
            if (pos + up * static_cast<std::int64_t>(T - t) < 0) return 0.0;
        }
        return 0.0;
    });
}

// Multi-value instance for the coupled hit events. The distribution must
// have minimum value 1, every larger value an integer multiple of c, and
// revenue at most 1 everywhere (1 exactly at price 1).
struct MultiSupportSpec {
    DiscreteDistribution dist;
    double c = 1.0;
    std::vector<std::int64_t> step_ratio;  // step_ratio[j] = v_j / c for j >= 1; [0] unused

    MultiSupportSpec(DiscreteDistribution d, double c_) : dist(std::move(d)), c(c_) {
        if (!(c > 0.0 && c <= 1.0)) throw InvalidSpec("multi-support spec needs c in (0, 1]");
        if (std::abs(dist.min_value() - 1.0) > kIntegerTolerance)
            throw InvalidSpec("multi-support spec needs minimum support value 1");
        if (std::abs(dist.ccdf(dist.min_value()) - 1.0) > kProbTolerance * 10)
            throw InvalidSpec("multi-support spec needs revenue exactly 1 at price 1");
        step_ratio.assign(dist.size(), 0);
        for (std::size_t j = 1; j < dist.size(); ++j) {
            const double ratio = dist.value(j) / c;
            const double rounded = std::round(ratio);
            if (std::abs(ratio - rounded) > kIntegerTolerance || rounded < 1.0)
                throw InvalidSpec("multi-support spec needs every value above 1 to be an integer multiple of c");
            step_ratio[j] = static_cast<std::int64_t>(rounded);
            if (dist.value(j) * dist.ccdf(dist.value(j)) > 1.0 + kIntegerTolerance)
                throw InvalidSpec("multi-support spec needs revenue at most 1 at every support value");
        }
    }

    std::size_t support_size() const { return dist.size(); }
};

namespace detail {

// One sample path: hits[j] = 1 iff the empirical revenue of value v_j reaches
// c at some t <= T (exact integer test m_j * count_j >= t). Index 0 unused.
inline void simulate_hits(const MultiSupportSpec& spec, int T, std::uint64_t trial_seed,
                          std::vector<std::int64_t>& counts, std::vector<char>& hits) {
    const std::size_t k = spec.support_size();
    counts.assign(k, 0);
    hits.assign(k, 0);
    std::size_t unhit = k - 1;
    for (int t = 1; t <= T && unhit > 0; ++t) {
        const double x = quantile(Distribution{spec.dist},
                                  uniform_at(trial_seed, static_cast<std::uint64_t>(t)));
        // x equals some support value; every index at or below it counts a hit.
        const std::size_t idx = spec.dist.first_index_geq(x);
        for (std::size_t j = 1; j <= idx; ++j) ++counts[j];
        for (std::size_t j = 1; j < k; ++j) {
            if (!hits[j] && spec.step_ratio[j] * counts[j] >= t) {
                hits[j] = 1;
                --unhit;
            }
        }
    }
}

}  // namespace detail

// Estimates for the events of value index i (1-based into the support):
//   G: empirical revenue of v_i reaches c within the horizon;
//   H: both v_i and v_{i+1} reach c (at possibly different times);
//   F: v_i reaches c while v_{i+1} never does (G minus H).
// g_closed carries the exact untruncated formula v_i * Pr[v >= v_i] / c,
// which may exceed 1 when revenue at v_i exceeds c.
struct MultiSupportEstimates {
    Estimate g, h, f;
    double g_closed = 0.0;
};

inline MultiSupportEstimates multi_support_event_probs(const MultiSupportSpec& spec,
                                                       std::size_t index, int T,
                                                       std::int64_t trials, std::uint64_t seed,
                                                       int threads = 0) {
    const std::size_t k = spec.support_size();
    if (index < 1 || index >= k)
        throw InvalidParameters("multi_support_event_probs needs 1 <= index < support size");
    if (T < 1 || trials < 1) throw InvalidParameters("multi_support_event_probs needs T, trials >= 1");
    struct Buffers {
        std::vector<std::int64_t> counts;
        std::vector<char> hits;
    };
    thread_local Buffers buf;
    auto estimates = mc_mean_vec(trials, 3, threads, [&](std::int64_t trial, double* out) {
        detail::simulate_hits(spec, T, derive_seed(seed, static_cast<std::uint64_t>(trial)),
                              buf.counts, buf.hits);
        const bool g = buf.hits[index] != 0;
        const bool next = index + 1 < k && buf.hits[index + 1] != 0;
        out[0] = g ? 1.0 : 0.0;
        out[1] = (g && next) ? 1.0 : 0.0;
        out[2] = (g && !next) ? 1.0 : 0.0;
    });
    MultiSupportEstimates result;
    result.g = estimates[0];
    result.h = estimates[1];
    result.f = estimates[2];
    result.g_closed = spec.dist.value(index) * spec.dist.ccdf(spec.dist.value(index)) / spec.c;
    return result;
}

// For each tail start i >= 1: the estimated expected number of indices j >= i
// whose value hits c while its successor never does, bounded above by
// welfare(v_i) / c.
struct TailSumRow {
    std::size_t index = 0;   // tail start i
    Estimate f_sum;          // estimate of sum_{j >= i} F_j
    double bound = 0.0;      // welfare(v_i) / c
};

inline std::vector<TailSumRow> multi_support_tail_sums(const MultiSupportSpec& spec, int T,
                                                       std::int64_t trials, std::uint64_t seed,
                                                       int threads = 0) {
    const std::size_t k = spec.support_size();
    if (k < 2) throw InvalidParameters("multi_support_tail_sums needs at least two support values");
    if (T < 1 || trials < 1) throw InvalidParameters("multi_support_tail_sums needs T, trials >= 1");
    const int dim = static_cast<int>(k - 1);
    struct Buffers {
        std::vector<std::int64_t> counts;
        std::vector<char> hits;
    };
    thread_local Buffers buf;
    auto estimates = mc_mean_vec(trials, dim, threads, [&](std::int64_t trial, double* out) {
        detail::simulate_hits(spec, T, derive_seed(seed, static_cast<std::uint64_t>(trial)),
                              buf.counts, buf.hits);
        double acc = 0.0;
        for (std::size_t i = k - 1; i >= 1; --i) {
            const bool f = buf.hits[i] != 0 && (i + 1 >= k || buf.hits[i + 1] == 0);
            acc += f ? 1.0 : 0.0;
            out[i - 1] = acc;
        }
    });
    std::vector<TailSumRow> rows;
    rows.reserve(static_cast<std::size_t>(dim));
    for (std::size_t i = 1; i < k; ++i) {
        TailSumRow row;
        row.index = i;
        row.f_sum = estimates[i - 1];
        row.bound = spec.dist.tail_expectation(spec.dist.value(i)) / spec.c;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gftlab
