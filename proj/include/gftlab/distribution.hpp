#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gftlab/errors.hpp"
#include "gftlab/rng.hpp"

namespace gftlab {

inline constexpr double kProbTolerance = 1e-12;

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

// Finite distribution over real values. Atoms are kept sorted by value,
// strictly increasing; probabilities must be positive and sum to 1 within
// kProbTolerance. Construction rejects bad input instead of renormalizing.
class DiscreteDistribution {
  public:
    explicit DiscreteDistribution(std::vector<Atom> atoms) {
        if (atoms.empty()) throw InvalidDistribution("discrete distribution needs at least one atom");
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.value < b.value; });
        values_.reserve(atoms.size());
        probs_.reserve(atoms.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const Atom& a = atoms[i];
            if (!std::isfinite(a.value)) throw InvalidDistribution("atom value not finite");
            if (!(a.prob > 0.0) || !std::isfinite(a.prob))
                throw InvalidDistribution("atom probability must be positive and finite");
            if (i > 0 && !(a.value > values_.back()))
                throw InvalidDistribution("duplicate atom value " + std::to_string(a.value));
            values_.push_back(a.value);
            probs_.push_back(a.prob);
            sum += a.prob;
        }
        if (std::abs(sum - 1.0) > kProbTolerance)
            throw InvalidDistribution("atom probabilities sum to " + std::to_string(sum) +
                                      ", expected 1 within 1e-12");
        const std::size_t n = values_.size();
        cum_.resize(n);
        head_ev_.resize(n);
        double c = 0.0, ev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            c += probs_[i];
            ev += values_[i] * probs_[i];
            cum_[i] = c;
            head_ev_[i] = ev;
        }
        tail_.resize(n);
        tail_ev_.resize(n);
        double tc = 0.0, tev = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            tc += probs_[i];
            tev += values_[i] * probs_[i];
            tail_[i] = tc;
            tail_ev_[i] = tev;
        }
    }

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<const double> probs() const { return probs_; }
    double value(std::size_t i) const { return values_[i]; }
    double prob(std::size_t i) const { return probs_[i]; }
    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }

    // First index with value >= x, or size() if none.
    std::size_t first_index_geq(double x) const {
        return static_cast<std::size_t>(
            std::lower_bound(values_.begin(), values_.end(), x) - values_.begin());
    }

    // Pr[v >= x], atom at x included.
    double ccdf(double x) const {
        const std::size_t i = first_index_geq(x);
        return i < tail_.size() ? tail_[i] : 0.0;
    }

    // Pr[v <= x], atom at x included.
    double cdf(double x) const {
        const std::size_t i = static_cast<std::size_t>(
            std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
        return i == 0 ? 0.0 : cum_[i - 1];
    }

    // E[v * 1{v >= x}].
    double tail_expectation(double x) const {
        const std::size_t i = first_index_geq(x);
        return i < tail_ev_.size() ? tail_ev_[i] : 0.0;
    }

    // E[v * 1{v <= x}].
    double head_expectation(double x) const {
        const std::size_t i = static_cast<std::size_t>(
            std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
        return i == 0 ? 0.0 : head_ev_[i - 1];
    }

    double mean() const { return tail_ev_.front(); }

    // Inverse CDF: smallest value whose cumulative probability exceeds u.
    double quantile(double u) const {
        const std::size_t i = static_cast<std::size_t>(
            std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        return values_[std::min(i, values_.size() - 1)];
    }

  private:
    std::vector<double> values_;
    std::vector<double> probs_;
    std::vector<double> cum_;      // inclusive prefix sums of prob
    std::vector<double> tail_;     // inclusive suffix sums of prob
    std::vector<double> head_ev_;  // inclusive prefix sums of value*prob
    std::vector<double> tail_ev_;  // inclusive suffix sums of value*prob
};

// Continuous uniform on [lo, hi].
struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
    Uniform(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
            throw InvalidDistribution("uniform needs finite lo < hi");
    }
};

// Degenerate distribution at a single value.
struct PointMass {
    double v = 0.0;
    explicit PointMass(double v_) : v(v_) {
        if (!std::isfinite(v)) throw InvalidDistribution("point mass needs a finite value");
    }
};

// Pr[v >= p] = lo/p for p in [lo, hi], continuous density lo/x^2 on [lo, hi)
// plus a residual atom of mass lo/hi at hi. Every price in [lo, hi] earns
// revenue exactly lo.
struct EqualRevenue {
    double lo = 1.0;
    double hi = 2.0;
    EqualRevenue(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo >= 1.0 && lo < hi && std::isfinite(hi)))
            throw InvalidDistribution("equal-revenue needs 1 <= lo < hi, finite");
    }
};

using Distribution = std::variant<DiscreteDistribution, Uniform, PointMass, EqualRevenue>;

// ---- measure queries over the variant ----

inline double ccdf(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) {
                return a.ccdf(x);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x <= a.lo) return 1.0;
                if (x >= a.hi) return 0.0;
                return (a.hi - x) / (a.hi - a.lo);
            } else if constexpr (std::is_same_v<T, PointMass>) {
                return a.v >= x ? 1.0 : 0.0;
            } else {
                if (x <= a.lo) return 1.0;
                if (x > a.hi) return 0.0;
                return a.lo / x;  // includes the atom at hi as x -> hi
            }
        },
        d);
}

inline double cdf(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) {
                return a.cdf(x);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x < a.lo) return 0.0;
                if (x > a.hi) return 1.0;
                return (x - a.lo) / (a.hi - a.lo);
            } else if constexpr (std::is_same_v<T, PointMass>) {
                return a.v <= x ? 1.0 : 0.0;
            } else {
                if (x < a.lo) return 0.0;
                if (x >= a.hi) return 1.0;
                return 1.0 - a.lo / x;  // no atom below hi
            }
        },
        d);
}

// E[v * 1{v >= x}]
inline double tail_expectation(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) {
                return a.tail_expectation(x);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x >= a.hi) return 0.0;
                const double from = std::max(x, a.lo);
                return (a.hi * a.hi - from * from) / (2.0 * (a.hi - a.lo));
            } else if constexpr (std::is_same_v<T, PointMass>) {
                return a.v >= x ? a.v : 0.0;
            } else {
                if (x > a.hi) return 0.0;
                const double from = std::max(x, a.lo);
                // integral of x * lo/x^2 over [from, hi) plus the atom hi * (lo/hi)
                return a.lo * std::log(a.hi / from) + a.lo;
            }
        },
        d);
}

// E[v * 1{v <= x}]
inline double head_expectation(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) {
                return a.head_expectation(x);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x <= a.lo) return 0.0;
                const double to = std::min(x, a.hi);
                return (to * to - a.lo * a.lo) / (2.0 * (a.hi - a.lo));
            } else if constexpr (std::is_same_v<T, PointMass>) {
                return a.v <= x ? a.v : 0.0;
            } else {
                if (x < a.lo) return 0.0;
                if (x >= a.hi) return a.lo * std::log(a.hi / a.lo) + a.lo;
                return a.lo * std::log(x / a.lo);
            }
        },
        d);
}

inline double mean(const Distribution& d) {
    return std::visit(
        [](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) return a.mean();
            else if constexpr (std::is_same_v<T, Uniform>) return 0.5 * (a.lo + a.hi);
            else if constexpr (std::is_same_v<T, PointMass>) return a.v;
            else return a.lo * (1.0 + std::log(a.hi / a.lo));
        },
        d);
}

inline double min_value(const Distribution& d) {
    return std::visit(
        [](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) return a.min_value();
            else if constexpr (std::is_same_v<T, Uniform>) return a.lo;
            else if constexpr (std::is_same_v<T, PointMass>) return a.v;
            else return a.lo;
        },
        d);
}

inline double max_value(const Distribution& d) {
    return std::visit(
        [](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) return a.max_value();
            else if constexpr (std::is_same_v<T, Uniform>) return a.hi;
            else if constexpr (std::is_same_v<T, PointMass>) return a.v;
            else return a.hi;
        },
        d);
}

// Inverse CDF used for sampling; u must lie in [0, 1).
inline double quantile(const Distribution& d, double u) {
    return std::visit(
        [u](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) {
                return a.quantile(u);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return a.lo + u * (a.hi - a.lo);
            } else if constexpr (std::is_same_v<T, PointMass>) {
                return a.v;
            } else {
                const double atom = a.lo / a.hi;  // mass at hi
                if (u >= 1.0 - atom) return a.hi;
                return a.lo / (1.0 - u);
            }
        },
        d);
}

inline bool is_discrete(const Distribution& d) {
    return std::holds_alternative<DiscreteDistribution>(d);
}

// Discrete view of a distribution when one exists exactly
// (discrete as-is, point mass as a single atom).
inline const DiscreteDistribution* try_discrete(const Distribution& d,
                                                DiscreteDistribution& storage) {
    if (const auto* disc = std::get_if<DiscreteDistribution>(&d)) return disc;
    if (const auto* pm = std::get_if<PointMass>(&d)) {
        storage = DiscreteDistribution({{pm->v, 1.0}});
        return &storage;
    }
    return nullptr;
}

// ---- transforms (discrete only) ----

// Conditional distribution of v given v >= threshold.
inline DiscreteDistribution condition_at_least(const DiscreteDistribution& d, double threshold) {
    const double tail = d.ccdf(threshold);
    if (!(tail > 0.0)) throw EmptyTail("no probability mass at or above threshold");
    std::vector<Atom> atoms;
    for (std::size_t i = d.first_index_geq(threshold); i < d.size(); ++i)
        atoms.push_back({d.value(i), d.prob(i) / tail});
    return DiscreteDistribution(std::move(atoms));
}

// Scale every support value by factor > 0. Probabilities unchanged.
inline DiscreteDistribution rescale(const DiscreteDistribution& d, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw InvalidParameters("rescale factor must be positive and finite");
    std::vector<Atom> atoms;
    atoms.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) atoms.push_back({d.value(i) * factor, d.prob(i)});
    return DiscreteDistribution(std::move(atoms));
}

// ---- sample streams ----

// Deterministic sample stream: the n-th draw is a pure function of
// (source, seed, n), so streams can be replayed, split, and evaluated out of
// order. Holds a non-owning view of the source distribution.
class SampleStream {
  public:
    SampleStream(const Distribution& source, std::uint64_t seed)
        : source_(&source), seed_(seed) {}
    // The stream only views its source; a temporary would dangle.
    SampleStream(Distribution&&, std::uint64_t) = delete;

    double value_at(std::uint64_t n) const { return quantile(*source_, uniform_at(seed_, n)); }

    double next() { return value_at(counter_++); }

    const Distribution& source() const { return *source_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

  private:
    const Distribution* source_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace gftlab
