#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

// Deterministic Monte Carlo aggregation. Trials are split into fixed-size
// chunks; each chunk is summed sequentially in trial order, and chunk totals
// are combined in chunk order with compensated summation. Workers only decide
// WHICH chunk they compute, never how it is summed, so every emitted number
// is a pure function of (trials, per-trial function) -- the worker count
// cannot change results.

namespace gftlab {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

inline constexpr std::int64_t kChunkSize = 1024;

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace detail {

// Neumaier compensated sum over a fixed-order range.
inline double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

template <typename ChunkFn>
void run_chunks(std::int64_t chunk_count, int threads, ChunkFn&& chunk_fn) {
    if (threads <= 1 || chunk_count <= 1) {
        for (std::int64_t c = 0; c < chunk_count; ++c) chunk_fn(c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= chunk_count) return;
            chunk_fn(c);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<std::int64_t>(threads, chunk_count);
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Mean and standard error of fn(trial) over trial = 0..trials-1.
template <typename Fn>
Estimate mc_mean(std::int64_t trials, int threads, Fn&& fn) {
    const std::int64_t chunks = (trials + kChunkSize - 1) / kChunkSize;
    std::vector<double> sums(static_cast<std::size_t>(chunks), 0.0);
    std::vector<double> sq_sums(static_cast<std::size_t>(chunks), 0.0);
    detail::run_chunks(chunks, resolve_threads(threads), [&](std::int64_t c) {
        const std::int64_t lo = c * kChunkSize;
        const std::int64_t hi = std::min(trials, lo + kChunkSize);
        double s = 0.0, q = 0.0;
        for (std::int64_t t = lo; t < hi; ++t) {
            const double x = fn(t);
            s += x;
            q += x * x;
        }
        sums[static_cast<std::size_t>(c)] = s;
        sq_sums[static_cast<std::size_t>(c)] = q;
    });
    const double n = static_cast<double>(trials);
    const double total = detail::compensated_sum(sums);
    const double total_sq = detail::compensated_sum(sq_sums);
    const double mean = total / n;
    Estimate est{mean, 0.0};
    if (trials > 1) {
        const double var = std::max(0.0, (total_sq - n * mean * mean) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

// Vector version: fn(trial, out) fills out[0..dim-1]; returns one Estimate
// per dimension. Used when one simulated trial feeds several statistics.
template <typename Fn>
std::vector<Estimate> mc_mean_vec(std::int64_t trials, int dim, int threads, Fn&& fn) {
    const std::int64_t chunks = (trials + kChunkSize - 1) / kChunkSize;
    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<std::vector<double>> sums(d, std::vector<double>(static_cast<std::size_t>(chunks), 0.0));
    std::vector<std::vector<double>> sq_sums(d, std::vector<double>(static_cast<std::size_t>(chunks), 0.0));
    detail::run_chunks(chunks, resolve_threads(threads), [&](std::int64_t c) {
        const std::int64_t lo = c * kChunkSize;
        const std::int64_t hi = std::min(trials, lo + kChunkSize);
        std::vector<double> out(d, 0.0);
        std::vector<double> s(d, 0.0), q(d, 0.0);
        for (std::int64_t t = lo; t < hi; ++t) {
            fn(t, out.data());
            for (std::size_t j = 0; j < d; ++j) {
                s[j] += out[j];
                q[j] += out[j] * out[j];
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            sums[j][static_cast<std::size_t>(c)] = s[j];
            sq_sums[j][static_cast<std::size_t>(c)] = q[j];
        }
    });
    std::vector<Estimate> result(d);
    const double n = static_cast<double>(trials);
    for (std::size_t j = 0; j < d; ++j) {
        const double total = detail::compensated_sum(sums[j]);
        const double total_sq = detail::compensated_sum(sq_sums[j]);
        const double mean = total / n;
        result[j].value = mean;
        if (trials > 1) {
            const double var = std::max(0.0, (total_sq - n * mean * mean) / (n - 1.0));
            result[j].std_error = std::sqrt(var / n);
        }
    }
    return result;
}

}  // namespace gftlab
