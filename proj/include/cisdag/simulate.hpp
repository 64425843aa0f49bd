#pragma once

// Seeded Gaussian SEM sampling.  Every variate is a pure function of
// (seed, row, position): a splitmix64 counter stream feeds an inverse-CDF
// normal, so output is bit-identical across runs, thread counts, and
// evaluation orders.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cisdag/dataset.hpp"
#include "cisdag/errors.hpp"
#include "cisdag/model.hpp"

namespace cisdag {

namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// c-th output of the splitmix64 stream seeded at `seed`.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t c) {
    return mix64(seed + (c + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform on (0,1), open at both ends so the normal quantile stays finite.
inline double uniform01(std::uint64_t seed, std::uint64_t c) {
    return (static_cast<double>(at(seed, c) >> 11) + 0.5) * 0x1.0p-53;
}

// Inverse standard normal CDF.  Central and near-tail regions use rational
// approximations in the AS 241 style (split at |p - 1/2| = 0.425 and at
// sqrt(-log r) = 5); the far tail seeds an asymptotic expansion and polishes
// it with Halley steps on erfc, which is where erfc is both cheap and sharp.
inline double inv_norm_cdf(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        v = num / den;
    } else {
        // p below exp(-25) ~ 1.4e-11: start from the classic asymptotic
        //   v^2 ~ u - log(2 pi) - log(u - log(2 pi)),  u = -2 log p,
        // then take Halley steps on Q(v) - p with Q(v) = erfc(v / sqrt 2) / 2,
        // Q' = -phi, Q'' = v phi:  v += d / (1 - d v / 2), d = (Q - p) / phi.
        const double tail = q < 0.0 ? p : 1.0 - p;
        const double u = 2.0 * r * r; // r = sqrt(-log tail), so u = -2 log tail
        const double log_two_pi = 1.8378770664093454836;
        v = std::sqrt(u - log_two_pi - std::log(u - log_two_pi));
        for (int step = 0; step < 3; ++step) {
            const double phi = std::exp(-0.5 * v * v) * 0.39894228040143267794;
            const double qv = 0.5 * std::erfc(v * 0.70710678118654752440);
            if (phi <= 0.0 || qv <= 0.0) break; // underflow: keep the seed
            const double d = (qv - tail) / phi;
            v += d / (1.0 - 0.5 * d * v);
        }
    }
    return q < 0.0 ? -v : v;
}

inline double std_normal(std::uint64_t seed, std::uint64_t c) {
    return inv_norm_cdf(uniform01(seed, c));
}

// Replicate r of a Monte-Carlo run draws from seed XOR hash(r); streams for
// distinct replicates never collide in counter space.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t r) {
    return seed ^ mix64(r + 0x9E3779B97F4A7C15ULL);
}

} // namespace rng

struct SimSpec {
    SemParams sem;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// threads = 0 picks hardware concurrency.  Rows are partitioned across
// workers; every entry depends only on (seed, row, position), so the thread
// count never changes the output.
inline Dataset sample_sem(const SimSpec& spec, unsigned threads = 1) {
    if (spec.n < 1) throw std::invalid_argument("sample_sem: need n >= 1");
    const std::size_t m = spec.sem.dim();
    const std::size_t n = spec.n;
    Dataset data(n, m);
    const Ordering& ord = spec.sem.ordering();
    std::vector<double> noise_sd(m);
    for (std::size_t v = 0; v < m; ++v) noise_sd[v] = std::sqrt(spec.sem.noise_var()[v]);

    auto fill_rows = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r)
            for (std::size_t p = 0; p < m; ++p) {
                const std::size_t v = ord[p];
                double x = spec.sem.mean()[v] +
                           noise_sd[v] * rng::std_normal(spec.seed, static_cast<std::uint64_t>(r) * m + p);
                for (std::size_t q = 0; q < p; ++q) {
                    const std::size_t w = ord[q];
                    const double coef = spec.sem.lambda()(v, w);
                    if (coef != 0.0) x += coef * data.at(r, w);
                }
                data.at(r, v) = x;
            }
    };

    unsigned t = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (t == 0) t = 1;
    t = static_cast<unsigned>(std::min<std::size_t>(t, n));
    if (t <= 1) {
        fill_rows(0, n);
        return data;
    }
    std::vector<std::thread> workers;
    workers.reserve(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back(fill_rows, lo, hi);
    }
    for (std::thread& w : workers) w.join();
    return data;
}

// Random element of a positive-DAG-dependence class: lower-triangular support
// drawn edgewise with probability edge_prob, coefficients uniform in
// [lo, hi] (0 <= lo <= hi), unit noise, identity ordering.
inline SemParams random_cis_model(std::size_t m, double edge_prob, double lo, double hi,
                                  std::uint64_t seed) {
    if (!(0.0 <= edge_prob && edge_prob <= 1.0))
        throw std::invalid_argument("random_cis_model: edge_prob must lie in [0,1]");
    if (!(0.0 <= lo && lo <= hi))
        throw std::invalid_argument("random_cis_model: need 0 <= lo <= hi");
    Matrix lambda(m, m);
    std::uint64_t c = 0;
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const bool present = rng::uniform01(seed, c) < edge_prob;
            const double coef = lo + (hi - lo) * rng::uniform01(seed, c + 1);
            if (present) lambda(i, j) = coef;
            c += 2;
        }
    return SemParams(Ordering::identity(m), std::move(lambda),
                     PosDiagonal(std::vector<double>(m, 1.0)));
}

} // namespace cisdag
