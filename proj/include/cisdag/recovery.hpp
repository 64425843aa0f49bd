#pragma once

// CIS ordering recovery.  Population version: repeatedly pick a variable
// whose current marginal-precision row is entirely nonpositive, place it
// last, and downdate; an empty candidate set certifies that no CIS ordering
// exists.  Noisy version: the same walk with sample regression coefficients
// thresholded at -epsilon_n, which is consistent when the separation and
// sample size cooperate.  Both fill the final two positions ascending, since
// any admissible pair works in either order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cisdag/dataset.hpp"
#include "cisdag/errors.hpp"
#include "cisdag/factor.hpp"
#include "cisdag/lstsq.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/model.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {

enum class TieBreak { FirstIndex, MaxMinCoefficient };

struct RecoveryConfig {
    Tolerance tol{};
    // eps_n for the noisy walk; defaults to epsilon_scale * n^(-1/4), which
    // vanishes while n^(1/2) * eps_n still diverges.
    std::function<double(std::size_t)> epsilon_schedule{};
    double epsilon_scale = 0.5;
    TieBreak tie_break = TieBreak::FirstIndex;

    double epsilon(std::size_t n) const {
        if (epsilon_schedule) return epsilon_schedule(n);
        return epsilon_scale * std::pow(static_cast<double>(n), -0.25);
    }
};

struct RegressionCoefficients {
    std::size_t target = 0;
    std::vector<std::size_t> conditioning_set;
    std::vector<double> beta;
};

struct RecoveryStep {
    std::size_t position = 0; // position filled (0-based)
    std::size_t index = 0;    // variable placed there
    double min_coefficient = 0.0;
};

struct NoisyRecovery {
    Ordering ordering;
    std::vector<RecoveryStep> steps;
    double epsilon = 0.0;
};

namespace detail {

inline void check_regression_args(std::size_t m, std::size_t target,
                                  const std::vector<std::size_t>& cond) {
    if (cond.empty()) throw DimensionMismatch("regression: empty conditioning set");
    if (target >= m) throw DimensionMismatch("regression: target out of range");
    std::vector<bool> seen(m, false);
    for (std::size_t a : cond) {
        if (a >= m) throw DimensionMismatch("regression: conditioning index out of range");
        if (a == target) throw DimensionMismatch("regression: target inside conditioning set");
        if (seen[a]) throw DimensionMismatch("regression: duplicate conditioning index");
        seen[a] = true;
    }
}

} // namespace detail

// beta = Sigma_{i,A} Sigma_{A,A}^{-1}, aligned with A's given order.
inline RegressionCoefficients population_regression(const CovariancePair& cp, std::size_t target,
                                                    const std::vector<std::size_t>& cond,
                                                    const Tolerance& tol = {}) {
    detail::check_regression_args(cp.dim(), target, cond);
    SymMatrix saa(cond.size());
    std::vector<double> sai(cond.size());
    for (std::size_t a = 0; a < cond.size(); ++a) {
        sai[a] = cp.sigma(target, cond[a]);
        for (std::size_t b = a; b < cond.size(); ++b) saa.set(a, b, cp.sigma(cond[a], cond[b]));
    }
    return RegressionCoefficients{target, cond, spd_solve(saa, sai, tol)};
}

// Minimum-norm OLS of column `target` on the `cond` block, as passed (no
// centering here; callers decide).
inline RegressionCoefficients sample_regression(const Dataset& data, std::size_t target,
                                                const std::vector<std::size_t>& cond) {
    detail::check_regression_args(data.cols(), target, cond);
    ColumnView cols;
    cols.reserve(cond.size());
    for (std::size_t a : cond) cols.push_back(&data.col(a));
    return RegressionCoefficients{target, cond, ols_min_norm(cols, data.col(target))};
}

inline std::optional<Ordering> find_cis_ordering_population(const CovariancePair& cp,
                                                            const RecoveryConfig& cfg = {}) {
    const std::size_t m = cp.dim();
    if (m == 1) return Ordering::identity(1);
    SymMatrix k = cp.precision;
    std::vector<std::size_t> active(m);
    for (std::size_t i = 0; i < m; ++i) active[i] = i;
    std::vector<std::size_t> perm(m);

    for (std::size_t fill = m; fill-- > 2;) {
        const std::size_t a = active.size();
        std::size_t chosen = a;
        double chosen_margin = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < a; ++j) {
            bool ok = true;
            double margin = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < a; ++i) {
                if (i == j) continue;
                const double thresh =
                    cfg.tol.threshold(std::sqrt(std::max(k(i, i), 0.0) * std::max(k(j, j), 0.0)));
                if (k(i, j) > thresh) {
                    ok = false;
                    break;
                }
                margin = std::min(margin, -k(i, j) / k(j, j));
            }
            if (!ok) continue;
            if (cfg.tie_break == TieBreak::FirstIndex) {
                chosen = j;
                break;
            }
            if (margin > chosen_margin) {
                chosen_margin = margin;
                chosen = j;
            }
        }
        if (chosen == a) return std::nullopt;
        perm[fill] = active[chosen];
        k = marginal_precision(k, chosen, cfg.tol);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(chosen));
    }

    const double thresh =
        cfg.tol.threshold(std::sqrt(std::max(k(0, 0), 0.0) * std::max(k(1, 1), 0.0)));
    if (k(0, 1) > thresh) return std::nullopt;
    perm[0] = active[0];
    perm[1] = active[1];
    return Ordering(std::move(perm));
}

// Three-step sample algorithm: centers columns, then for steps t = 1..m-2
// regresses each remaining candidate on the other active variables and
// accepts per the tie-break rule when all coefficients exceed -eps_n.
inline NoisyRecovery find_cis_ordering_noisy(const Dataset& data, const RecoveryConfig& cfg = {}) {
    const std::size_t m = data.cols();
    const std::size_t n = data.rows();
    if (n < m)
        throw DimensionMismatch("find_cis_ordering_noisy: need at least as many rows as columns");
    NoisyRecovery out;
    out.epsilon = cfg.epsilon(n);
    if (m == 1) {
        out.ordering = Ordering::identity(1);
        return out;
    }
    if (m == 2) {
        out.ordering = Ordering::identity(2);
        return out;
    }

    const Dataset centered = data.centered();
    std::vector<std::size_t> active(m);
    for (std::size_t i = 0; i < m; ++i) active[i] = i;
    std::vector<std::size_t> perm(m);

    for (std::size_t t = 1; t + 2 <= m; ++t) {
        const std::size_t fill = m - t;
        std::size_t chosen = active.size();
        double chosen_margin = -std::numeric_limits<double>::infinity();
        double best_seen = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < active.size(); ++j) {
            std::vector<std::size_t> cond;
            cond.reserve(active.size() - 1);
            for (std::size_t i = 0; i < active.size(); ++i)
                if (i != j) cond.push_back(active[i]);
            const RegressionCoefficients reg = sample_regression(centered, active[j], cond);
            double margin = std::numeric_limits<double>::infinity();
            for (double b : reg.beta) margin = std::min(margin, b);
            best_seen = std::max(best_seen, margin);
            if (cfg.tie_break == TieBreak::FirstIndex) {
                if (margin > -out.epsilon) {
                    chosen = j;
                    chosen_margin = margin;
                    break;
                }
            } else if (margin > chosen_margin) {
                chosen_margin = margin;
                chosen = j;
            }
        }
        if (cfg.tie_break == TieBreak::MaxMinCoefficient && chosen != active.size() &&
            chosen_margin <= -out.epsilon)
            chosen = active.size();
        if (chosen == active.size())
            throw NoCandidate("no variable passes the -epsilon threshold at step " +
                                  std::to_string(t) + " (best margin " +
                                  std::to_string(best_seen) + ", epsilon " +
                                  std::to_string(out.epsilon) + ")",
                              t, best_seen);
        perm[fill] = active[chosen];
        out.steps.push_back({fill, active[chosen], chosen_margin});
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(chosen));
    }

    perm[0] = active[0];
    perm[1] = active[1];
    out.ordering = Ordering(std::move(perm));
    return out;
}

} // namespace cisdag
