#pragma once

// Nonnegative least squares, Lawson-Hanson active set on the Gram system.
// Ties pick the smallest index (Bland-style) and an iteration cap backs the
// anti-cycling argument, so termination is unconditional.

#include <cmath>
#include <cstddef>
#include <vector>

#include "cisdag/errors.hpp"
#include "cisdag/lstsq.hpp"
#include "cisdag/matrix.hpp"

namespace cisdag {

// argmin ||y - Z b||^2 over b >= 0, with Z given by its Gram matrix
// G = Z'Z and correlation vector c = Z'y.
inline std::vector<double> solve_nnls_gram(const SymMatrix& g, const std::vector<double>& c,
                                           const Tolerance& tol = {}) {
    const std::size_t k = g.dim();
    if (c.size() != k) throw DimensionMismatch("nnls: gram/rhs size mismatch");
    if (k == 0) return {};
    double cmax = 1.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    const double kkt_eps = tol.abs + tol.rel * cmax;

    std::vector<double> beta(k, 0.0);
    std::vector<bool> passive(k, false);
    std::vector<std::size_t> pset;
    const std::size_t max_iter = 3 * k * k + 30 * k + 100;

    auto passive_solve = [&]() {
        SymMatrix gp(pset.size());
        std::vector<double> cp(pset.size());
        for (std::size_t a = 0; a < pset.size(); ++a) {
            cp[a] = c[pset[a]];
            for (std::size_t b = a; b < pset.size(); ++b) gp.set(a, b, g(pset[a], pset[b]));
        }
        return detail::solve_gram(gp, cp);
    };

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // w = c - G beta, the negative gradient
        double wbest = kkt_eps;
        std::size_t enter = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (passive[i]) continue;
            double w = c[i];
            for (std::size_t j : pset) w -= g(i, j) * beta[j];
            if (w > wbest) {
                wbest = w;
                enter = i;
            }
        }
        if (enter == k) return beta;
        passive[enter] = true;
        pset.push_back(enter);

        for (;;) {
            const std::vector<double> z = passive_solve();
            bool all_pos = true;
            for (double v : z)
                if (v <= 0.0) {
                    all_pos = false;
                    break;
                }
            if (all_pos) {
                for (std::size_t a = 0; a < pset.size(); ++a) beta[pset[a]] = z[a];
                break;
            }
            double alpha = 1.0;
            for (std::size_t a = 0; a < pset.size(); ++a)
                if (z[a] <= 0.0) {
                    const double denom = beta[pset[a]] - z[a];
                    if (denom > 0.0) alpha = std::min(alpha, beta[pset[a]] / denom);
                }
            for (std::size_t a = 0; a < pset.size(); ++a)
                beta[pset[a]] += alpha * (z[a] - beta[pset[a]]);
            double bscale = 1.0;
            for (std::size_t j : pset) bscale = std::max(bscale, std::abs(beta[j]));
            const double move_eps = 1e-12 * bscale;
            for (std::size_t a = pset.size(); a-- > 0;) {
                const std::size_t i = pset[a];
                if (z[a] <= 0.0 && beta[i] <= move_eps) {
                    beta[i] = 0.0;
                    passive[i] = false;
                    pset.erase(pset.begin() + static_cast<std::ptrdiff_t>(a));
                }
            }
            if (pset.empty()) break;
        }
    }
    throw MaxIterations("nnls: active set failed to settle");
}

inline std::vector<double> solve_nnls(const ColumnView& cols, const std::vector<double>& y,
                                      const Tolerance& tol = {}) {
    for (const auto* c : cols)
        if (c->size() != y.size()) throw DimensionMismatch("nnls: column/response length mismatch");
    return solve_nnls_gram(detail::gram(cols), detail::gram_rhs(cols, y), tol);
}

inline std::vector<double> solve_nnls(const Matrix& z, const std::vector<double>& y,
                                      const Tolerance& tol = {}) {
    if (z.rows() != y.size()) throw DimensionMismatch("nnls: row/response length mismatch");
    std::vector<std::vector<double>> cols(z.cols(), std::vector<double>(z.rows()));
    for (std::size_t j = 0; j < z.cols(); ++j)
        for (std::size_t r = 0; r < z.rows(); ++r) cols[j][r] = z(r, j);
    ColumnView view;
    view.reserve(cols.size());
    for (const auto& c : cols) view.push_back(&c);
    return solve_nnls(view, y, tol);
}

} // namespace cisdag
