#pragma once

// Least squares on column blocks.  Solves run on the Gram matrix: a UDU'
// solve when it is comfortably positive definite, otherwise an eigenvalue
// pseudo-inverse, which makes rank-deficient designs yield the minimum-norm
// solution (Z+ = (Z'Z)+ Z').

#include <cmath>
#include <cstddef>
#include <vector>

#include "cisdag/errors.hpp"
#include "cisdag/factor.hpp"
#include "cisdag/matrix.hpp"

namespace cisdag {

using ColumnView = std::vector<const std::vector<double>*>;

struct SymEigen {
    std::vector<double> values;
    Matrix vectors; // columns are eigenvectors
};

// Cyclic Jacobi; plenty at the dimensions this library sees.
inline SymEigen jacobi_symmetric(const SymMatrix& m, std::size_t max_sweeps = 64) {
    const std::size_t k = m.dim();
    Matrix a = m.dense();
    Matrix v = Matrix::identity(k);
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) off += a(p, q) * a(p, q);
        if (off <= 1e-300) break;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) {
                const double apq = a(p, q);
                const double small = 1e-18 * (std::abs(a(p, p)) + std::abs(a(q, q)));
                if (std::abs(apq) <= small) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < k; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    const double apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }
    SymEigen e;
    e.values.resize(k);
    for (std::size_t i = 0; i < k; ++i) e.values[i] = a(i, i);
    e.vectors = v;
    return e;
}

namespace detail {

inline SymMatrix gram(const ColumnView& cols) {
    SymMatrix g(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t j = i; j < cols.size(); ++j) {
            double s = 0.0;
            const std::vector<double>& a = *cols[i];
            const std::vector<double>& b = *cols[j];
            for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * b[r];
            g.set(i, j, s);
        }
    return g;
}

inline std::vector<double> gram_rhs(const ColumnView& cols, const std::vector<double>& y) {
    std::vector<double> c(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        double s = 0.0;
        const std::vector<double>& a = *cols[i];
        for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * y[r];
        c[i] = s;
    }
    return c;
}

// Solve G b = c for SPD-ish G; pseudo-inverse when G is (near-)singular.
inline std::vector<double> solve_gram(const SymMatrix& g, const std::vector<double>& c) {
    const std::size_t k = g.dim();
    if (k == 0) return {};
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, g(i, i));
    if (max_diag <= 0.0) return std::vector<double>(k, 0.0);
    try {
        return spd_solve(g, c, Tolerance{1e-8 * max_diag, 0.0});
    } catch (const NotPositiveDefinite&) {
        const SymEigen e = jacobi_symmetric(g);
        double lmax = 0.0;
        for (double l : e.values) lmax = std::max(lmax, l);
        const double cutoff = 1e-10 * lmax;
        std::vector<double> b(k, 0.0);
        for (std::size_t v = 0; v < k; ++v) {
            if (e.values[v] <= cutoff) continue;
            double proj = 0.0;
            for (std::size_t i = 0; i < k; ++i) proj += e.vectors(i, v) * c[i];
            proj /= e.values[v];
            for (std::size_t i = 0; i < k; ++i) b[i] += e.vectors(i, v) * proj;
        }
        return b;
    }
}

} // namespace detail

// Minimum-norm OLS of y on the given columns.
inline std::vector<double> ols_min_norm(const ColumnView& cols, const std::vector<double>& y) {
    if (cols.empty()) return {};
    for (const auto* c : cols)
        if (c->size() != y.size()) throw DimensionMismatch("ols: column/response length mismatch");
    return detail::solve_gram(detail::gram(cols), detail::gram_rhs(cols, y));
}

} // namespace cisdag
