#pragma once

// UDU' factorization and the SPD operations built on it.  K = U D U' with U
// unit upper triangular and D positive diagonal, computed by eliminating the
// last row first.  Each elimination step is exactly the Schur complement that
// marginalizes out the last remaining variable, so the intermediate matrices
// this routine walks through are the marginal precisions the rest of the
// library reasons about.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cisdag/errors.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {

struct UduFactors {
    UnitUpperTriangular u;
    PosDiagonal d;
};

// Marginal precision after integrating out variable k:
//   M = K_{-k,-k} - K_{-k,k} K_{k,-k} / K_{k,k}.
inline SymMatrix marginal_precision(const SymMatrix& k, std::size_t drop, const Tolerance& tol = {}) {
    const std::size_t m = k.dim();
    if (drop >= m) throw DimensionMismatch("marginal_precision: index out of range");
    const double pivot = k(drop, drop);
    if (pivot <= tol.abs)
        throw NotPositiveDefinite("marginal_precision: pivot " + std::to_string(pivot) +
                                  " at variable " + std::to_string(drop + 1));
    SymMatrix out(m - 1);
    std::size_t oi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == drop) continue;
        std::size_t oj = oi;
        for (std::size_t j = i; j < m; ++j) {
            if (j == drop) continue;
            out.set(oi, oj, k(i, j) - k(i, drop) * k(j, drop) / pivot);
            ++oj;
        }
        ++oi;
    }
    return out;
}

inline UduFactors udu_factor(const SymMatrix& k, const Tolerance& tol = {}) {
    const std::size_t m = k.dim();
    if (m == 0) throw DimensionMismatch("udu_factor: empty matrix");
    SymMatrix w = k;
    UnitUpperTriangular u(m);
    std::vector<double> d(m);
    std::vector<double> col(m);
    for (std::size_t j = m; j-- > 1;) {
        const double pivot = w(j, j);
        if (pivot <= tol.abs)
            throw NotPositiveDefinite("udu_factor: pivot " + std::to_string(pivot) +
                                      " at row " + std::to_string(j + 1));
        d[j] = pivot;
        for (std::size_t i = 0; i < j; ++i) {
            col[i] = w(i, j);
            u.set(i, j, col[i] / pivot);
        }
        for (std::size_t kk = 0; kk < j; ++kk)
            for (std::size_t i = 0; i <= kk; ++i)
                w.add(i, kk, -col[i] * col[kk] / pivot);
    }
    if (w(0, 0) <= tol.abs)
        throw NotPositiveDefinite("udu_factor: pivot " + std::to_string(w(0, 0)) + " at row 1");
    d[0] = w(0, 0);
    return UduFactors{std::move(u), PosDiagonal(std::move(d))};
}

// Inverse of a unit upper triangular factor, again unit upper triangular.
inline UnitUpperTriangular invert_unit_upper(const UnitUpperTriangular& u) {
    const std::size_t m = u.dim();
    UnitUpperTriangular w(m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = j; i-- > 0;) {
            double s = u(i, j);
            for (std::size_t kk = i + 1; kk < j; ++kk) s += u(i, kk) * w(kk, j);
            w.set(i, j, -s);
        }
    return w;
}

// Inverse of an SPD matrix via K = U D U'  =>  K^{-1} = W' D^{-1} W, W = U^{-1}.
inline SymMatrix invert_spd(const SymMatrix& k, const Tolerance& tol = {}) {
    const UduFactors f = udu_factor(k, tol);
    const UnitUpperTriangular w = invert_unit_upper(f.u);
    const std::size_t m = k.dim();
    SymMatrix out(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t kk = 0; kk <= i; ++kk) s += w(kk, i) * w(kk, j) / f.d[kk];
            out.set(i, j, s);
        }
    return out;
}

inline std::vector<double> spd_solve(const SymMatrix& k, const std::vector<double>& b,
                                     const Tolerance& tol = {}) {
    const std::size_t m = k.dim();
    if (b.size() != m) throw DimensionMismatch("spd_solve: rhs length mismatch");
    const UduFactors f = udu_factor(k, tol);
    std::vector<double> x(m);
    // K = U D U', so solve U t = b (backward), scale by D, then U' x = t.
    for (std::size_t i = m; i-- > 0;) {
        double s = b[i];
        for (std::size_t kk = i + 1; kk < m; ++kk) s -= f.u(i, kk) * x[kk];
        x[i] = s;
    }
    for (std::size_t i = 0; i < m; ++i) x[i] /= f.d[i];
    for (std::size_t i = 0; i < m; ++i) {
        double s = x[i];
        for (std::size_t kk = 0; kk < i; ++kk) s -= f.u(kk, i) * x[kk];
        x[i] = s;
    }
    return x;
}

inline double log_det_spd(const SymMatrix& k, const Tolerance& tol = {}) {
    const UduFactors f = udu_factor(k, tol);
    double s = 0.0;
    for (std::size_t i = 0; i < k.dim(); ++i) s += std::log(f.d[i]);
    return s;
}

// Conjugation by a permutation: out(i,j) = M(sigma[i], sigma[j]).  Variable
// sigma[p] of M becomes variable p of the result.
inline SymMatrix permute_sym(const SymMatrix& m, const Ordering& sigma) {
    if (sigma.size() != m.dim()) throw DimensionMismatch("permute_sym: ordering length mismatch");
    SymMatrix out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = i; j < m.dim(); ++j) out.set(i, j, m(sigma[i], sigma[j]));
    return out;
}

} // namespace cisdag
