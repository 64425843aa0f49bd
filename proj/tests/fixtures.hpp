// Shared numeric fixtures.  Expected values were computed independently
// (exact rational arithmetic or a reference linear-algebra stack) before the
// library existed; tests freeze them rather than re-deriving them here.

#pragma once

#include <vector>

#include "cisdag/cisdag.hpp"

namespace fixtures {

using cisdag::Matrix;
using cisdag::SymMatrix;

// Four-cycle Gaussian, published rounded to two decimals.
inline SymMatrix fourcycle_sigma() {
    return SymMatrix::from_rows({{1.00, 0.75, 0.50, 0.14},
                                 {0.75, 1.00, 0.81, 0.50},
                                 {0.50, 0.81, 1.00, 0.75},
                                 {0.14, 0.50, 0.75, 1.00}});
}

// Its published precision, same rounding.
inline SymMatrix fourcycle_k_printed() {
    return SymMatrix::from_rows({{2.77, -2.51, 0.00, 0.88},
                                 {-2.51, 5.49, -3.20, 0.00},
                                 {0.00, -3.20, 5.49, -2.51},
                                 {0.88, 0.00, -2.51, 2.77}});
}

// Published marginal precision of {1,3,4} (variable 2 integrated out).
inline SymMatrix fourcycle_marginal_printed() {
    return SymMatrix::from_rows({{1.61, -1.47, 0.88},
                                 {-1.47, 3.62, -2.51},
                                 {0.88, -2.51, 2.77}});
}

// Inverse of the rounded sigma above, computed exactly from those entries.
inline SymMatrix fourcycle_k_exact() {
    return SymMatrix::from_rows(
        {{2.7482741174904, -2.4866043896012, -0.0089036958450013, 0.865221590235693},
         {-2.4866043896012, 5.39959688022412, -3.12369350629719, -0.0089036958450013},
         {-0.0089036958450013, -3.12369350629719, 5.39959688022412, -2.4866043896012},
         {0.865221590235693, -0.0089036958450013, -2.4866043896012, 2.7482741174904}});
}

// Precision of the {1,3,4} margin of the rounded sigma, computed exactly.
inline SymMatrix fourcycle_marginal_exact() {
    return SymMatrix::from_rows({{1.60315133748626, -1.44741663613045, 0.861121289849762},
                                 {-1.44741663613045, 3.59252473433492, -2.49175522169293},
                                 {0.861121289849762, -2.49175522169293, 2.74825943569073}});
}

// Positively associated but never CIS: integer precision matrix.
inline SymMatrix pa_precision() {
    return SymMatrix::from_rows({{94, 25, -55, -23},
                                 {25, 7, -15, -6},
                                 {-55, -15, 33, 13},
                                 {-23, -6, 13, 6}});
}

// CIS under the identity but not an M-matrix (a = b = 1 instance).
inline SymMatrix cis_not_m_precision() {
    return SymMatrix::from_rows({{2, 1, -1}, {1, 2, -1}, {-1, -1, 1}});
}

// Covariance with exact rational entries whose identity ordering is CIS but
// whose {1,3,4} marginal is not.
inline SymMatrix fraction_sigma() {
    return SymMatrix::from_rows({{1.0 / 4, 1.0 / 4, 3.0 / 4, 29.0 / 16},
                                 {1.0 / 4, 5.0 / 4, 7.0 / 4, 77.0 / 16},
                                 {3.0 / 4, 7.0 / 4, 17.0 / 4, 167.0 / 16},
                                 {29.0 / 16, 77.0 / 16, 167.0 / 16, 1737.0 / 64}});
}

inline SymMatrix fraction_precision_exact() {
    return SymMatrix::from_rows({{145.0 / 16, 5.0 / 4, -3.0 / 2, -1.0 / 4},
                                 {5.0 / 4, 3, 1, -1},
                                 {-3.0 / 2, 1, 5, -2},
                                 {-1.0 / 4, -1, -2, 1}});
}

inline SymMatrix fraction_marginal_exact() {
    return SymMatrix::from_rows({{205.0 / 24, -23.0 / 12, 1.0 / 6},
                                 {-23.0 / 12, 14.0 / 3, -5.0 / 3},
                                 {1.0 / 6, -5.0 / 3, 2.0 / 3}});
}

// Two CIS matrices whose sum is not CIS (the CIS cone is not convex).
inline SymMatrix nonconvex_k1() {
    return SymMatrix::from_rows({{19, -1, 11, -4},
                                 {-1, 1, 0, 0},
                                 {11, 0, 10, -3},
                                 {-4, 0, -3, 1}});
}

inline SymMatrix nonconvex_k2() {
    return SymMatrix::from_rows({{2, -1, 0, 0},
                                 {-1, 2, -1, 0},
                                 {0, -1, 2, -1},
                                 {0, 0, -1, 1}});
}

inline SymMatrix nonconvex_sum_marginal_exact() {
    return SymMatrix::from_rows({{13, -2, 3}, {-2, 3, -1}, {3, -1, 4}});
}

// Tridiagonal M-matrix: every ordering is CIS and the covariance is positive.
inline SymMatrix tridiag_m_matrix() { return nonconvex_k2(); }

// U U' for unit upper U with rows (1,0,-1,-2), (0,1,-1,-1), (0,0,1,-1),
// (0,0,0,1); CIS exactly under 1234 and 2134.
inline SymMatrix two_ordering_precision() {
    return SymMatrix::from_rows({{6, 3, 1, -2},
                                 {3, 3, 0, -1},
                                 {1, 0, 2, -1},
                                 {-2, -1, -1, 1}});
}

} // namespace fixtures
