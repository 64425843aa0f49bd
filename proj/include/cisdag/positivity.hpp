#pragma once

// Sign-pattern checks on Gaussian models: CIS under an ordering, the M-matrix
// (MTP2) property, positive association, and exhaustive enumeration of CIS
// orderings by branch-and-prune over marginal precisions.
//
// All sign tests share one convention: an off-diagonal entry u of a symmetric
// matrix counts as nonpositive iff u <= tol.abs + tol.rel * sqrt(d_i * d_j)
// with d_i, d_j the incident diagonal entries, so decisions are invariant
// under rescaling of the variables.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cisdag/errors.hpp"
#include "cisdag/factor.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/model.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {

struct ViolatingEntry {
    std::size_t row;
    std::size_t col;
    double value; // 0 marks a boundary tie (|entry| within tolerance of zero)
};

struct PositivityReport {
    bool is_cis_under_given_ordering = false;
    bool is_mtp2 = false;
    bool is_positively_associated = false;
    std::vector<ViolatingEntry> violating_entries;
};

namespace detail {

inline double sign_scale(const SymMatrix& m, std::size_t i, std::size_t j) {
    const double di = m(i, i) > 0.0 ? m(i, i) : 0.0;
    const double dj = m(j, j) > 0.0 ? m(j, j) : 0.0;
    return std::sqrt(di * dj);
}

inline bool entry_nonpositive(const SymMatrix& m, std::size_t i, std::size_t j,
                              const Tolerance& tol) {
    return m(i, j) <= tol.threshold(sign_scale(m, i, j));
}

// Walks the elimination from the last permuted row upward; each stage tests
// the row about to be eliminated against the current marginal precision.  If
// collect is non-null the scan runs to completion and records offenders
// (positive entries with their value, boundary ties as 0) in original labels.
inline bool cis_scan(const SymMatrix& k, const Ordering& sigma, const Tolerance& tol,
                     std::vector<ViolatingEntry>* collect) {
    SymMatrix w = permute_sym(k, sigma);
    const std::size_t m = w.dim();
    bool ok = true;
    for (std::size_t j = m; j-- > 1;) {
        for (std::size_t i = 0; i < j; ++i) {
            const double thresh = tol.threshold(sign_scale(w, i, j));
            const double v = w(i, j);
            if (v > thresh) {
                ok = false;
                if (!collect) return false;
                collect->push_back({sigma[i], sigma[j], v});
            } else if (collect && v >= -thresh) {
                collect->push_back({sigma[i], sigma[j], 0.0});
            }
        }
        const double pivot = w(j, j);
        if (pivot <= tol.abs)
            throw NotPositiveDefinite("cis check: pivot " + std::to_string(pivot) +
                                      " at permuted row " + std::to_string(j + 1));
        for (std::size_t kk = 0; kk < j; ++kk) {
            const double wkj = w(kk, j);
            if (wkj == 0.0) continue;
            for (std::size_t i = 0; i <= kk; ++i)
                if (w(i, j) != 0.0) w.add(i, kk, -w(i, j) * wkj / pivot);
        }
    }
    if (w(0, 0) <= tol.abs)
        throw NotPositiveDefinite("cis check: pivot " + std::to_string(w(0, 0)) +
                                  " at permuted row 1");
    return ok;
}

} // namespace detail

inline bool is_cis(const CovariancePair& cp, const Ordering& sigma, const Tolerance& tol = {}) {
    if (sigma.size() != cp.dim()) throw DimensionMismatch("is_cis: ordering length mismatch");
    return detail::cis_scan(cp.precision, sigma, tol, nullptr);
}

inline bool is_m_matrix(const SymMatrix& k, const Tolerance& tol = {}) {
    try {
        udu_factor(k, tol);
    } catch (const NotPositiveDefinite&) {
        return false;
    }
    for (std::size_t i = 0; i < k.dim(); ++i)
        for (std::size_t j = i + 1; j < k.dim(); ++j)
            if (!detail::entry_nonpositive(k, i, j, tol)) return false;
    return true;
}

inline bool is_positively_associated(const SymMatrix& sigma, const Tolerance& tol = {}) {
    for (std::size_t i = 0; i < sigma.dim(); ++i)
        for (std::size_t j = i; j < sigma.dim(); ++j)
            if (sigma(i, j) < -tol.threshold(detail::sign_scale(sigma, i, j))) return false;
    return true;
}

inline PositivityReport positivity_report(const CovariancePair& cp, const Ordering& sigma,
                                          const Tolerance& tol = {}) {
    if (sigma.size() != cp.dim())
        throw DimensionMismatch("positivity_report: ordering length mismatch");
    PositivityReport rep;
    rep.is_cis_under_given_ordering =
        detail::cis_scan(cp.precision, sigma, tol, &rep.violating_entries);
    rep.is_mtp2 = is_m_matrix(cp.precision, tol);
    rep.is_positively_associated = is_positively_associated(cp.sigma, tol);
    return rep;
}

namespace detail {

inline void enumerate_rec(const SymMatrix& k, std::vector<std::size_t>& active,
                          std::vector<std::size_t>& tail, const Tolerance& tol,
                          std::vector<Ordering>& out) {
    const std::size_t a = active.size();
    auto emit = [&](std::vector<std::size_t> head) {
        for (std::size_t t = tail.size(); t-- > 0;) head.push_back(tail[t]);
        out.emplace_back(std::move(head));
    };
    if (a == 1) {
        emit({active[0]});
        return;
    }
    if (a == 2) {
        if (entry_nonpositive(k, 0, 1, tol)) {
            emit({active[0], active[1]});
            emit({active[1], active[0]});
        }
        return;
    }
    for (std::size_t j = 0; j < a; ++j) {
        bool row_ok = true;
        for (std::size_t i = 0; i < a && row_ok; ++i)
            if (i != j && !entry_nonpositive(k, i, j, tol)) row_ok = false;
        if (!row_ok) continue;
        tail.push_back(active[j]);
        std::vector<std::size_t> rest = active;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
        SymMatrix down = marginal_precision(k, j, tol);
        enumerate_rec(down, rest, tail, tol, out);
        tail.pop_back();
    }
}

} // namespace detail

// All CIS orderings, emitted deterministically: the recursion picks the
// last-placed variable in ascending label order, and the final two positions
// emit ascending-first.
inline std::vector<Ordering> enumerate_cis_orderings(const CovariancePair& cp,
                                                     const Tolerance& tol = {},
                                                     std::size_t cap = 10) {
    const std::size_t m = cp.dim();
    if (m > cap)
        throw DimensionTooLarge("enumerate_cis_orderings: dimension " + std::to_string(m) +
                                " exceeds cap " + std::to_string(cap));
    std::vector<Ordering> out;
    std::vector<std::size_t> active(m);
    for (std::size_t i = 0; i < m; ++i) active[i] = i;
    std::vector<std::size_t> tail;
    detail::enumerate_rec(cp.precision, active, tail, tol, out);
    return out;
}

} // namespace cisdag
