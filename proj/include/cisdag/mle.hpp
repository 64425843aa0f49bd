#pragma once

// Maximum likelihood in Cholesky factor models: after permuting into the
// working ordering, each row of the SEM coefficient matrix solves its own
// least squares problem over the preceding columns, under one of four
// constraint kinds.  Rows decouple, so the fit is per-row exact.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cisdag/dataset.hpp"
#include "cisdag/errors.hpp"
#include "cisdag/lstsq.hpp"
#include "cisdag/model.hpp"
#include "cisdag/nnls.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {

enum class ConstraintKind { Free, Nonnegative, Support, NonnegativeSupport };

// support holds original variable labels and applies to the Support kinds;
// every support member must precede the constrained row's variable in the
// working ordering.
struct RowConstraint {
    ConstraintKind kind = ConstraintKind::Free;
    std::vector<std::size_t> support;

    static RowConstraint free() { return {ConstraintKind::Free, {}}; }
    static RowConstraint nonnegative() { return {ConstraintKind::Nonnegative, {}}; }
    static RowConstraint with_support(std::vector<std::size_t> s) {
        return {ConstraintKind::Support, std::move(s)};
    }
    static RowConstraint nonnegative_support(std::vector<std::size_t> s) {
        return {ConstraintKind::NonnegativeSupport, std::move(s)};
    }
};

struct MleFit {
    SemParams sem;
    double loglik = 0.0;
    std::vector<double> residual_norms;
    bool exists = false;
};

namespace detail {

struct RowSolve {
    std::vector<std::size_t> regressors; // original labels
    std::vector<double> beta;
    double residual_norm2 = 0.0;
};

inline RowSolve fit_row(const Dataset& centered, const Ordering& ordering, std::size_t pos,
                        const RowConstraint& constraint, const Tolerance& tol) {
    const std::vector<std::size_t> posmap = ordering.positions();
    RowSolve out;
    const bool restricted = constraint.kind == ConstraintKind::Support ||
                            constraint.kind == ConstraintKind::NonnegativeSupport;
    if (restricted) {
        out.regressors = constraint.support;
        for (std::size_t s : out.regressors) {
            if (s >= ordering.size())
                throw std::invalid_argument("support index " + std::to_string(s + 1) +
                                            " out of range");
            if (posmap[s] >= pos)
                throw std::invalid_argument(
                    "support variable " + std::to_string(s + 1) + " does not precede variable " +
                    std::to_string(ordering[pos] + 1) + " in the ordering");
        }
    } else {
        for (std::size_t q = 0; q < pos; ++q) out.regressors.push_back(ordering[q]);
    }

    const std::vector<double>& y = centered.col(ordering[pos]);
    ColumnView cols;
    cols.reserve(out.regressors.size());
    for (std::size_t w : out.regressors) cols.push_back(&centered.col(w));

    const bool nonneg = constraint.kind == ConstraintKind::Nonnegative ||
                        constraint.kind == ConstraintKind::NonnegativeSupport;
    out.beta = nonneg ? solve_nnls(cols, y, tol) : ols_min_norm(cols, y);

    double rn2 = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
        double res = y[r];
        for (std::size_t a = 0; a < cols.size(); ++a) res -= out.beta[a] * (*cols[a])[r];
        rn2 += res * res;
    }
    out.residual_norm2 = rn2;
    return out;
}

inline MleFit fit_impl(const Dataset& data, const Ordering& ordering,
                       const std::vector<RowConstraint>& constraints, const Tolerance& tol,
                       bool throw_on_nonexistence) {
    const std::size_t m = data.cols();
    const std::size_t n = data.rows();
    if (ordering.size() != m)
        throw DimensionMismatch("fit: ordering length does not match column count");
    if (constraints.size() + 1 != m)
        throw DimensionMismatch("fit: need " + std::to_string(m ? m - 1 : 0) +
                                " row constraints (first row has none), got " +
                                std::to_string(constraints.size()));

    const Dataset centered = data.centered();
    const std::vector<double> means = data.column_means();

    Matrix lambda(m, m);
    std::vector<double> noise(m), rnorms(m);
    MleFit fit;
    fit.exists = true;
    double logsum = 0.0;
    for (std::size_t pos = 0; pos < m; ++pos) {
        const std::size_t v = ordering[pos];
        RowSolve row = pos == 0 ? RowSolve{}
                                : fit_row(centered, ordering, pos, constraints[pos - 1], tol);
        if (pos == 0) {
            for (double val : centered.col(v)) row.residual_norm2 += val * val;
        }
        double varhat = 0.0;
        for (double val : centered.col(v)) varhat += val * val;
        varhat /= static_cast<double>(n);
        const double mean_rn2 = row.residual_norm2 / static_cast<double>(n);
        if (mean_rn2 <= 1e-12 * varhat) {
            fit.exists = false;
            if (throw_on_nonexistence)
                throw MleDoesNotExist("residual of variable " + std::to_string(v + 1) +
                                      " vanishes; the likelihood is unbounded");
            return fit;
        }
        for (std::size_t a = 0; a < row.regressors.size(); ++a)
            lambda(v, row.regressors[a]) = row.beta[a];
        noise[v] = mean_rn2;
        rnorms[v] = std::sqrt(row.residual_norm2);
        logsum += std::log(mean_rn2);
    }

    // intercepts chosen so the fitted SEM reproduces the sample means
    std::vector<double> intercept(m);
    for (std::size_t v = 0; v < m; ++v) {
        double c = means[v];
        for (std::size_t w = 0; w < m; ++w)
            if (lambda(v, w) != 0.0) c -= lambda(v, w) * means[w];
        intercept[v] = c;
    }

    fit.sem = SemParams(ordering, std::move(lambda), PosDiagonal(std::move(noise)),
                        std::move(intercept));
    fit.loglik = -logsum - static_cast<double>(m);
    fit.residual_norms = std::move(rnorms);
    return fit;
}

} // namespace detail

inline MleFit fit(const Dataset& data, const Ordering& ordering,
                  const std::vector<RowConstraint>& constraints, const Tolerance& tol = {}) {
    return detail::fit_impl(data, ordering, constraints, tol, true);
}

inline bool mle_exists(const Dataset& data, const Ordering& ordering,
                       const std::vector<RowConstraint>& constraints, const Tolerance& tol = {}) {
    return detail::fit_impl(data, ordering, constraints, tol, false).exists;
}

} // namespace cisdag
