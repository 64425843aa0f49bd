#pragma once

// Gaussian model layer: covariance/precision pairs and linear SEM parameters
// (X = c + Lambda X + eps), convertible in both directions through the UDU'
// factorization.  noise_var stores Var(eps); the factorization's diagonal is
// its reciprocal, and precision_to_sem/sem_to_precision handle the flip.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cisdag/dataset.hpp"
#include "cisdag/errors.hpp"
#include "cisdag/factor.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {

struct CovariancePair {
    SymMatrix sigma;
    SymMatrix precision;

    std::size_t dim() const { return sigma.dim(); }

    static CovariancePair from_sigma(SymMatrix s, const Tolerance& tol = {}) {
        SymMatrix k = invert_spd(s, tol);
        return CovariancePair{std::move(s), std::move(k)};
    }

    static CovariancePair from_precision(SymMatrix k, const Tolerance& tol = {}) {
        SymMatrix s = invert_spd(k, tol);
        return CovariancePair{std::move(s), std::move(k)};
    }
};

// lambda and noise_var are indexed by the original variable labels; ordering
// says in which sequence the structural equations fire.  mean holds the
// intercepts c, not the stationary means (see implied_mean).
class SemParams {
public:
    SemParams() = default;

    SemParams(Ordering ordering, Matrix lambda, PosDiagonal noise_var,
              std::vector<double> mean = {})
        : ordering_(std::move(ordering)), lambda_(std::move(lambda)),
          noise_var_(std::move(noise_var)), mean_(std::move(mean)) {
        const std::size_t m = ordering_.size();
        if (lambda_.rows() != m || lambda_.cols() != m)
            throw DimensionMismatch("lambda must be " + std::to_string(m) + "x" + std::to_string(m));
        if (noise_var_.dim() != m)
            throw DimensionMismatch("noise_var length must match dimension");
        if (mean_.empty()) mean_.assign(m, 0.0);
        if (mean_.size() != m)
            throw DimensionMismatch("mean length must match dimension");
        const std::vector<std::size_t> pos = ordering_.positions();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (lambda_(i, j) != 0.0 && pos[j] >= pos[i])
                    throw DimensionMismatch(
                        "lambda(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") is nonzero but variable " + std::to_string(j + 1) +
                        " does not precede " + std::to_string(i + 1) + " in the ordering");
    }

    std::size_t dim() const { return ordering_.size(); }
    const Ordering& ordering() const { return ordering_; }
    const Matrix& lambda() const { return lambda_; }
    const PosDiagonal& noise_var() const { return noise_var_; }
    const std::vector<double>& mean() const { return mean_; }

private:
    Ordering ordering_;
    Matrix lambda_;
    PosDiagonal noise_var_;
    std::vector<double> mean_;
};

// K = (I - Lambda)' D^{-1} (I - Lambda) with D = Cov(eps).
inline CovariancePair sem_to_precision(const SemParams& p, const Tolerance& tol = {}) {
    const std::size_t m = p.dim();
    Matrix b = Matrix::identity(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (p.lambda()(i, j) != 0.0) b(i, j) -= p.lambda()(i, j);
    SymMatrix k(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < m; ++r) s += b(r, i) * b(r, j) / p.noise_var()[r];
            k.set(i, j, s);
        }
    return CovariancePair::from_precision(std::move(k), tol);
}

// Reads the SEM off K = U D U' after conjugating K into the requested order:
// Lambda' = (I - U)', noise variances are the reciprocal pivots.
inline SemParams precision_to_sem(const CovariancePair& cp, const Ordering& ordering,
                                  const Tolerance& tol = {}) {
    const std::size_t m = cp.dim();
    const SymMatrix kp = permute_sym(cp.precision, ordering);
    const UduFactors f = udu_factor(kp, tol);
    Matrix lambda(m, m);
    std::vector<double> noise(m);
    for (std::size_t pi = 0; pi < m; ++pi) {
        noise[ordering[pi]] = 1.0 / f.d[pi];
        for (std::size_t pj = 0; pj < pi; ++pj)
            lambda(ordering[pi], ordering[pj]) = -f.u(pj, pi);
    }
    return SemParams(ordering, std::move(lambda), PosDiagonal(std::move(noise)));
}

// Scaled Gaussian log-likelihood log det K - (1/n) tr(X'X K); the data is
// used as passed, callers wanting the centered version center first.
inline double log_likelihood(const SymMatrix& k, const Dataset& data, const Tolerance& tol = {}) {
    const std::size_t m = k.dim();
    if (data.cols() != m)
        throw DimensionMismatch("log_likelihood: data has " + std::to_string(data.cols()) +
                                " columns, precision is " + std::to_string(m) + "-dimensional");
    const double logdet = log_det_spd(k, tol);
    const double n = static_cast<double>(data.rows());
    double quad = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::vector<double>& xi = data.col(i);
        for (std::size_t j = 0; j < m; ++j) {
            const double kij = k(i, j);
            if (kij == 0.0) continue;
            const std::vector<double>& xj = data.col(j);
            double dot = 0.0;
            for (std::size_t r = 0; r < xi.size(); ++r) dot += xi[r] * xj[r];
            quad += kij * dot;
        }
    }
    return logdet - quad / n;
}

// Solves (I - Lambda) mu = c along the ordering.
inline std::vector<double> implied_mean(const SemParams& p) {
    const std::size_t m = p.dim();
    std::vector<double> mu(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        const std::size_t v = p.ordering()[pos];
        double s = p.mean()[v];
        for (std::size_t q = 0; q < pos; ++q) {
            const std::size_t w = p.ordering()[q];
            s += p.lambda()(v, w) * mu[w];
        }
        mu[v] = s;
    }
    return mu;
}

} // namespace cisdag
