#pragma once

// Dense matrix types sized for graphical-model work: dimensions here are the
// number of variables, not the number of samples, so storage is plain
// row-major vectors and algorithms are written for clarity over blocking.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "cisdag/errors.hpp"

namespace cisdag {

// Absolute/relative slack for sign tests and pivot checks.  An off-diagonal
// entry of a symmetric matrix M counts as nonpositive when
//   M(i,j) <= abs + rel * sqrt(M(i,i) * M(j,j)).
struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-9;

    double threshold(double scale) const { return abs + rel * scale; }
};

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw DimensionMismatch("matrix needs at least one row");
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw DimensionMismatch("ragged rows: row " + std::to_string(i + 1) +
                                        " has " + std::to_string(rows[i].size()) +
                                        " entries, expected " + std::to_string(m.cols_));
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// Symmetric matrix with symmetry maintained by construction: set() writes the
// mirrored entry too, and from_rows() rejects input that is not exactly
// symmetric (callers that only have near-symmetric data symmetrize first).
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim, double fill = 0.0)
        : dim_(dim), data_(dim * dim, fill) {}

    static SymMatrix identity(std::size_t n) {
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
        return m;
    }

    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m = Matrix::from_rows(rows);
        return from_matrix(m);
    }

    static SymMatrix from_matrix(const Matrix& m) {
        if (m.rows() != m.cols())
            throw DimensionMismatch("symmetric matrix must be square, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
        SymMatrix s(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m(i, j) != m(j, i))
                    throw DimensionMismatch("matrix is not symmetric at (" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
                s.data_[i * s.dim_ + j] = m(i, j);
            }
        return s;
    }

    // Averages M and M' entrywise; for inputs symmetric up to rounding.
    static SymMatrix symmetrized(const Matrix& m) {
        if (m.rows() != m.cols())
            throw DimensionMismatch("symmetric matrix must be square");
        SymMatrix s(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = i; j < m.cols(); ++j)
                s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        return s;
    }

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        data_[i * dim_ + j] = v;
        data_[j * dim_ + i] = v;
    }

    void add(std::size_t i, std::size_t j, double v) { set(i, j, (*this)(i, j) + v); }

    Matrix dense() const {
        Matrix m(dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    bool operator==(const SymMatrix& o) const { return dim_ == o.dim_ && data_ == o.data_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

// Unit upper triangular factor: implicit ones on the diagonal, zeros below.
class UnitUpperTriangular {
public:
    UnitUpperTriangular() = default;
    explicit UnitUpperTriangular(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 1.0;
        if (i > j) return 0.0;
        return data_[i * dim_ + j];
    }

    void set(std::size_t i, std::size_t j, double v) {
        if (i >= j) throw DimensionMismatch("only strictly upper entries of a unit triangular factor are writable");
        data_[i * dim_ + j] = v;
    }

    Matrix dense() const {
        Matrix m(dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

// Strictly positive diagonal matrix, stored as its diagonal.
class PosDiagonal {
public:
    PosDiagonal() = default;
    explicit PosDiagonal(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!(values_[i] > 0.0))
                throw NotPositiveDefinite("diagonal entry " + std::to_string(i + 1) +
                                          " is not positive: " + std::to_string(values_[i]));
    }

    std::size_t dim() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

} // namespace cisdag
