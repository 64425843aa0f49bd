#pragma once

// Sample matrix with column-major storage: every algorithm in this library
// consumes whole variables (columns), never whole observations.

#include <cstddef>
#include <string>
#include <vector>

#include "cisdag/errors.hpp"

namespace cisdag {

class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols, std::vector<double>(rows, 0.0)) {}

    static Dataset from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw DimensionMismatch("dataset needs at least one row");
        Dataset d(rows.size(), rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != d.cols())
                throw DimensionMismatch("ragged rows: row " + std::to_string(r + 1));
            for (std::size_t c = 0; c < d.cols(); ++c) d.cols_[c][r] = rows[r][c];
        }
        return d;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }

    double at(std::size_t r, std::size_t c) const { return cols_[c][r]; }
    double& at(std::size_t r, std::size_t c) { return cols_[c][r]; }

    const std::vector<double>& col(std::size_t c) const { return cols_[c]; }
    std::vector<double>& col(std::size_t c) { return cols_[c]; }

    std::vector<double> column_means() const {
        std::vector<double> mu(cols());
        for (std::size_t c = 0; c < cols(); ++c) {
            double s = 0.0;
            for (double v : cols_[c]) s += v;
            mu[c] = s / static_cast<double>(rows_);
        }
        return mu;
    }

    Dataset centered() const {
        Dataset d = *this;
        const std::vector<double> mu = column_means();
        for (std::size_t c = 0; c < cols(); ++c)
            for (double& v : d.cols_[c]) v -= mu[c];
        return d;
    }

private:
    std::size_t rows_ = 0;
    std::vector<std::vector<double>> cols_;
};

} // namespace cisdag
