#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdm/series.hpp"

namespace sdm {

// Dense row-major matrix of observations (rows) by features (columns).
struct RowMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> data;  // row-major

    RowMatrix() = default;
    RowMatrix(std::size_t rows, std::size_t cols)
        : n_rows(rows), n_cols(cols), data(rows * cols, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * n_cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * n_cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * n_cols, n_cols};
    }
};

inline RowMatrix values_matrix(const SampleSeries& series) {
    RowMatrix m(series.n_rows(), series.n_features);
    m.data = series.values;
    return m;
}

}  // namespace sdm
