#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Canonical data model for sensor time series and its CSV persistence.
//
// File format: UTF-8, '\n' line endings, '.' decimal separator, rows of
// "t,v1[,...,vs]", optional header line beginning "t,".  Reals are written
// with 17 significant digits so that a write/load round trip is bit-exact.

namespace sdm {

struct SampleSeries {
    std::vector<double> times;               // strictly increasing, seconds
    std::vector<std::string> feature_names;  // s labels
    std::vector<double> values;              // row-major, n_rows() x n_features
    std::size_t n_features = 0;

    std::size_t n_rows() const { return times.size(); }
    double value(std::size_t row, std::size_t col) const {
        return values[row * n_features + col];
    }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * n_features, n_features};
    }
    std::vector<double> column(std::size_t col) const;
};

SampleSeries load_series(const std::string& path, bool has_header);

// True when the first line of the file starts with "t," (the header
// convention used by write_series).  Lets the CLI ingest its own output
// without a flag.
bool sniff_header(const std::string& path);

// One message per violated invariant; empty iff the series is valid.
std::vector<std::string> validate_series(const SampleSeries& series);

void write_series(const SampleSeries& series, const std::string& path);

}  // namespace sdm
