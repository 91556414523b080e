#include "sdm/smoothing.hpp"

#include "sdm/errors.hpp"

namespace sdm {

std::vector<double> increments(std::span<const double> v) {
    if (v.size() < 2) throw validation_error("increments: need at least 2 values");
    std::vector<double> out(v.size() - 1);
    for (std::size_t k = 0; k + 1 < v.size(); ++k) out[k] = v[k + 1] - v[k];
    return out;
}

SmoothedSeries smooth_series(const SampleSeries& series, std::size_t feature) {
    if (series.n_rows() < 2) throw validation_error("smooth_series: need at least 2 rows");
    if (feature >= series.n_features)
        throw validation_error("smooth_series: feature index out of range");

    SmoothedSeries out;
    out.times = series.times;
    out.source_length = series.n_rows();
    out.name = series.feature_names[feature];
    out.values.resize(series.n_rows());
    out.values[0] = series.value(0, feature);
    for (std::size_t k = 0; k + 1 < series.n_rows(); ++k)
        out.values[k + 1] = (series.value(k, feature) + series.value(k + 1, feature)) / 2.0;
    return out;
}

}  // namespace sdm
