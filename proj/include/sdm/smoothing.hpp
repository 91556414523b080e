#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdm/series.hpp"

// Maximum-likelihood signal extraction: the smoothed sequence keeps the
// first raw sample and replaces every later point by the average of the
// two raw samples ending there,
//
//   x_1 = s_1,   x_{k+1} = (s_k + s_{k+1}) / 2.
//
// Each smoothed point depends only on the two raw samples that formed it,
// so the output keeps the Markov structure of the input.

namespace sdm {

struct SmoothedSeries {
    std::vector<double> times;   // unchanged from the source
    std::vector<double> values;  // same length as the source
    std::size_t source_length = 0;
    std::string name;            // feature label carried through
};

// First differences v[k+1] - v[k]; output is one shorter than the input.
std::vector<double> increments(std::span<const double> v);

SmoothedSeries smooth_series(const SampleSeries& series, std::size_t feature);

}  // namespace sdm
