#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdm/series.hpp"

// Shapiro-Wilk normality test, Royston's AS R94 approximation
// (valid for sample sizes 3..5000).
//
//   W = (sum_k a_k x_(k))^2 / sum_i (x_i - mean)^2
//
// with the weights a_k approximating m^T V^-1 normalized to unit length.
// The weight vector is antisymmetric (a_k = -a_{n+1-k}), so W is invariant
// under affine maps of the sample.

namespace sdm {

struct SwCoefficients {
    std::size_t n = 0;
    std::vector<double> a;  // full antisymmetric vector, a[0] < 0
};

struct SwResult {
    double w = 0.0;
    double p_value = 0.0;
    bool reject_normality = false;
    std::size_t n = 0;
    double alpha = 0.05;  // significance level the rejection flag was set against
};

SwCoefficients sw_coefficients(std::size_t n);

SwResult sw_statistic(std::span<const double> sample, double alpha = 0.05);

// Applies sw_statistic to the first-difference sequence of one feature
// column.  Needs at least 4 rows so the differences have length >= 3.
SwResult sw_test_increments(const SampleSeries& series, std::size_t feature, double alpha);

}  // namespace sdm
