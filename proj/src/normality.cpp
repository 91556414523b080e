#include "sdm/normality.hpp"

#include <algorithm>
#include <cmath>

#include "sdm/errors.hpp"
#include "sdm/normal.hpp"
#include "sdm/smoothing.hpp"

namespace sdm {

namespace {

// Royston (1992/1995) polynomial constants, lowest order first.
constexpr double kC1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
constexpr double kC2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr double kC3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr double kC4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr double kC5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr double kC6[3] = {-0.4803, -0.082676, 0.0030302};
constexpr double kG[2] = {-2.273, 0.459};

double poly(const double* c, int order, double x) {
    double v = 0.0;
    for (int i = order - 1; i >= 0; --i) v = v * x + c[i];
    return v;
}

// p-value of W via the Royston normalizing transformation
double sw_p_value(double w, std::size_t n) {
    if (n == 3) {
        // exact for n = 3
        constexpr double kPi6 = 1.90985931710274;    // 6/pi
        constexpr double kStqr = 1.04719755119660;   // asin(sqrt(3/4))
        double p = kPi6 * (std::asin(std::sqrt(std::clamp(w, 0.75, 1.0))) - kStqr);
        return std::clamp(p, 0.0, 1.0);
    }
    double w1 = 1.0 - w;
    if (w1 <= 0.0) return 1.0;
    double y = std::log(w1);
    double an = static_cast<double>(n);
    double m, s;
    if (n <= 11) {
        double gamma = poly(kG, 2, an);
        if (y >= gamma) return 1e-99;
        y = -std::log(gamma - y);
        m = poly(kC3, 4, an);
        s = std::exp(poly(kC4, 4, an));
    } else {
        double xx = std::log(an);
        m = poly(kC5, 4, xx);
        s = std::exp(poly(kC6, 3, xx));
    }
    return std::clamp(norm_sf((y - m) / s), 0.0, 1.0);
}

}  // namespace

SwCoefficients sw_coefficients(std::size_t n) {
    if (n < 3 || n > 5000)
        throw validation_error("sw_coefficients: n must be in [3, 5000]");

    const std::size_t n2 = n / 2;
    std::vector<double> half(n2);  // positive weights for the upper order statistics

    if (n == 3) {
        half[0] = std::sqrt(0.5);
    } else {
        // Blom scores of the lower half (negative, most extreme first)
        std::vector<double> m(n2);
        double summ2 = 0.0;
        for (std::size_t i = 0; i < n2; ++i) {
            m[i] = norm_ppf((static_cast<double>(i + 1) - 0.375) / (static_cast<double>(n) + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
        const double a1 = poly(kC1, 6, rsn) - m[0] / ssumm2;

        std::size_t first_raw;
        double fac;
        if (n > 5) {
            const double a2 = poly(kC2, 6, rsn) - m[1] / ssumm2;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            half[1] = a2;
            first_raw = 2;
        } else {
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
            first_raw = 1;
        }
        half[0] = a1;
        for (std::size_t i = first_raw; i < n2; ++i) half[i] = -m[i] / fac;
    }

    SwCoefficients coef;
    coef.n = n;
    coef.a.assign(n, 0.0);
    for (std::size_t i = 0; i < n2; ++i) {
        coef.a[i] = -half[i];
        coef.a[n - 1 - i] = half[i];
    }
    return coef;
}

SwResult sw_statistic(std::span<const double> sample, double alpha) {
    const std::size_t n = sample.size();
    if (n < 3) throw validation_error("sw_statistic: need at least 3 observations");
    if (n > 5000) throw validation_error("sw_statistic: n > 5000 unsupported");

    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back())
        throw validation_error("sw_statistic: sample is constant (zero variance)");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    const SwCoefficients coef = sw_coefficients(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += coef.a[i] * x[i];
        den += (x[i] - mean) * (x[i] - mean);
    }

    SwResult res;
    res.n = n;
    res.alpha = alpha;
    res.w = num * num / den;
    res.p_value = sw_p_value(res.w, n);
    res.reject_normality = res.p_value < alpha;
    return res;
}

SwResult sw_test_increments(const SampleSeries& series, std::size_t feature, double alpha) {
    if (series.n_rows() < 4)
        throw validation_error("sw_test_increments: need at least 4 rows");
    if (feature >= series.n_features)
        throw validation_error("sw_test_increments: feature index out of range");
    const std::vector<double> diffs = increments(series.column(feature));
    return sw_statistic(diffs, alpha);
}

}  // namespace sdm
