#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdm/series.hpp"
#include "sdm/smoothing.hpp"

// Diffusion-coefficient estimation, martingale forecasting with N(0, t-s)
// increments, seeded Brownian path simulation, and a Monte-Carlo check of
// the exit-time identity E[T] = sigma^2 for two-point endpoint
// distributions.
//
// All simulations are reproducible: trial (or path) k draws from a
// GaussianStream seeded with seed + k, so results do not depend on thread
// count or execution order.  The OpenMP kernels and their serial twins in
// sdm::reference produce bit-identical output.

namespace sdm {

struct PathSet {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double start = 0.0;
    double dt = 0.0;
    std::vector<double> values;  // row-major, n_paths x n_steps (values after each step)

    double at(std::size_t path, std::size_t step) const {
        return values[path * n_steps + step];
    }
};

struct ForecastResult {
    double horizon = 0.0;   // seconds past the last observation
    double mean = 0.0;      // last smoothed value
    double variance = 0.0;  // sigma2 * horizon
    std::uint64_t seed = 0;
    std::optional<PathSet> paths;
};

// Zero-mean two-point distribution: value a with probability b/(b-a),
// value b with probability -a/(b-a); variance is -a*b.
struct TwoPointDist {
    double a; // negative endpoint
    double b; // positive endpoint

    TwoPointDist(double a_val, double b_val);
    double p_a() const { return b / (b - a); }
    double p_b() const { return -a / (b - a); }
    double sigma2() const { return -a * b; }
};

struct ExitStats {
    double mean_exit_time = 0.0;
    double hit_b_frequency = 0.0;
};

// MLE of the diffusion coefficient under independent N(0, sigma2*dt)
// increments: mean of (dx_k)^2 / dt_k.
double fit_sigma2(const SmoothedSeries& series);

ForecastResult forecast(const SmoothedSeries& series, double horizon, double sigma2);

PathSet sample_paths(double start, double sigma2, double dt, std::size_t steps,
                     std::size_t n_paths, std::uint64_t seed);

// Unit-diffusion path with B_0 = 0, sampled on the grid 0, dt, ..., steps*dt.
SampleSeries simulate_brownian(std::size_t steps, double dt, std::uint64_t seed);

// Euler-discretized first exit of (a, b) for unit Brownian motion started
// at 0.  Requires dt <= 0.01 * min(a^2, b^2) to keep discretization bias
// well below the exit-time identity tolerances.
ExitStats skorokhod_exit(const TwoPointDist& dist, double dt, std::size_t trials,
                         std::uint64_t seed);

namespace reference {
PathSet sample_paths(double start, double sigma2, double dt, std::size_t steps,
                     std::size_t n_paths, std::uint64_t seed);
ExitStats skorokhod_exit(const TwoPointDist& dist, double dt, std::size_t trials,
                         std::uint64_t seed);
}  // namespace reference

}  // namespace sdm
