#include "sdm/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdm/errors.hpp"
#include "sdm/rng.hpp"

namespace sdm {

TwoPointDist::TwoPointDist(double a_val, double b_val) : a(a_val), b(b_val) {
    if (!(a < 0.0)) throw validation_error("TwoPointDist: a must be negative");
    if (!(b > 0.0)) throw validation_error("TwoPointDist: b must be positive");
}

double fit_sigma2(const SmoothedSeries& series) {
    const std::size_t n = series.times.size();
    if (n < 2) throw validation_error("fit_sigma2: need at least 2 points");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = series.times[k + 1] - series.times[k];
        if (!(dt > 0.0)) throw validation_error("fit_sigma2: non-positive time step");
        const double dx = series.values[k + 1] - series.values[k];
        acc += dx * dx / dt;
    }
    return acc / static_cast<double>(n - 1);
}

ForecastResult forecast(const SmoothedSeries& series, double horizon, double sigma2) {
    if (series.values.empty()) throw validation_error("forecast: empty series");
    if (!(horizon > 0.0)) throw validation_error("forecast: horizon must be positive");
    if (!(sigma2 >= 0.0)) throw validation_error("forecast: sigma2 must be >= 0");
    ForecastResult res;
    res.horizon = horizon;
    res.mean = series.values.back();  // zero-mean increments: martingale forecast
    res.variance = sigma2 * horizon;
    return res;
}

namespace {

void fill_path(double* out, std::size_t steps, double start, double step_sd,
               std::uint64_t stream_seed) {
    GaussianStream g(stream_seed);
    double w = start;
    for (std::size_t s = 0; s < steps; ++s) {
        w += step_sd * g.next();
        out[s] = w;
    }
}

struct TrialResult {
    double steps;
    bool hit_b;
};

TrialResult run_exit_trial(double a, double b, double sq_dt, std::uint64_t stream_seed) {
    GaussianStream g(stream_seed);
    double w = 0.0;
    std::size_t steps = 0;
    for (;;) {
        w += sq_dt * g.next();
        ++steps;
        if (w <= a || w >= b) break;
    }
    return {static_cast<double>(steps), w >= b};
}

void check_path_args(double sigma2, double dt, std::size_t steps, std::size_t n_paths) {
    if (!(sigma2 >= 0.0)) throw validation_error("sample_paths: sigma2 must be >= 0");
    if (!(dt > 0.0)) throw validation_error("sample_paths: dt must be positive");
    if (steps < 1) throw validation_error("sample_paths: steps must be >= 1");
    if (n_paths < 1) throw validation_error("sample_paths: need at least one path");
}

void check_exit_args(const TwoPointDist& dist, double dt, std::size_t trials) {
    if (!(dt > 0.0)) throw validation_error("skorokhod_exit: dt must be positive");
    const double limit = 0.01 * std::min(dist.a * dist.a, dist.b * dist.b);
    if (dt > limit)
        throw validation_error("skorokhod_exit: dt too coarse, need dt <= 0.01*min(a^2,b^2) = " +
                               std::to_string(limit));
    if (trials < 1) throw validation_error("skorokhod_exit: trials must be >= 1");
}

}  // namespace

PathSet sample_paths(double start, double sigma2, double dt, std::size_t steps,
                     std::size_t n_paths, std::uint64_t seed) {
    check_path_args(sigma2, dt, steps, n_paths);
    PathSet out;
    out.n_paths = n_paths;
    out.n_steps = steps;
    out.start = start;
    out.dt = dt;
    out.values.resize(n_paths * steps);
    const double step_sd = std::sqrt(sigma2 * dt);
    const auto m = static_cast<std::ptrdiff_t>(n_paths);

    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < m; ++p)
        fill_path(out.values.data() + static_cast<std::size_t>(p) * steps, steps, start,
                  step_sd, seed + static_cast<std::uint64_t>(p));
    return out;
}

SampleSeries simulate_brownian(std::size_t steps, double dt, std::uint64_t seed) {
    if (steps < 1) throw validation_error("simulate_brownian: steps must be >= 1");
    if (!(dt > 0.0)) throw validation_error("simulate_brownian: dt must be positive");

    SampleSeries series;
    series.n_features = 1;
    series.feature_names = {"v1"};
    series.times.resize(steps + 1);
    series.values.resize(steps + 1);
    series.times[0] = 0.0;
    series.values[0] = 0.0;
    GaussianStream g(seed);
    const double sq = std::sqrt(dt);
    for (std::size_t s = 1; s <= steps; ++s) {
        series.times[s] = static_cast<double>(s) * dt;
        series.values[s] = series.values[s - 1] + sq * g.next();
    }
    return series;
}

ExitStats skorokhod_exit(const TwoPointDist& dist, double dt, std::size_t trials,
                         std::uint64_t seed) {
    check_exit_args(dist, dt, trials);
    const double sq_dt = std::sqrt(dt);
    const auto n = static_cast<std::ptrdiff_t>(trials);

    // per-trial slots keep the reduction order fixed regardless of threads
    std::vector<double> exit_steps(trials);
    std::vector<unsigned char> hit(trials);

    #pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const TrialResult r = run_exit_trial(dist.a, dist.b, sq_dt,
                                             seed + static_cast<std::uint64_t>(k));
        exit_steps[k] = r.steps;
        hit[k] = r.hit_b ? 1 : 0;
    }

    double step_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        step_sum += exit_steps[k];
        hits += hit[k];
    }
    return {step_sum * dt / static_cast<double>(trials),
            static_cast<double>(hits) / static_cast<double>(trials)};
}

namespace reference {

PathSet sample_paths(double start, double sigma2, double dt, std::size_t steps,
                     std::size_t n_paths, std::uint64_t seed) {
    check_path_args(sigma2, dt, steps, n_paths);
    PathSet out;
    out.n_paths = n_paths;
    out.n_steps = steps;
    out.start = start;
    out.dt = dt;
    out.values.resize(n_paths * steps);
    const double step_sd = std::sqrt(sigma2 * dt);
    for (std::size_t p = 0; p < n_paths; ++p)
        fill_path(out.values.data() + p * steps, steps, start, step_sd,
                  seed + static_cast<std::uint64_t>(p));
    return out;
}

ExitStats skorokhod_exit(const TwoPointDist& dist, double dt, std::size_t trials,
                         std::uint64_t seed) {
    check_exit_args(dist, dt, trials);
    const double sq_dt = std::sqrt(dt);
    double step_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        const TrialResult r = run_exit_trial(dist.a, dist.b, sq_dt,
                                             seed + static_cast<std::uint64_t>(k));
        step_sum += r.steps;
        if (r.hit_b) ++hits;
    }
    return {step_sum * dt / static_cast<double>(trials),
            static_cast<double>(hits) / static_cast<double>(trials)};
}

}  // namespace reference

}  // namespace sdm
