#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdm/matrix.hpp"

// Energy-based density model trained as an extreme learning machine: hidden
// units get seeded random weights, layer l is annealed by the temperature
// t0 * cool^(l-1) (both its weights and bias are divided by the temperature,
// so colder layers are sharper energy functionals), and the read-out weights
// solve a ridge-regularized least-squares fit of the diagonal-Gaussian
// log-density of the training rows.  The empirical log-partition value
// log Z = logsumexp_i eval(row_i) normalizes the model over the observed
// states: sum_i exp(eval(row_i) - log_z) == 1.
//
// Weight draw order (part of the persistence contract): one GaussianStream
// seeded with `seed`; for each hidden unit l = 0..L-1, its d input weights
// are drawn first, then its bias.

namespace sdm {

struct ElmModel {
    std::size_t hidden_width = 0;        // L
    std::size_t input_dim = 0;           // d
    std::uint64_t seed = 0;
    std::vector<double> input_weights;   // L x d, row-major
    std::vector<double> biases;          // L
    std::vector<double> output_weights;  // L
    double output_bias = 0.0;            // intercept of the least-squares read-out
};

struct EbmModel {
    ElmModel elm;
    std::vector<double> temperatures;  // strictly decreasing annealing schedule
    double t0 = 0.0;
    double cool = 0.0;                 // multiplicative cooling factor in (0,1)
    double log_z = 0.0;                // empirical log-partition over the training rows
    std::size_t train_rows = 0;
};

// Ridge parameter of the least-squares read-out.
inline constexpr double kElmRidge = 1e-8;

ElmModel elm_fit(const RowMatrix& features, std::span<const double> targets,
                 std::size_t width, std::uint64_t seed);

double elm_eval(const ElmModel& model, std::span<const double> row);

// Per-row log-density under the diagonal Gaussian with per-feature sample
// mean and maximum-likelihood (1/N) variance.
std::vector<double> gaussian_log_density_target(const RowMatrix& rows);

EbmModel ebm_train(const RowMatrix& rows, std::size_t layers, double t0, double cool,
                   std::uint64_t seed);

// H(row) = eval(row) + log_z; higher energy = more probable state.
double ebm_energy(const EbmModel& model, std::span<const double> row);

// log sum_i exp(eval(row_i)), max-shifted for overflow safety.
double log_partition(const ElmModel& model, const RowMatrix& rows);

// Energy of every row.  The parallel kernel and its serial twin produce
// bit-identical results.
std::vector<double> batch_energies(const EbmModel& model, const RowMatrix& rows);

namespace reference {
std::vector<double> batch_energies(const EbmModel& model, const RowMatrix& rows);
}

// Text persistence: header "EBM,v1,L,d,seed,t0,alpha,log_z" followed by one
// line per tensor (input weights, biases, output weights, output bias,
// temperatures, train_rows), reals in 17-significant-digit decimals.
void write_model(const EbmModel& model, const std::string& path);
EbmModel read_model(const std::string& path);

}  // namespace sdm
