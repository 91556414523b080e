#include "sdm/ebm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sdm/errors.hpp"
#include "sdm/real_text.hpp"
#include "sdm/rng.hpp"

namespace sdm {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

void check_rows(const RowMatrix& m, const char* where) {
    if (m.n_rows == 0 || m.n_cols == 0)
        throw validation_error(std::string(where) + ": empty input matrix");
    for (double v : m.data)
        if (!std::isfinite(v)) throw validation_error(std::string(where) + ": non-finite input");
}

// hidden unit weights and bias, drawn sequentially per unit
void draw_weights(std::size_t width, std::size_t dim, std::uint64_t seed,
                  std::vector<double>& weights, std::vector<double>& biases) {
    GaussianStream stream(seed);
    weights.resize(width * dim);
    biases.resize(width);
    for (std::size_t l = 0; l < width; ++l) {
        for (std::size_t j = 0; j < dim; ++j) weights[l * dim + j] = stream.next();
        biases[l] = stream.next();
    }
}

// N x (L+1) activation matrix, last column constant 1 for the intercept
Eigen::MatrixXd activations(const RowMatrix& features, const std::vector<double>& weights,
                            const std::vector<double>& biases, std::size_t width) {
    const std::size_t n = features.n_rows, d = features.n_cols;
    Eigen::MatrixXd h(n, width + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < width; ++l) {
            double acc = biases[l];
            for (std::size_t j = 0; j < d; ++j) acc += weights[l * d + j] * features.at(i, j);
            h(i, l) = sigmoid(acc);
        }
        h(i, width) = 1.0;
    }
    return h;
}

// ridge-regularized normal equations, lambda = kElmRidge
void solve_output(ElmModel& model, const RowMatrix& features, std::span<const double> targets) {
    const std::size_t n = features.n_rows;
    Eigen::MatrixXd h = activations(features, model.input_weights, model.biases,
                                    model.hidden_width);
    Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd gram = h.transpose() * h;
    gram.diagonal().array() += kElmRidge;
    Eigen::VectorXd beta = gram.ldlt().solve(h.transpose() * y);

    model.output_weights.assign(beta.data(), beta.data() + model.hidden_width);
    model.output_bias = beta(static_cast<Eigen::Index>(model.hidden_width));
}

}  // namespace

ElmModel elm_fit(const RowMatrix& features, std::span<const double> targets,
                 std::size_t width, std::uint64_t seed) {
    check_rows(features, "elm_fit");
    if (width < 1) throw validation_error("elm_fit: width must be >= 1");
    if (targets.size() != features.n_rows)
        throw validation_error("elm_fit: targets length does not match feature rows");
    for (double v : targets)
        if (!std::isfinite(v)) throw validation_error("elm_fit: non-finite target");

    ElmModel model;
    model.hidden_width = width;
    model.input_dim = features.n_cols;
    model.seed = seed;
    draw_weights(width, features.n_cols, seed, model.input_weights, model.biases);
    solve_output(model, features, targets);
    return model;
}

double elm_eval(const ElmModel& model, std::span<const double> row) {
    if (row.size() != model.input_dim)
        throw validation_error("elm_eval: row length does not match input dimension");
    double out = model.output_bias;
    for (std::size_t l = 0; l < model.hidden_width; ++l) {
        double acc = model.biases[l];
        for (std::size_t j = 0; j < model.input_dim; ++j)
            acc += model.input_weights[l * model.input_dim + j] * row[j];
        out += model.output_weights[l] * sigmoid(acc);
    }
    return out;
}

std::vector<double> gaussian_log_density_target(const RowMatrix& rows) {
    check_rows(rows, "gaussian_log_density_target");
    const std::size_t n = rows.n_rows, d = rows.n_cols;
    if (n < 2) throw validation_error("gaussian_log_density_target: need at least 2 rows");

    std::vector<double> mean(d, 0.0), var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += rows.at(i, j);
    for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = rows.at(i, j) - mean[j];
            var[j] += dev * dev;
        }
    for (std::size_t j = 0; j < d; ++j) {
        var[j] /= static_cast<double>(n);
        if (var[j] <= 0.0)
            throw validation_error("gaussian_log_density_target: zero variance in feature " +
                                   std::to_string(j + 1));
    }

    std::vector<double> targets(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = rows.at(i, j) - mean[j];
            acc += -0.5 * std::log(2.0 * std::numbers::pi * var[j]) - dev * dev / (2.0 * var[j]);
        }
        targets[i] = acc;
    }
    return targets;
}

EbmModel ebm_train(const RowMatrix& rows, std::size_t layers, double t0, double cool,
                   std::uint64_t seed) {
    check_rows(rows, "ebm_train");
    if (rows.n_rows < 2) throw validation_error("ebm_train: need at least 2 rows");
    if (layers < 1) throw validation_error("ebm_train: layers must be >= 1");
    if (!(t0 > 0.0)) throw validation_error("ebm_train: t0 must be positive");
    if (!(cool > 0.0 && cool < 1.0)) throw validation_error("ebm_train: cooling factor in (0,1)");

    EbmModel model;
    model.t0 = t0;
    model.cool = cool;
    model.train_rows = rows.n_rows;
    model.temperatures.resize(layers);
    for (std::size_t l = 0; l < layers; ++l)
        model.temperatures[l] = t0 * std::pow(cool, static_cast<double>(l));

    model.elm.hidden_width = layers;
    model.elm.input_dim = rows.n_cols;
    model.elm.seed = seed;
    draw_weights(layers, rows.n_cols, seed, model.elm.input_weights, model.elm.biases);
    for (std::size_t l = 0; l < layers; ++l) {
        const double inv_t = 1.0 / model.temperatures[l];
        for (std::size_t j = 0; j < rows.n_cols; ++j)
            model.elm.input_weights[l * rows.n_cols + j] *= inv_t;
        model.elm.biases[l] *= inv_t;
    }

    const std::vector<double> targets = gaussian_log_density_target(rows);
    solve_output(model.elm, rows, targets);
    model.log_z = log_partition(model.elm, rows);
    return model;
}

double ebm_energy(const EbmModel& model, std::span<const double> row) {
    return elm_eval(model.elm, row) + model.log_z;
}

double log_partition(const ElmModel& model, const RowMatrix& rows) {
    if (rows.n_rows == 0) throw validation_error("log_partition: no rows");
    std::vector<double> vals(rows.n_rows);
    for (std::size_t i = 0; i < rows.n_rows; ++i) vals[i] = elm_eval(model, rows.row(i));
    const double hi = *std::max_element(vals.begin(), vals.end());
    double acc = 0.0;
    for (double v : vals) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

std::vector<double> batch_energies(const EbmModel& model, const RowMatrix& rows) {
    if (rows.n_cols != model.elm.input_dim)
        throw validation_error("batch_energies: column count does not match model dimension");
    std::vector<double> out(rows.n_rows);
    const auto n = static_cast<std::ptrdiff_t>(rows.n_rows);
    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = ebm_energy(model, rows.row(static_cast<std::size_t>(i)));
    return out;
}

namespace reference {

std::vector<double> batch_energies(const EbmModel& model, const RowMatrix& rows) {
    if (rows.n_cols != model.elm.input_dim)
        throw validation_error("batch_energies: column count does not match model dimension");
    std::vector<double> out(rows.n_rows);
    for (std::size_t i = 0; i < rows.n_rows; ++i) out[i] = ebm_energy(model, rows.row(i));
    return out;
}

}  // namespace reference

namespace {

std::vector<double> parse_real_line(const std::string& line, std::size_t expect,
                                    const char* what) {
    auto cells = split_csv(line);
    if (cells.size() != expect)
        throw validation_error(std::string("model file: ") + what + " expects " +
                               std::to_string(expect) + " values, got " +
                               std::to_string(cells.size()));
    std::vector<double> out(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto v = parse_real(cells[i]);
        if (!v)
            throw validation_error(std::string("model file: ") + what +
                                   " has unparseable value '" + std::string(cells[i]) + "'");
        out[i] = *v;
    }
    return out;
}

void write_real_line(std::ofstream& out, std::span<const double> vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out << ',';
        out << format_real17(vals[i]);
    }
    out << '\n';
}

}  // namespace

void write_model(const EbmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "EBM,v1," << model.elm.hidden_width << ',' << model.elm.input_dim << ','
        << model.elm.seed << ',' << format_real17(model.t0) << ',' << format_real17(model.cool)
        << ',' << format_real17(model.log_z) << '\n';
    write_real_line(out, model.elm.input_weights);
    write_real_line(out, model.elm.biases);
    write_real_line(out, model.elm.output_weights);
    write_real_line(out, std::span<const double>(&model.elm.output_bias, 1));
    write_real_line(out, model.temperatures);
    out << model.train_rows << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

EbmModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw validation_error("model file: missing header");
    auto head = split_csv(line);
    if (head.size() != 8 || head[0] != "EBM" || head[1] != "v1")
        throw validation_error("model file: bad header, expected EBM,v1,...");

    auto layers = parse_int(head[2]);
    auto dim = parse_int(head[3]);
    auto seed = parse_int(head[4]);
    auto t0 = parse_real(head[5]);
    auto cool = parse_real(head[6]);
    auto log_z = parse_real(head[7]);
    if (!layers || !dim || !seed || *layers < 1 || *dim < 1 || !t0 || !cool || !log_z)
        throw validation_error("model file: unparseable header fields");

    EbmModel model;
    model.elm.hidden_width = static_cast<std::size_t>(*layers);
    model.elm.input_dim = static_cast<std::size_t>(*dim);
    model.elm.seed = static_cast<std::uint64_t>(*seed);
    model.t0 = *t0;
    model.cool = *cool;
    model.log_z = *log_z;

    const std::size_t l = model.elm.hidden_width, d = model.elm.input_dim;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line))
            throw validation_error(std::string("model file: missing ") + what + " line");
        return line;
    };
    model.elm.input_weights = parse_real_line(next_line("input weights"), l * d, "input weights");
    model.elm.biases = parse_real_line(next_line("biases"), l, "biases");
    model.elm.output_weights = parse_real_line(next_line("output weights"), l, "output weights");
    model.elm.output_bias = parse_real_line(next_line("output bias"), 1, "output bias")[0];
    model.temperatures = parse_real_line(next_line("temperatures"), l, "temperatures");
    auto rows = parse_int(next_line("train rows"));
    if (!rows || *rows < 0) throw validation_error("model file: bad train row count");
    model.train_rows = static_cast<std::size_t>(*rows);
    return model;
}

}  // namespace sdm
