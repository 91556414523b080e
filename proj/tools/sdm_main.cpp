// sdm: command-line front end for the sensor diffusion modeling pipeline.
//
// Subcommands: normtest | smooth | basis | train | classify | predict |
// simulate | rules-check.  Each run prints one machine-parseable summary
// line of space-separated key=value pairs to stdout.  Exit codes: 0 on
// success, 1 on validation errors, 2 on I/O errors.  Inputs are validated
// before any output file is opened.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sdm/diffusion.hpp"
#include "sdm/ebm.hpp"
#include "sdm/errors.hpp"
#include "sdm/matrix.hpp"
#include "sdm/normality.hpp"
#include "sdm/ortho_basis.hpp"
#include "sdm/phase_tree.hpp"
#include "sdm/real_text.hpp"
#include "sdm/series.hpp"
#include "sdm/smoothing.hpp"

namespace {

struct Options {
    std::string in_path, out_path, model_path, rules_path, rules_out_path, paths_out_path;
    std::size_t feature = 0;
    double alpha = 0.05;
    std::size_t layers = 8;
    double t0 = 2.0;
    double cool = 0.5;
    std::uint64_t seed = 1;
    std::optional<std::size_t> k_override;
    double tau = 0.0;
    double horizon = 1.0;
    std::optional<double> sigma2;
    std::size_t n_paths = 0;
    std::size_t steps = 100;
    double dt = 1.0;
    std::size_t trials = 1000;
};

sdm::SampleSeries load_input(const std::string& path) {
    return sdm::load_series(path, sdm::sniff_header(path));
}

std::string real_out(double v) { return sdm::format_real17(v); }

int cmd_normtest(const Options& opt) {
    auto series = load_input(opt.in_path);
    auto res = sdm::sw_test_increments(series, opt.feature, opt.alpha);
    std::cout << "n=" << res.n << " w=" << real_out(res.w) << " p=" << real_out(res.p_value)
              << " reject=" << (res.reject_normality ? 1 : 0) << "\n";
    return 0;
}

int cmd_smooth(const Options& opt) {
    auto series = load_input(opt.in_path);
    auto smoothed = sdm::smooth_series(series, opt.feature);

    sdm::SampleSeries out;
    out.times = smoothed.times;
    out.values = smoothed.values;
    out.n_features = 1;
    out.feature_names = {smoothed.name};
    sdm::write_series(out, opt.out_path);
    std::cout << "n=" << out.n_rows() << " out=" << opt.out_path << "\n";
    return 0;
}

int cmd_basis(const Options& opt) {
    auto series = load_input(opt.in_path);
    if (series.n_rows() < 3)
        throw sdm::validation_error("basis: need at least 3 points (2 segment vectors)");
    sdm::SmoothedSeries view;
    view.times = series.times;
    view.values = series.column(opt.feature);
    view.source_length = series.n_rows();
    auto vectors = sdm::segment_vectors(view);
    auto basis = sdm::orthogonalize(vectors);

    std::ofstream out(opt.out_path);
    if (!out) throw sdm::io_error("cannot open '" + opt.out_path + "' for writing");
    out << "k,zt,zv,c,y,fourier,parity\n";
    for (std::size_t i = 0; i < basis.entries.size(); ++i) {
        const auto& e = basis.entries[i];
        out << (i + 1) << ',' << real_out(e.zt) << ',' << real_out(e.zv) << ',' << real_out(e.c)
            << ',' << real_out(e.y) << ',' << real_out(e.fourier) << ',' << to_string(e.rule)
            << '\n';
    }
    if (!out) throw sdm::io_error("write failed for '" + opt.out_path + "'");
    std::cout << "segments=" << basis.entries.size() << " out=" << opt.out_path << "\n";
    return 0;
}

int cmd_train(const Options& opt) {
    auto series = load_input(opt.in_path);
    auto rows = sdm::values_matrix(series);
    auto model = sdm::ebm_train(rows, opt.layers, opt.t0, opt.cool, opt.seed);
    sdm::write_model(model, opt.out_path);
    std::cout << "rows=" << rows.n_rows << " d=" << rows.n_cols << " layers=" << opt.layers
              << " logz=" << real_out(model.log_z) << " out=" << opt.out_path << "\n";
    return 0;
}

int cmd_classify(const Options& opt) {
    if (opt.rules_out_path.empty() == opt.rules_path.empty())
        throw sdm::validation_error(
            "classify: give exactly one of --rules-out (build) or --rules (apply)");

    auto series = load_input(opt.in_path);
    auto rows = sdm::values_matrix(series);
    auto model = sdm::read_model(opt.model_path);

    if (!opt.rules_out_path.empty()) {
        const std::size_t k = sdm::target_class_count(rows.n_cols, opt.k_override);
        auto tree = sdm::build_tree(rows, model, k, opt.tau);
        auto rules = sdm::extract_rules(tree, rows);
        sdm::write_rules(rules, opt.rules_out_path);
        std::cout << "rows=" << rows.n_rows << " k=" << k << " leaves=" << rules.size()
                  << " out=" << opt.rules_out_path << "\n";
        return 0;
    }

    if (opt.out_path.empty())
        throw sdm::validation_error("classify: apply mode needs --out");
    auto rules = sdm::read_rules(opt.rules_path);
    if (rules.empty()) throw sdm::validation_error("classify: rule file has no rules");
    if (rules.front().bits.size() != rows.n_cols)
        throw sdm::validation_error("classify: rule width does not match input features");
    auto energies = sdm::batch_energies(model, rows);

    std::ofstream out(opt.out_path);
    if (!out) throw sdm::io_error("cannot open '" + opt.out_path + "' for writing");
    out << "row,energy,class,pred\n";
    for (std::size_t i = 0; i < rows.n_rows; ++i) {
        const auto& rule = sdm::classify_point(rules, model, rows.row(i));
        out << (i + 1) << ',' << real_out(energies[i]) << ',' << rule.class_id << ','
            << rule.pred_bits << '\n';
    }
    if (!out) throw sdm::io_error("write failed for '" + opt.out_path + "'");
    std::cout << "rows=" << rows.n_rows << " rules=" << rules.size() << " out=" << opt.out_path
              << "\n";
    return 0;
}

int cmd_predict(const Options& opt) {
    auto series = load_input(opt.in_path);
    auto smoothed = sdm::smooth_series(series, opt.feature);
    const double sigma2 = opt.sigma2 ? *opt.sigma2 : sdm::fit_sigma2(smoothed);
    auto res = sdm::forecast(smoothed, opt.horizon, sigma2);
    res.seed = opt.seed;

    if (opt.n_paths > 0) {
        const double dt = opt.horizon / static_cast<double>(opt.steps);
        res.paths = sdm::sample_paths(res.mean, sigma2, dt, opt.steps, opt.n_paths, opt.seed);
        if (!opt.paths_out_path.empty()) {
            sdm::SampleSeries ps;
            ps.n_features = opt.n_paths;
            for (std::size_t p = 0; p < opt.n_paths; ++p)
                ps.feature_names.push_back("path" + std::to_string(p + 1));
            const double last_t = smoothed.times.back();
            for (std::size_t s = 0; s < opt.steps; ++s) {
                ps.times.push_back(last_t + dt * static_cast<double>(s + 1));
                for (std::size_t p = 0; p < opt.n_paths; ++p)
                    ps.values.push_back(res.paths->at(p, s));
            }
            sdm::write_series(ps, opt.paths_out_path);
        }
    }

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw sdm::io_error("cannot open '" + opt.out_path + "' for writing");
        out << "horizon,mean,variance,sigma2\n"
            << real_out(res.horizon) << ',' << real_out(res.mean) << ','
            << real_out(res.variance) << ',' << real_out(sigma2) << '\n';
        if (!out) throw sdm::io_error("write failed for '" + opt.out_path + "'");
    }
    std::cout << "mean=" << real_out(res.mean) << " variance=" << real_out(res.variance)
              << " sigma2=" << real_out(sigma2) << " horizon=" << real_out(res.horizon) << "\n";
    return 0;
}

int cmd_simulate(const Options& opt) {
    auto series = sdm::simulate_brownian(opt.steps, opt.dt, opt.seed);
    sdm::write_series(series, opt.out_path);
    std::cout << "steps=" << opt.steps << " dt=" << real_out(opt.dt) << " seed=" << opt.seed
              << " out=" << opt.out_path << "\n";
    return 0;
}

int cmd_rules_check(const Options& opt) {
    auto rules = sdm::read_rules(opt.rules_path);
    std::size_t width = rules.empty() ? 0 : rules.front().bits.size();
    std::cout << "rules=" << rules.size() << " s=" << width << " ok=1\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sensor diffusion modeling pipeline"};
    app.require_subcommand(1);
    Options opt;

    auto* normtest = app.add_subcommand("normtest", "Shapiro-Wilk test on step differences");
    normtest->add_option("--in", opt.in_path, "input series CSV")->required();
    normtest->add_option("--feature", opt.feature, "feature column index (0-based)");
    normtest->add_option("--alpha", opt.alpha, "significance level")
        ->check(CLI::Range(1e-12, 0.5));

    auto* smooth = app.add_subcommand("smooth", "pairwise-average MLE smoothing");
    smooth->add_option("--in", opt.in_path, "input series CSV")->required();
    smooth->add_option("--out", opt.out_path, "output series CSV")->required();
    smooth->add_option("--feature", opt.feature, "feature column index (0-based)");

    auto* basis = app.add_subcommand("basis", "segment rescaling onto the orthogonal basis");
    basis->add_option("--in", opt.in_path, "smoothed series CSV (see smooth)")->required();
    basis->add_option("--out", opt.out_path, "output basis CSV")->required();
    basis->add_option("--feature", opt.feature, "feature column index (0-based)");

    auto* train = app.add_subcommand("train", "fit the energy-based density model");
    train->add_option("--in", opt.in_path, "training series CSV")->required();
    train->add_option("--out", opt.out_path, "output model file")->required();
    train->add_option("--layers", opt.layers, "hidden layer count")->check(CLI::PositiveNumber);
    train->add_option("--t0", opt.t0, "initial annealing temperature")
        ->check(CLI::PositiveNumber);
    train->add_option("--cool", opt.cool, "cooling factor in (0,1)");
    train->add_option("--seed", opt.seed, "weight seed");

    auto* classify = app.add_subcommand("classify", "build or apply energy association rules");
    classify->add_option("--in", opt.in_path, "series CSV")->required();
    classify->add_option("--model", opt.model_path, "trained model file")->required();
    classify->add_option("--rules-out", opt.rules_out_path, "build rules and write them here");
    classify->add_option("--rules", opt.rules_path, "apply rules read from here");
    classify->add_option("--out", opt.out_path, "per-row assignment CSV (apply mode)");
    classify->add_option("--k", opt.k_override, "target leaf count (default 2^s)");
    classify->add_option("--tau", opt.tau, "relative gap floor in [0,1)");

    auto* predict = app.add_subcommand("predict", "martingale forecast with diffusion variance");
    predict->add_option("--in", opt.in_path, "input series CSV")->required();
    predict->add_option("--feature", opt.feature, "feature column index (0-based)");
    predict->add_option("--horizon", opt.horizon, "forecast horizon in seconds")->required();
    predict->add_option("--sigma2", opt.sigma2, "diffusion coefficient (default: fitted)");
    predict->add_option("--out", opt.out_path, "forecast summary CSV");
    predict->add_option("--paths", opt.n_paths, "number of sampled future paths");
    predict->add_option("--steps", opt.steps, "steps per sampled path");
    predict->add_option("--paths-out", opt.paths_out_path, "sampled paths CSV");
    predict->add_option("--seed", opt.seed, "path sampling seed");

    auto* simulate = app.add_subcommand("simulate", "seeded unit Brownian path");
    simulate->add_option("--steps", opt.steps, "number of increments")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--dt", opt.dt, "time step in seconds")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", opt.seed, "path seed");
    simulate->add_option("--out", opt.out_path, "output series CSV")->required();

    auto* rules_check = app.add_subcommand("rules-check", "validate a rule file");
    rules_check->add_option("--rules", opt.rules_path, "rule file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return 1;
    }

    try {
        if (normtest->parsed()) return cmd_normtest(opt);
        if (smooth->parsed()) return cmd_smooth(opt);
        if (basis->parsed()) return cmd_basis(opt);
        if (train->parsed()) return cmd_train(opt);
        if (classify->parsed()) return cmd_classify(opt);
        if (predict->parsed()) return cmd_predict(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (rules_check->parsed()) return cmd_rules_check(opt);
    } catch (const sdm::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const sdm::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
