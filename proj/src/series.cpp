#include "sdm/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdm/errors.hpp"
#include "sdm/real_text.hpp"

namespace sdm {

std::string format_real17(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_real(std::string_view token) {
    if (token.empty()) return std::nullopt;
    double out;
    auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
    return out;
}

std::optional<long long> parse_int(std::string_view token) {
    if (token.empty()) return std::nullopt;
    long long out;
    auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
    return out;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<double> SampleSeries::column(std::size_t col) const {
    std::vector<double> out(n_rows());
    for (std::size_t r = 0; r < n_rows(); ++r) out[r] = value(r, col);
    return out;
}

namespace {

// strip one trailing '\r' so CRLF input still parses
std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

}  // namespace

SampleSeries load_series(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    SampleSeries series;
    std::string line;
    std::size_t line_no = 0;
    bool expect_header = has_header;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim_cr(line);
        if (sv.empty()) continue;

        auto cells = split_csv(sv);
        if (expect_header) {
            expect_header = false;
            if (cells.size() < 2)
                throw validation_error("line 1: header must name t and at least one feature");
            series.feature_names.assign(cells.begin() + 1, cells.end());
            continue;
        }
        if (cells.size() < 2)
            throw validation_error("line " + std::to_string(line_no) +
                                   ": expected t and at least one value");
        if (series.n_features == 0) {
            series.n_features = cells.size() - 1;
        } else if (cells.size() - 1 != series.n_features) {
            throw validation_error("line " + std::to_string(line_no) + ": ragged row, expected " +
                                   std::to_string(series.n_features + 1) + " cells, got " +
                                   std::to_string(cells.size()));
        }
        auto t = parse_real(cells[0]);
        if (!t)
            throw validation_error("line " + std::to_string(line_no) +
                                   ": non-numeric timestamp '" + std::string(cells[0]) + "'");
        series.times.push_back(*t);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            auto v = parse_real(cells[c]);
            if (!v)
                throw validation_error("line " + std::to_string(line_no) + ": non-numeric cell '" +
                                       std::string(cells[c]) + "'");
            series.values.push_back(*v);
        }
    }

    if (series.n_rows() == 0) throw validation_error("'" + path + "': empty body");
    if (series.feature_names.size() != series.n_features) {
        if (!series.feature_names.empty())
            throw validation_error("header names " + std::to_string(series.feature_names.size()) +
                                   " features but rows carry " +
                                   std::to_string(series.n_features));
        series.feature_names.resize(series.n_features);
        for (std::size_t c = 0; c < series.n_features; ++c)
            series.feature_names[c] = "v" + std::to_string(c + 1);
    }

    auto issues = validate_series(series);
    if (!issues.empty()) throw validation_error("'" + path + "': " + issues.front());
    return series;
}

bool sniff_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) return false;
    std::string_view sv = trim_cr(line);
    return sv.size() >= 2 && sv[0] == 't' && sv[1] == ',';
}

std::vector<std::string> validate_series(const SampleSeries& series) {
    std::vector<std::string> issues;
    if (series.n_features < 1) issues.push_back("series has no features (s >= 1 required)");
    if (series.n_rows() < 1) issues.push_back("series has no rows (N >= 1 required)");
    if (series.values.size() != series.n_rows() * series.n_features)
        issues.push_back("value matrix shape does not match times length and feature count");
    if (series.feature_names.size() != series.n_features)
        issues.push_back("feature_names length does not match feature count");
    for (std::size_t r = 0; r + 1 < series.n_rows(); ++r) {
        if (!(series.times[r] < series.times[r + 1])) {
            issues.push_back("times not strictly increasing at row " + std::to_string(r + 2));
            break;
        }
    }
    for (std::size_t r = 0; r < series.n_rows(); ++r) {
        if (!std::isfinite(series.times[r])) {
            issues.push_back("non-finite timestamp at row " + std::to_string(r + 1));
            break;
        }
    }
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (!std::isfinite(series.values[i])) {
            issues.push_back("non-finite value at row " + std::to_string(i / series.n_features + 1) +
                             ", column " + std::to_string(i % series.n_features + 1));
            break;
        }
    }
    return issues;
}

void write_series(const SampleSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "t";
    for (const auto& name : series.feature_names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < series.n_rows(); ++r) {
        out << format_real17(series.times[r]);
        for (std::size_t c = 0; c < series.n_features; ++c)
            out << ',' << format_real17(series.value(r, c));
        out << '\n';
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace sdm
