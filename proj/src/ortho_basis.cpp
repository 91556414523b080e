#include "sdm/ortho_basis.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "sdm/errors.hpp"

namespace sdm {

namespace {

constexpr double kCosineZero = 1e-12;      // |y| at or below this is the right-angle case
constexpr double kDegenerateScale = 1e-12; // relative floor for |c| / |x|

BasisEntry scaled_entry(const SegmentVector& xk, const SegmentVector& neighbor, ScaleRule rule) {
    BasisEntry e;
    e.rule = rule;
    e.y = cosine_y(xk, neighbor);
    e.c = scale_c(xk, neighbor);
    const double norm = xk.norm();
    if (std::fabs(e.y) <= kCosineZero) {
        // right angle: c == |x|, vector passes through untouched
        e.zt = xk.dt;
        e.zv = xk.dv;
        e.fourier = 1.0;
    } else {
        const double unit_scale = e.c / norm;
        e.zt = xk.dt * unit_scale;
        e.zv = xk.dv * unit_scale;
        e.fourier = norm / e.c;
    }
    return e;
}

BasisEntry passthrough_entry(const SegmentVector& xk, double y) {
    BasisEntry e;
    e.rule = ScaleRule::even;
    e.zt = xk.dt;
    e.zv = xk.dv;
    e.c = xk.norm();
    e.y = y;
    e.fourier = 1.0;
    return e;
}

}  // namespace

const char* to_string(ScaleRule rule) {
    switch (rule) {
        case ScaleRule::odd: return "odd";
        case ScaleRule::even: return "even";
        case ScaleRule::last: return "last";
    }
    return "?";
}

std::vector<SegmentVector> segment_vectors(const SmoothedSeries& series) {
    if (series.times.size() < 2)
        throw validation_error("segment_vectors: need at least 2 points");
    std::vector<SegmentVector> out(series.times.size() - 1);
    for (std::size_t i = 0; i + 1 < series.times.size(); ++i) {
        out[i].dt = series.times[i + 1] - series.times[i];
        out[i].dv = series.values[i + 1] - series.values[i];
        out[i].k = i + 1;
    }
    return out;
}

double cosine_y(const SegmentVector& a, const SegmentVector& b) {
    const double na = a.norm(), nb = b.norm();
    if (na <= 0.0 || nb <= 0.0) throw validation_error("cosine_y: zero-norm segment");
    const double y = (a.dt * b.dt + a.dv * b.dv) / (na * nb);
    return std::clamp(y, -1.0, 1.0);
}

double scale_c(const SegmentVector& xk, const SegmentVector& neighbor) {
    const double norm = xk.norm();
    const double nb_norm = neighbor.norm();
    if (norm <= 0.0 || nb_norm <= 0.0) throw validation_error("scale_c: zero-norm segment");

    const double y = cosine_y(xk, neighbor);
    double c;
    if (std::fabs(y) <= kCosineZero) {
        c = norm;                 // arccos(y) == pi/2
    } else if (y < 0.0) {
        c = norm + y * nb_norm;   // arccos(y) > pi/2
    } else {
        c = norm - y * nb_norm;   // arccos(y) < pi/2
    }
    if (std::fabs(c) < kDegenerateScale * norm)
        throw validation_error("scale_c: degenerate scaling constant at segment " +
                               std::to_string(xk.k));
    return c;
}

OrthoBasis orthogonalize(std::span<const SegmentVector> vectors) {
    const std::size_t s = vectors.size();
    if (s < 2) throw validation_error("orthogonalize: need at least 2 segment vectors");
    for (const auto& v : vectors)
        if (v.norm() <= 0.0)
            throw validation_error("orthogonalize: zero-norm segment at index " +
                                   std::to_string(v.k));

    OrthoBasis basis;
    basis.entries.resize(s);
    const bool s_odd = (s % 2 != 0);
    const auto n = static_cast<std::ptrdiff_t>(s);

    // Entries are independent; exceptions cannot cross the parallel region,
    // so degenerate scales are recorded and reported afterwards.
    std::atomic<std::ptrdiff_t> bad{-1};

    #pragma omp parallel for schedule(static) if (s > 4096)
    for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
        const std::size_t k = static_cast<std::size_t>(idx) + 1;  // 1-based
        try {
            if (k == s) {
                basis.entries[idx] = s_odd
                    ? scaled_entry(vectors[idx], vectors[idx - 1], ScaleRule::last)
                    : passthrough_entry(vectors[idx], cosine_y(vectors[idx], vectors[idx - 1]));
            } else if (k % 2 == 1) {
                basis.entries[idx] = scaled_entry(vectors[idx], vectors[idx + 1], ScaleRule::odd);
            } else {
                basis.entries[idx] =
                    passthrough_entry(vectors[idx], cosine_y(vectors[idx], vectors[idx + 1]));
            }
        } catch (const validation_error&) {
            std::ptrdiff_t cur = bad.load(std::memory_order_relaxed);
            while ((cur < 0 || idx < cur) &&
                   !bad.compare_exchange_weak(cur, idx, std::memory_order_relaxed)) {
            }
        }
    }

    if (bad.load() >= 0)
        throw validation_error("orthogonalize: degenerate scaling constant at segment " +
                               std::to_string(bad.load() + 1));
    return basis;
}

std::vector<SegmentVector> reconstruct(const OrthoBasis& basis) {
    std::vector<SegmentVector> out(basis.entries.size());
    for (std::size_t i = 0; i < basis.entries.size(); ++i) {
        const BasisEntry& e = basis.entries[i];
        if (e.c == 0.0)
            throw validation_error("reconstruct: zero scaling constant at segment " +
                                   std::to_string(i + 1));
        out[i].dt = e.zt * e.fourier;
        out[i].dv = e.zv * e.fourier;
        out[i].k = i + 1;
    }
    return out;
}

}  // namespace sdm
