#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sdm/smoothing.hpp"

// Segment vectors between successive smoothed points live in the
// (time, value) plane.  Odd-indexed vectors are rescaled against their
// successor by the angle-dependent constant
//
//   c = |x| + y|nb|   if arccos(y) > pi/2
//   c = |x|           if arccos(y) = pi/2   (|y| <= 1e-12)
//   c = |x| - y|nb|   if arccos(y) < pi/2
//
// even-indexed vectors pass through unchanged, and the last vector of an
// odd-length sequence is rescaled against its predecessor.  The recorded
// factor |x|/c recovers the original vector from the scaled one exactly.

namespace sdm {

struct SegmentVector {
    double dt = 0.0;     // time component
    double dv = 0.0;     // value component
    std::size_t k = 0;   // 1-based index

    double norm() const { return std::sqrt(dt * dt + dv * dv); }
};

enum class ScaleRule { odd, even, last };

const char* to_string(ScaleRule rule);

struct BasisEntry {
    double zt = 0.0;       // scaled vector, time component
    double zv = 0.0;       // scaled vector, value component
    double c = 0.0;        // scaling constant
    double y = 0.0;        // cosine against the paired neighbor
    double fourier = 1.0;  // |x|/c, the rescaling factor
    ScaleRule rule = ScaleRule::even;
};

struct OrthoBasis {
    std::vector<BasisEntry> entries;  // entry i describes segment k = i+1
};

std::vector<SegmentVector> segment_vectors(const SmoothedSeries& series);

// Cosine of the angle between two segment vectors, clamped to [-1,1].
double cosine_y(const SegmentVector& a, const SegmentVector& b);

// Scaling constant for xk against its paired neighbor.  Throws when the
// result is degenerate (|c| < 1e-12 |xk|): the reconstruction factor
// |xk|/c is unbounded there.
double scale_c(const SegmentVector& xk, const SegmentVector& neighbor);

OrthoBasis orthogonalize(std::span<const SegmentVector> vectors);

// Exact inverse of orthogonalize: x_k = z_k * (|x_k|/c_k).
std::vector<SegmentVector> reconstruct(const OrthoBasis& basis);

}  // namespace sdm
