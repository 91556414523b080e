#pragma once

#include <cmath>
#include <cstdint>

// Seeded random number generation.
//
// The seed-to-output mapping below is part of the persistence contract:
// a model trained or a path simulated from a given seed must reproduce
// bit-for-bit across releases and platforms.  Nothing here may be swapped
// for a standard-library distribution (std::normal_distribution is
// implementation-defined and differs between libstdc++ and libc++).
//
//   SplitMix64   state += 0x9E3779B97F4A7C15; output = mix64(state)
//                with mix64 the xorshift/multiply finalizer used below.
//   normals      128-layer ziggurat over SplitMix64 (layer index from the
//                low 7 bits, mantissa from the high 53 bits of one draw).
//
// Independent streams are derived by seeding: stream k of a simulation
// seeded with `seed` uses SplitMix64(seed + k).

namespace sdm {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0,1), safe under log()
    double u01_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

namespace detail {

struct ZigguratTable {
    static constexpr int kLayers = 128;
    static constexpr double kR = 3.442619855899;
    static constexpr double kV = 9.91256303526217e-3;
    double x[kLayers + 1];
    double ratio[kLayers];

    ZigguratTable() {
        double f = std::exp(-0.5 * kR * kR);
        x[0] = kV / f;
        x[1] = kR;
        x[kLayers] = 0.0;
        for (int i = 2; i < kLayers; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
            f = std::exp(-0.5 * x[i] * x[i]);
        }
        for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

inline const ZigguratTable kZiggurat{};

}  // namespace detail

// Stream of standard-normal draws.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        const auto& t = detail::kZiggurat;
        for (;;) {
            std::uint64_t bits = gen_.next();
            int i = static_cast<int>(bits & 0x7F);
            // signed uniform in (-1,1) from the top 53 bits
            double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-52 - 1.0;
            if (std::fabs(u) < t.ratio[i]) return u * t.x[i];
            if (i == 0) return tail(u < 0.0);
            double z = u * t.x[i];
            double f0 = std::exp(-0.5 * (t.x[i] * t.x[i] - z * z));
            double f1 = std::exp(-0.5 * (t.x[i + 1] * t.x[i + 1] - z * z));
            if (f1 + gen_.u01() * (f0 - f1) < 1.0) return z;
        }
    }

    SplitMix64& engine() { return gen_; }

  private:
    double tail(bool negative) {
        // Marsaglia tail sampler for |z| > kR
        double zx, zy;
        do {
            zx = std::log(gen_.u01_open()) / detail::ZigguratTable::kR;
            zy = std::log(gen_.u01_open());
        } while (-2.0 * zy < zx * zx);
        return negative ? zx - detail::ZigguratTable::kR
                        : detail::ZigguratTable::kR - zx;
    }

    SplitMix64 gen_;
};

}  // namespace sdm
