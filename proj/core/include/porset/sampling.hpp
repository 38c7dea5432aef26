#pragma once

#include <cstdint>
#include <random>

#include "porset/construction.hpp"

namespace porset {

/// Seeded stream of reals. Uses the raw 64-bit engine output rather than
/// std::uniform_real_distribution so sequences are identical across
/// standard library implementations.
class SampleStream {
public:
    explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) on the 2^-53 grid.
    double unit() { return static_cast<double>(engine_() >> 11U) * 0x1p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    Point in_box(const Box& b) {
        const double x = uniform(b.xmin, b.xmax);
        return {x, uniform(b.ymin, b.ymax)};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace porset
