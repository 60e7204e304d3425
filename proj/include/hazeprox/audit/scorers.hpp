#pragma once

// Simple no-reference scorers (higher is better) for the quality gate.

#include "hazeprox/audit/audit.hpp"
#include "hazeprox/core/image.hpp"
#include "hazeprox/core/summation.hpp"

#include <array>
#include <cmath>

namespace hazeprox {

/// Mean standard deviation of gray values over clipped 3x3 windows.
inline double local_contrast_score(const RgbImage& image) {
    const ScalarField g = gray(image);
    const auto w = static_cast<long>(g.width());
    const auto h = static_cast<long>(g.height());
    const double total = pairwise_sum_of(g.pixel_count(), [&](std::size_t i) {
        const long x = static_cast<long>(i) % w;
        const long y = static_cast<long>(i) / w;
        const long x0 = std::max(0L, x - 1), x1 = std::min(w - 1, x + 1);
        const long y0 = std::max(0L, y - 1), y1 = std::min(h - 1, y + 1);
        double s = 0.0, n = 0.0;
        for (long yy = y0; yy <= y1; ++yy)
            for (long xx = x0; xx <= x1; ++xx) {
                s += g(xx, yy);
                n += 1.0;
            }
        const double mean = s / n;
        double ss = 0.0;
        for (long yy = y0; yy <= y1; ++yy)
            for (long xx = x0; xx <= x1; ++xx)
                ss += (g(xx, yy) - mean) * (g(xx, yy) - mean);
        return std::sqrt(ss / n);
    });
    return total / static_cast<double>(g.pixel_count());
}

/// Mean squared forward-difference gradient of the gray image.
inline double gradient_energy_score(const RgbImage& image) {
    const ScalarField mag = gradient_magnitude(gray(image));
    const double total = pairwise_sum_of(mag.pixel_count(), [&](std::size_t i) {
        const double m = mag.at_index(i);
        return m * m;
    });
    return total / static_cast<double>(mag.pixel_count());
}

inline std::array<double, 2> gate_scores(const RgbImage& image) {
    return {local_contrast_score(image), gradient_energy_score(image)};
}

} // namespace hazeprox
