#pragma once

#include "hazeprox/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hazeprox::filters {

/// Normalized Gaussian taps for offsets -r..r with r = ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0))
        return {1.0};
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * r + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[i + r] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += k[i + r];
    }
    for (double& v : k)
        v /= sum;
    return k;
}

/// Separable Gaussian blur with replicate border.
inline ScalarField gaussian_blur(const ScalarField& in, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    if (r == 0)
        return in;
    const auto w = static_cast<long>(in.width());
    const auto h = static_cast<long>(in.height());
    ScalarField tmp(in.width(), in.height());
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -r; i <= r; ++i)
                s += k[i + r] * in(std::clamp(x + i, 0L, w - 1), y);
            tmp(x, y) = s;
        }
    }
    ScalarField out(in.width(), in.height());
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -r; i <= r; ++i)
                s += k[i + r] * tmp(x, std::clamp(y + i, 0L, h - 1));
            out(x, y) = s;
        }
    }
    return out;
}

/// Bilinear resampling with pixel-centre alignment and edge clamping.
inline ScalarField resize_bilinear(const ScalarField& in, std::size_t width, std::size_t height) {
    ScalarField out(width, height);
    const double sx = static_cast<double>(in.width()) / static_cast<double>(width);
    const double sy = static_cast<double>(in.height()) / static_cast<double>(height);
    const double max_x = static_cast<double>(in.width() - 1);
    const double max_y = static_cast<double>(in.height() - 1);
    for (std::size_t y = 0; y < height; ++y) {
        const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
        const auto y0 = static_cast<std::size_t>(fy);
        const std::size_t y1 = std::min(y0 + 1, in.height() - 1);
        const double wy = fy - static_cast<double>(y0);
        for (std::size_t x = 0; x < width; ++x) {
            const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
            const auto x0 = static_cast<std::size_t>(fx);
            const std::size_t x1 = std::min(x0 + 1, in.width() - 1);
            const double wx = fx - static_cast<double>(x0);
            const double top = (1.0 - wx) * in(x0, y0) + wx * in(x1, y0);
            const double bottom = (1.0 - wx) * in(x0, y1) + wx * in(x1, y1);
            out(x, y) = (1.0 - wy) * top + wy * bottom;
        }
    }
    return out;
}

} // namespace hazeprox::filters
