#pragma once

#include "hazeprox/core/image.hpp"
#include "hazeprox/core/summation.hpp"

#include <cmath>
#include <limits>

namespace hazeprox {

template <std::size_t C>
double mean_squared_error(const Image<C>& a, const Image<C>& b) {
    require_same_shape("image", a, b);
    const auto va = a.values();
    const auto vb = b.values();
    const double s = pairwise_sum_of(va.size(), [&](std::size_t i) {
        const double d = va[i] - vb[i];
        return d * d;
    });
    return s / static_cast<double>(va.size());
}

template <std::size_t C>
double mean_absolute_error(const Image<C>& a, const Image<C>& b) {
    require_same_shape("image", a, b);
    const auto va = a.values();
    const auto vb = b.values();
    const double s = pairwise_sum_of(va.size(), [&](std::size_t i) { return std::abs(va[i] - vb[i]); });
    return s / static_cast<double>(va.size());
}

/// PSNR in dB for unit peak; +inf for identical images.
template <std::size_t C>
double psnr(const Image<C>& a, const Image<C>& b) {
    const double mse = mean_squared_error(a, b);
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(mse);
}

} // namespace hazeprox
